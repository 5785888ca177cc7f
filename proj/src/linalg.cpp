#include "dressim/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace dressim {

double max_abs(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

bool all_finite(const Matrix& m) {
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i) {
            const Complex z = m(i, j);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
    return true;
}

double hermiticity_defect(const Matrix& m) {
    return max_abs(m - m.adjoint());
}

double unitarity_defect(const Matrix& m) {
    return max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols()));
}

namespace {

void require_square_finite(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        std::ostringstream os;
        os << what << ": matrix must be square, got " << m.rows() << "x" << m.cols();
        throw ContractViolation(os.str());
    }
    if (!all_finite(m)) throw ContractViolation(std::string(what) + ": matrix has non-finite entries");
}

} // namespace

HermitianOperator HermitianOperator::from(Matrix m, const NumericalPolicy& pol) {
    require_square_finite(m, "HermitianOperator");
    const double scale = max_abs(m);
    const double defect = hermiticity_defect(m);
    if (defect > pol.hermiticity_tol * std::max(scale, 1e-300)) {
        std::ostringstream os;
        os << "HermitianOperator: hermiticity defect " << defect << " exceeds "
           << pol.hermiticity_tol << " * " << scale;
        throw ContractViolation(os.str());
    }
    return HermitianOperator(std::move(m));
}

UnitaryOperator UnitaryOperator::from(Matrix m, const NumericalPolicy& pol) {
    require_square_finite(m, "UnitaryOperator");
    const double defect = unitarity_defect(m);
    if (defect > pol.unitarity_tol) {
        std::ostringstream os;
        os << "UnitaryOperator: unitarity defect " << defect << " exceeds " << pol.unitarity_tol;
        throw ContractViolation(os.str());
    }
    return UnitaryOperator(std::move(m));
}

Matrix kron(const Matrix& a, const Matrix& b, const NumericalPolicy& pol) {
    const Index rows = a.rows() * b.rows();
    const Index cols = a.cols() * b.cols();
    if (rows > pol.max_hilbert_dim || cols > pol.max_hilbert_dim) {
        std::ostringstream os;
        os << "kron: product dimension " << rows << "x" << cols
           << " exceeds max Hilbert dimension " << pol.max_hilbert_dim;
        throw CapacityError(os.str());
    }
    Matrix out(rows, cols);
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Spectrum eigh(const HermitianOperator& h, const NumericalPolicy& pol) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
    if (solver.info() != Eigen::Success) {
        std::ostringstream os;
        os << "eigh: eigensolver failed to converge on a " << h.dim() << "x" << h.dim()
           << " matrix (||H||max = " << max_abs(h.matrix()) << ")";
        throw NumericalError(os.str());
    }
    return Spectrum{solver.eigenvalues(),
                    UnitaryOperator::from(solver.eigenvectors(), pol)};
}

UnitaryOperator expm_antihermitian(const Matrix& g, const NumericalPolicy& pol) {
    require_square_finite(g, "expm_antihermitian");
    // G anti-Hermitian <=> iG Hermitian.
    const double scale = std::max(max_abs(g), 1e-300);
    const double defect = max_abs(g + g.adjoint());
    if (defect > pol.hermiticity_tol * std::max(scale, 1.0)) {
        std::ostringstream os;
        os << "expm_antihermitian: generator is not anti-Hermitian (defect " << defect << ")";
        throw ContractViolation(os.str());
    }
    const Matrix herm = Complex(0.0, 1.0) * g;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
    if (solver.info() != Eigen::Success)
        throw NumericalError("expm_antihermitian: eigensolver failed to converge");
    // exp(G) = exp(-i (iG)) = V exp(-i diag) V†
    const RealVector& lam = solver.eigenvalues();
    Vector phases(lam.size());
    for (Index k = 0; k < lam.size(); ++k)
        phases(k) = std::exp(Complex(0.0, -lam(k)));
    Matrix u = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
    return UnitaryOperator::from(std::move(u), pol);
}

HermitianOperator conjugate(const HermitianOperator& h, const UnitaryOperator& u,
                            const NumericalPolicy& pol) {
    if (h.dim() != u.dim()) {
        std::ostringstream os;
        os << "conjugate: dimension mismatch " << h.dim() << " vs " << u.dim();
        throw ContractViolation(os.str());
    }
    Matrix m = u.matrix() * h.matrix() * u.matrix().adjoint();
    m = 0.5 * (m + m.adjoint()).eval();
    return HermitianOperator::from(std::move(m), pol);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw ContractViolation("matmul: inner dimensions do not match");
    return a * b;
}

Matrix adjoint(const Matrix& m) { return m.adjoint(); }

Complex trace(const Matrix& m) {
    if (m.rows() != m.cols()) throw ContractViolation("trace: matrix must be square");
    return m.trace();
}

double frobenius_norm(const Matrix& m) { return m.norm(); }

double spectral_norm(const Matrix& m, const NumericalPolicy& pol) {
    if (m.size() == 0) return 0.0;
    const Matrix gram = m.adjoint() * m;
    const Spectrum s = eigh(HermitianOperator::from(0.5 * (gram + gram.adjoint()), pol), pol);
    const double top = s.eigenvalues(s.eigenvalues.size() - 1);
    return std::sqrt(std::max(top, 0.0));
}

Matrix outer_product(const Vector& u, const Vector& v) {
    return u * v.adjoint();
}

namespace {

Matrix pairwise_sum(const std::vector<double>& w, const std::vector<Matrix>& t,
                    std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return w[lo] * t[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(w, t, lo, mid) + pairwise_sum(w, t, mid, hi);
}

} // namespace

Matrix weighted_sum(const std::vector<double>& weights, const std::vector<Matrix>& terms) {
    if (weights.size() != terms.size())
        throw ContractViolation("weighted_sum: weight/term count mismatch");
    if (terms.empty()) throw ContractViolation("weighted_sum: empty input");
    return pairwise_sum(weights, terms, 0, terms.size());
}

Matrix identity(Index n) { return Matrix::Identity(n, n); }

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

} // namespace dressim
