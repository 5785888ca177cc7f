// linalg.hpp — Dense complex operator algebra: validated operator types,
// Hermitian eigendecomposition, unitary exponentials, Kronecker products.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>
#include <vector>

#include "dressim/errors.hpp"
#include "dressim/policy.hpp"

namespace dressim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// --------------------------- norms and checks -------------------------------

double max_abs(const Matrix& m);
bool all_finite(const Matrix& m);
double hermiticity_defect(const Matrix& m);  // ||M - M†||max
double unitarity_defect(const Matrix& m);    // ||U†U - I||max

// --------------------------- validated operator types ------------------------

// Square matrix with ||M - M†||max <= tol * ||M||max. Energy units (hbar = 1).
class HermitianOperator {
public:
    static HermitianOperator from(Matrix m,
                                  const NumericalPolicy& pol = default_policy());
    const Matrix& matrix() const { return m_; }
    Index dim() const { return m_.rows(); }

private:
    explicit HermitianOperator(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

// Square matrix with ||U†U - I||max <= tol. Dimensionless.
class UnitaryOperator {
public:
    static UnitaryOperator from(Matrix m,
                                const NumericalPolicy& pol = default_policy());
    const Matrix& matrix() const { return m_; }
    Index dim() const { return m_.rows(); }

private:
    explicit UnitaryOperator(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

// Ascending eigenvalues plus the matching orthonormal eigenvector columns.
// Within a degenerate block any orthonormal basis may be returned; callers
// must not depend on the choice.
struct Spectrum {
    RealVector eigenvalues;
    UnitaryOperator eigenvectors;
};

// --------------------------- core operations --------------------------------

// Kronecker product; throws CapacityError when the product dimension would
// exceed pol.max_hilbert_dim.
Matrix kron(const Matrix& a, const Matrix& b,
            const NumericalPolicy& pol = default_policy());

Spectrum eigh(const HermitianOperator& h,
              const NumericalPolicy& pol = default_policy());

// U = exp(G) for anti-Hermitian G, via eigendecomposition of the Hermitian
// matrix iG. Exact to eigensolver precision; no series or Padé steps.
UnitaryOperator expm_antihermitian(const Matrix& g,
                                   const NumericalPolicy& pol = default_policy());

// U H U†, re-symmetrized to (M + M†)/2 to suppress roundoff drift.
HermitianOperator conjugate(const HermitianOperator& h, const UnitaryOperator& u,
                            const NumericalPolicy& pol = default_policy());

// --------------------------- plumbing ---------------------------------------

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix adjoint(const Matrix& m);
Complex trace(const Matrix& m);
double frobenius_norm(const Matrix& m);
// Largest singular value, computed via eigh of M†M.
double spectral_norm(const Matrix& m,
                     const NumericalPolicy& pol = default_policy());
Matrix outer_product(const Vector& u, const Vector& v);  // u v†

// Deterministic pairwise-tree sum of weights[i] * terms[i]. The reduction
// order is fixed so concurrent producers still yield identical results.
Matrix weighted_sum(const std::vector<double>& weights,
                    const std::vector<Matrix>& terms);

// --------------------------- small standard operators ------------------------

Matrix identity(Index n);
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

} // namespace dressim
