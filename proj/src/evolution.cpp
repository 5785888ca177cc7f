// evolution.cpp — exact channel-averaged evolution.

#include "dressim/evolution.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "dressim/errors.hpp"

namespace dressim {

namespace {

using namespace std::complex_literals;

void require(bool ok, const std::string& what) {
    if (!ok) throw ContractViolation(what);
}

// Grid and weight mistakes usually come straight from user configs, so they
// surface as keyed config errors rather than internal contract failures.
void require_shape(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError(key, what);
}

double pairwise_sum(const double* data, std::size_t n) {
    if (n == 0) return 0.0;
    if (n == 1) return data[0];
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

} // namespace

// --------------------------- density matrices --------------------------------

DensityMatrix DensityMatrix::from(Matrix rho, const NumericalPolicy& pol) {
    require(rho.rows() == rho.cols() && rho.rows() >= 1, "density matrix must be square");
    if (!all_finite(rho)) throw NumericalError("density matrix has non-finite entries");

    const double defect = hermiticity_defect(rho);
    if (defect > pol.density_hermiticity_tol) {
        std::ostringstream os;
        os << "density matrix hermiticity defect " << defect << " exceeds "
           << pol.density_hermiticity_tol;
        throw ContractViolation(os.str());
    }
    const double tr_err = std::abs(trace(rho) - Complex(1.0, 0.0));
    if (tr_err > pol.trace_tol) {
        std::ostringstream os;
        os << "density matrix trace deviates from 1 by " << tr_err;
        throw ContractViolation(os.str());
    }
    const Matrix sym = 0.5 * (rho + Matrix(rho.adjoint()));
    const Spectrum spec = eigh(HermitianOperator::from(sym, pol), pol);
    const double min_eig = spec.eigenvalues.minCoeff();
    if (min_eig < -pol.positivity_tol) {
        std::ostringstream os;
        os << "density matrix minimum eigenvalue " << min_eig << " below -" << pol.positivity_tol;
        throw ContractViolation(os.str());
    }
    return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::pure(const Vector& state, const NumericalPolicy& pol) {
    require(state.size() >= 1, "pure state must be nonempty");
    const double norm = state.norm();
    require(norm > 0.0 && std::isfinite(norm), "pure state must have positive finite norm");
    const Vector psi = state / norm;
    return from(outer_product(psi, psi), pol);
}

double DensityMatrix::purity() const {
    return (rho_ * rho_).trace().real();
}

// --------------------------- time grid ---------------------------------------

void validate_grid(const TimeGrid& grid) {
    require(std::isfinite(grid.t_start), "grid start must be finite");
    require_shape(std::isfinite(grid.dt) && grid.dt > 0.0, "grid.dt", "grid step must be positive");
    require_shape(grid.n_samples >= 1, "grid.n_samples", "grid needs at least one sample");
}

// --------------------------- propagators -------------------------------------

Propagator::Propagator(const HermitianOperator& h, const NumericalPolicy& pol)
    : spectrum_(eigh(h, pol)), pol_(pol) {}

UnitaryOperator Propagator::at(double t) const {
    require(std::isfinite(t), "propagation time must be finite");
    const Index d = dim();
    Vector phases(d);
    for (Index i = 0; i < d; ++i)
        phases(i) = std::exp(-1.0i * spectrum_.eigenvalues(i) * t);
    const Matrix& v = spectrum_.eigenvectors.matrix();
    Matrix u = v * phases.asDiagonal() * v.adjoint();
    return UnitaryOperator::from(std::move(u), pol_);
}

UnitaryOperator propagator(const HermitianOperator& h, double t, const NumericalPolicy& pol) {
    return Propagator(h, pol).at(t);
}

// --------------------------- averaged evolution ------------------------------

std::vector<DensityMatrix> evolve_averaged(
    const std::vector<std::pair<double, HermitianOperator>>& channels, const DensityMatrix& rho0,
    const TimeGrid& grid, const NumericalPolicy& pol) {
    require(!channels.empty(), "averaged evolution needs at least one channel");
    validate_grid(grid);

    const Index d = rho0.dim();
    std::vector<double> weights;
    weights.reserve(channels.size());
    for (const auto& [p, h] : channels) {
        require_shape(std::isfinite(p) && p >= 0.0, "weight",
                      "channel weights must be nonnegative");
        require(h.dim() == d, "channel Hamiltonian dimension does not match the state");
        weights.push_back(p);
    }
    const double total = pairwise_sum(weights.data(), weights.size());
    if (std::abs(total - 1.0) > pol.weight_sum_tol) {
        std::ostringstream os;
        os << "channel weights sum to " << total << ", expected 1";
        throw ConfigError("weight", os.str());
    }

    // Per channel, rho0 in the channel eigenbasis; each time step is then a
    // diagonal phase conjugation plus the basis change back.
    struct ChannelState {
        Spectrum spectrum;
        Matrix rho_eig;
    };
    std::vector<ChannelState> states;
    states.reserve(channels.size());
    for (const auto& [p, h] : channels) {
        Spectrum spec = eigh(h, pol);
        const Matrix& v = spec.eigenvectors.matrix();
        Matrix rho_eig = v.adjoint() * rho0.matrix() * v;
        states.push_back({std::move(spec), std::move(rho_eig)});
    }

    std::vector<DensityMatrix> out;
    out.reserve(grid.n_samples);
    std::vector<Matrix> contribs(channels.size());
    for (long i = 0; i < grid.n_samples; ++i) {
        const double t = grid.time(i);
        for (std::size_t a = 0; a < channels.size(); ++a) {
            const auto& st = states[a];
            Vector phases(d);
            for (Index u = 0; u < d; ++u)
                phases(u) = std::exp(-1.0i * st.spectrum.eigenvalues(u) * t);
            const Matrix rotated = phases.asDiagonal() * st.rho_eig *
                                   phases.conjugate().asDiagonal();
            const Matrix& v = st.spectrum.eigenvectors.matrix();
            contribs[a] = v * rotated * v.adjoint();
        }
        out.push_back(DensityMatrix::from(weighted_sum(weights, contribs), pol));
    }
    return out;
}

} // namespace dressim
