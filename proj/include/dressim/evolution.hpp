// evolution.hpp — channel-averaged density-matrix dynamics
// ρ(t) = Σ_a p_a e^{-iH_a t} ρ⁰ e^{iH_a t}, exact via spectral decomposition.

#pragma once

#include <utility>
#include <vector>

#include "dressim/linalg.hpp"

namespace dressim {

// Hermitian within pol.density_hermiticity_tol, unit trace within
// pol.trace_tol, smallest eigenvalue ≥ -pol.positivity_tol.
class DensityMatrix {
public:
    static DensityMatrix from(Matrix rho, const NumericalPolicy& pol = default_policy());
    // |ψ><ψ| of the normalized state.
    static DensityMatrix pure(const Vector& state, const NumericalPolicy& pol = default_policy());

    const Matrix& matrix() const { return rho_; }
    Index dim() const { return rho_.rows(); }
    double purity() const;  // Tr ρ²

private:
    explicit DensityMatrix(Matrix rho) : rho_(std::move(rho)) {}
    Matrix rho_;
};

struct TimeGrid {
    double t_start = 0.0;
    double dt = 0.0;       // > 0
    long n_samples = 0;    // >= 1

    double time(long i) const { return t_start + dt * static_cast<double>(i); }
};

void validate_grid(const TimeGrid& grid);

// One eigendecomposition up front; each at(t) costs only the diagonal phase
// plus the basis change.
class Propagator {
public:
    explicit Propagator(const HermitianOperator& h, const NumericalPolicy& pol = default_policy());

    UnitaryOperator at(double t) const;
    const Spectrum& spectrum() const { return spectrum_; }
    Index dim() const { return spectrum_.eigenvalues.size(); }

private:
    Spectrum spectrum_;
    NumericalPolicy pol_;
};

UnitaryOperator propagator(const HermitianOperator& h, double t,
                           const NumericalPolicy& pol = default_policy());

// Weighted average of the per-channel unitary orbits of rho0 at every grid
// time; channel contributions are combined in a fixed pairwise order, so the
// result is independent of execution order.
std::vector<DensityMatrix> evolve_averaged(
    const std::vector<std::pair<double, HermitianOperator>>& channels, const DensityMatrix& rho0,
    const TimeGrid& grid, const NumericalPolicy& pol = default_policy());

} // namespace dressim
