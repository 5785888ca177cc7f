#include <doctest.h>

#include <cmath>

#include "dressim/dressing.hpp"
#include "dressim/errors.hpp"
#include "dressim/evolution.hpp"
#include "dressim/models.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace dressim;
using testing_helpers::random_hermitian;
using testing_helpers::random_state;

TEST_SUITE("evolution") {

TEST_CASE("density matrices validate trace, Hermiticity, and positivity") {
    CHECK_THROWS_AS(DensityMatrix::from(Matrix::Zero(2, 3)), ContractViolation);
    CHECK_THROWS_AS(DensityMatrix::from(2.0 * identity(2)), ContractViolation);

    Matrix negative = Matrix::Zero(2, 2);
    negative(0, 0) = Complex(1.5, 0.0);
    negative(1, 1) = Complex(-0.5, 0.0);
    CHECK_THROWS_AS(DensityMatrix::from(negative), ContractViolation);

    Matrix skew = 0.5 * identity(2);
    skew(0, 1) = Complex(0.3, 0.0);  // missing the conjugate partner
    CHECK_THROWS_AS(DensityMatrix::from(skew), ContractViolation);

    const auto ok = DensityMatrix::from(0.5 * identity(2));
    CHECK(ok.purity() == doctest::Approx(0.5));
}

TEST_CASE("pure states are normalized projectors") {
    Vector v(2);
    v << Complex(3.0, 0.0), Complex(0.0, 4.0);
    const auto rho = DensityMatrix::pure(v);
    CHECK(trace(rho.matrix()).real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rho.matrix()(0, 0).real() == doctest::Approx(9.0 / 25.0));
}

TEST_CASE("propagator matches the series exponential") {
    Rng rng(41);
    const auto h = HermitianOperator::from(random_hermitian(6, rng));
    const double t = 0.83;
    const auto u = propagator(h, t);
    const Matrix reference = oracles::series_expm(Complex(0.0, -1.0) * h.matrix() * t);
    CHECK(max_abs(u.matrix() - reference) <= 1e-10);

    Propagator cached(h);
    CHECK(max_abs(cached.at(t).matrix() - reference) <= 1e-10);
    CHECK(max_abs(cached.at(0.0).matrix() - identity(6)) <= 1e-12);
}

TEST_CASE("single-channel spin flip follows the Rabi cosine") {
    const double omega = 1.7;
    const auto h = HermitianOperator::from(0.5 * omega * pauli_x());
    Vector up(2);
    up << 1.0, 0.0;
    const auto rho0 = DensityMatrix::pure(up);
    TimeGrid grid{0.0, 0.35, 12};
    const auto states = evolve_averaged({{1.0, h}}, rho0, grid);
    REQUIRE(states.size() == 12);
    for (long i = 0; i < 12; ++i) {
        const double z = trace(states[static_cast<std::size_t>(i)].matrix() * pauli_z()).real();
        CHECK(z == doctest::Approx(std::cos(omega * grid.time(i))).epsilon(1e-10));
        CHECK(states[static_cast<std::size_t>(i)].purity() ==
              doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("two-channel average equals the hand-built mixture") {
    Rng rng(42);
    const auto h1 = HermitianOperator::from(random_hermitian(4, rng));
    const auto h2 = HermitianOperator::from(random_hermitian(4, rng));
    const auto rho0 = DensityMatrix::pure(random_state(4, rng));
    TimeGrid grid{0.2, 0.45, 5};
    const auto states = evolve_averaged({{0.3, h1}, {0.7, h2}}, rho0, grid);
    for (long i = 0; i < grid.n_samples; ++i) {
        const double t = grid.time(i);
        const Matrix u1 = propagator(h1, t).matrix();
        const Matrix u2 = propagator(h2, t).matrix();
        const Matrix expected = 0.3 * u1 * rho0.matrix() * u1.adjoint() +
                                0.7 * u2 * rho0.matrix() * u2.adjoint();
        CHECK(max_abs(states[static_cast<std::size_t>(i)].matrix() - expected) <= 1e-12);
    }
}

TEST_CASE("mixtures of unitaries keep the state physical and never purify") {
    SpinModelSpec spec;
    spec.n_qubits = 3;
    spec.transverse_field = 0.4;
    IsingCost cost;
    cost.fields = {0.3, -0.2, 0.5};
    cost.couplings = {{0, 1, 0.3}, {1, 2, -0.4}};
    spec.cost = cost;
    const ModelSpec model = spec;
    const auto h = build_hamiltonian(model);

    SamplerDescriptor d;
    d.distribution = NoiseDistribution::gaussian;
    d.width = 0.2;
    d.count = 12;
    const auto ens = sample_ensemble(d, model, 3);
    const auto channels = dressed_hamiltonians(h, ens, model, DressingMode::exact);

    Vector psi = Vector::Constant(8, Complex(1.0, 0.0));
    const auto rho0 = DensityMatrix::pure(psi);
    TimeGrid grid{0.0, 0.5, 10};
    const auto states = evolve_averaged(channels, rho0, grid);
    for (const auto& state : states) {
        CHECK(std::abs(trace(state.matrix()).real() - 1.0) <= 1e-10);
        CHECK(hermiticity_defect(state.matrix()) <= 1e-10);
        const RealVector evs = eigh(HermitianOperator::from(state.matrix())).eigenvalues;
        CHECK(evs.minCoeff() >= -1e-9);
        CHECK(state.purity() <= rho0.purity() + 1e-9);
    }
    // Noise actually bites: by the end of the window the state has mixed.
    CHECK(states.back().purity() < 1.0 - 1e-6);
}

TEST_CASE("identical channels collapse to a single evolution") {
    Rng rng(43);
    const auto h = HermitianOperator::from(random_hermitian(4, rng));
    const auto rho0 = DensityMatrix::pure(random_state(4, rng));
    TimeGrid grid{0.0, 0.3, 6};
    const auto twice = evolve_averaged({{0.5, h}, {0.5, h}}, rho0, grid);
    const auto once = evolve_averaged({{1.0, h}}, rho0, grid);
    for (std::size_t i = 0; i < twice.size(); ++i)
        CHECK(max_abs(twice[i].matrix() - once[i].matrix()) == 0.0);
}

TEST_CASE("grids and weights are validated") {
    CHECK_THROWS_AS(validate_grid(TimeGrid{0.0, -0.1, 4}), ConfigError);
    CHECK_THROWS_AS(validate_grid(TimeGrid{0.0, 0.1, 0}), ConfigError);
    CHECK_NOTHROW(validate_grid(TimeGrid{-1.0, 0.1, 4}));

    Rng rng(44);
    const auto h = HermitianOperator::from(random_hermitian(2, rng));
    const auto rho0 = DensityMatrix::from(0.5 * identity(2));
    CHECK_THROWS_AS(evolve_averaged({{0.9, h}}, rho0, TimeGrid{0.0, 0.1, 2}), ConfigError);
}

}
