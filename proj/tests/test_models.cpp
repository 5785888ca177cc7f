#include <doctest.h>

#include <cmath>

#include "dressim/errors.hpp"
#include "dressim/models.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace dressim;

namespace {

SpinModelSpec two_qubit_spec() {
    SpinModelSpec spec;
    spec.n_qubits = 2;
    spec.transverse_field = 0.4;
    IsingCost cost;
    cost.fields = {0.3, -0.7};
    cost.couplings = {{0, 1, 0.25}};
    spec.cost = cost;
    return spec;
}

} // namespace

TEST_SUITE("models") {

TEST_CASE("single-qubit spectrum matches the closed form") {
    SpinModelSpec spec;
    spec.n_qubits = 1;
    spec.transverse_field = 0.45;
    IsingCost cost;
    cost.fields = {0.8};
    spec.cost = cost;
    const auto h = build_spin_hamiltonian(spec);
    const RealVector evs = eigh(h).eigenvalues;
    const double r = std::sqrt(0.45 * 0.45 + 0.8 * 0.8);
    CHECK(evs(0) == doctest::Approx(-r).epsilon(1e-12));
    CHECK(evs(1) == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("two-qubit matrix elements match a bitwise construction") {
    const auto spec = two_qubit_spec();
    const auto h = build_spin_hamiltonian(spec);
    // Site 0 occupies the most significant bit; sigma_z gives +1 on bit 0.
    Matrix expected = Matrix::Zero(4, 4);
    const IsingCost& cost = std::get<IsingCost>(spec.cost);
    for (Index b = 0; b < 4; ++b) {
        const double z0 = ((b >> 1) & 1) == 0 ? 1.0 : -1.0;
        const double z1 = (b & 1) == 0 ? 1.0 : -1.0;
        expected(b, b) = cost.fields[0] * z0 + cost.fields[1] * z1 +
                         cost.couplings[0].value * z0 * z1;
        expected(b ^ 2, b) += spec.transverse_field;  // flip site 0
        expected(b ^ 1, b) += spec.transverse_field;  // flip site 1
    }
    CHECK(max_abs(h.matrix() - expected) == 0.0);
}

TEST_CASE("search cost acts as the complement projector") {
    SpinModelSpec spec;
    spec.n_qubits = 3;
    spec.transverse_field = 0.2;
    GroverCost cost;
    cost.index_state = 5;
    spec.cost = cost;
    const auto h = build_spin_hamiltonian(spec);
    Matrix cost_part = h.matrix();
    for (int i = 0; i < 3; ++i)
        cost_part -= spec.transverse_field * embed_site_operator(pauli_x(), i, 3, 2);
    for (Index x = 0; x < 8; ++x) {
        Vector basis = Vector::Zero(8);
        basis(x) = 1.0;
        const Vector image = cost_part * basis;
        if (x == 5) {
            CHECK(image.cwiseAbs().maxCoeff() <= 1e-14);
        } else {
            CHECK((image - basis).cwiseAbs().maxCoeff() <= 1e-14);
        }
    }
}

TEST_CASE("embedding places a local operator at the requested site") {
    const Matrix full = embed_site_operator(pauli_z(), 0, 2, 2);
    Matrix expected = Matrix::Zero(4, 4);
    expected.diagonal() << 1.0, 1.0, -1.0, -1.0;
    CHECK(max_abs(full - expected) == 0.0);
}

TEST_CASE("single-site oscillator reproduces the harmonic ladder") {
    OscillatorSpec spec;
    spec.mass = {2.0};
    spec.stiffness = {0.5};
    spec.n_max = 12;
    const double omega = std::sqrt(0.5 / 2.0);
    const RealVector evs = eigh(build_oscillator_hamiltonian(spec)).eigenvalues;
    // The top truncated level intrudes mid-ladder, so check well below it.
    for (Index n = 0; n < 4; ++n)
        CHECK(evs(n) ==
              doctest::Approx(omega * (static_cast<double>(n) + 0.5)).epsilon(1e-12));
}

TEST_CASE("coupled pair matches the normal-mode frequencies") {
    OscillatorSpec spec;
    spec.mass = {1.0, 1.0};
    spec.stiffness = {1.0, 1.0};
    spec.couplings = {{0, 1, 0.2}};
    spec.n_max = 14;
    const RealVector evs = eigh(build_oscillator_hamiltonian(spec)).eigenvalues;
    const double w1 = 1.0, w2 = std::sqrt(1.4);
    const double e0 = 0.5 * (w1 + w2);
    CHECK(evs(0) == doctest::Approx(e0).epsilon(1e-8));
    CHECK(evs(1) == doctest::Approx(e0 + w1).epsilon(1e-8));
    CHECK(evs(2) == doctest::Approx(e0 + w2).epsilon(1e-8));
}

TEST_CASE("stiffness matrix carries couplings off-diagonal") {
    OscillatorSpec spec;
    spec.mass = {1.0, 1.0};
    spec.stiffness = {1.0, 2.0};
    spec.couplings = {{0, 1, 0.3}};
    spec.n_max = 4;
    const RealMatrix k = oscillator_stiffness_matrix(spec);
    CHECK(k(0, 0) == doctest::Approx(1.3));
    CHECK(k(1, 1) == doctest::Approx(2.3));
    CHECK(k(0, 1) == doctest::Approx(-0.3));
    CHECK(k(1, 0) == doctest::Approx(-0.3));
}

TEST_CASE("decoupled spin-boson pair is a displaced oscillator") {
    SpinBosonSpec spec;
    spec.transverse_field = 0.0;
    spec.modes = {{1.0, 0.3}};
    spec.n_max = 24;
    const RealVector evs = eigh(build_spinboson_hamiltonian(spec)).eigenvalues;
    // Completing the square: E_n = n - lambda^2/omega, each doubly degenerate.
    const double shift = -0.3 * 0.3;
    CHECK(evs(0) == doctest::Approx(shift).epsilon(1e-9));
    CHECK(evs(1) == doctest::Approx(shift).epsilon(1e-9));
    CHECK(evs(2) == doctest::Approx(1.0 + shift).epsilon(1e-9));
    CHECK(evs(3) == doctest::Approx(1.0 + shift).epsilon(1e-9));
}

TEST_CASE("spin-boson conserves the joint parity") {
    SpinBosonSpec spec;
    spec.transverse_field = 0.6;
    spec.modes = {{1.0, 0.4}, {1.7, 0.2}};
    spec.n_max = 5;
    const auto h = build_spinboson_hamiltonian(spec);
    Matrix parity = pauli_x();
    for (int m = 0; m < 2; ++m) {
        Matrix local = Matrix::Zero(5, 5);
        for (Index n = 0; n < 5; ++n) local(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
        parity = kron(parity, local);
    }
    CHECK(max_abs(h.matrix() * parity - parity * h.matrix()) <= 1e-10);
}

TEST_CASE("fermion operators match the occupation-basis oracle") {
    for (int n_modes : {2, 4, 6}) {
        FermionAlgebra alg(n_modes);
        const auto oracle = oracles::occupation_annihilators(n_modes);
        for (int m = 0; m < n_modes; ++m) {
            CHECK(max_abs(alg.op(m, FermionKind::annihilate) -
                          oracle[static_cast<std::size_t>(m)]) == 0.0);
            CHECK(max_abs(alg.op(m, FermionKind::number) -
                          adjoint(oracle[static_cast<std::size_t>(m)]) *
                              oracle[static_cast<std::size_t>(m)]) == 0.0);
        }
    }
}

TEST_CASE("single-momentum pairing model has the closed-form spectrum") {
    BcsSpec spec;
    spec.n_momenta = 1;
    spec.energies = {0.7};
    spec.interaction = -0.3;
    const RealVector evs = eigh(build_bcs_hamiltonian(spec)).eigenvalues;
    // Sectors: empty, two singly occupied, doubly occupied (+ pairing shift).
    CHECK(evs(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(evs(1) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(evs(2) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(evs(3) == doctest::Approx(1.1).epsilon(1e-12));
}

TEST_CASE("pairing interaction conserves particle number") {
    BcsSpec spec;
    spec.n_momenta = 2;
    spec.energies = {0.3, 0.9};
    RealMatrix v(2, 2);
    v << -0.2, 0.1, 0.1, -0.4;
    spec.interaction = v;
    const auto h = build_bcs_hamiltonian(spec);
    FermionAlgebra alg(spec.n_fermion_modes());
    Matrix number = Matrix::Zero(h.dim(), h.dim());
    for (int m = 0; m < spec.n_fermion_modes(); ++m) number += alg.op(m, FermionKind::number);
    CHECK(max_abs(h.matrix() * number - number * h.matrix()) <= 1e-10);
}

TEST_CASE("interaction element resolves scalar and matrix forms") {
    BcsSpec scalar;
    scalar.n_momenta = 2;
    scalar.energies = {0.1, 0.2};
    scalar.interaction = -0.5;
    CHECK(scalar.interaction_element(0, 1) == doctest::Approx(-0.5));
    RealMatrix v(2, 2);
    v << 1.0, 2.0, 2.0, 3.0;
    BcsSpec matrix = scalar;
    matrix.interaction = v;
    CHECK(matrix.interaction_element(1, 0) == doctest::Approx(2.0));
    CHECK(matrix.interaction_element(1, 1) == doctest::Approx(3.0));
}

TEST_CASE("pair annihilator wraps momenta on the ring") {
    BcsSpec spec;
    spec.n_momenta = 3;
    spec.energies = {0.1, 0.2, 0.3};
    spec.interaction = -0.1;
    FermionAlgebra alg(spec.n_fermion_modes());
    // eta_q(k) = c_{k,up} c_{q-k,down}; q = 2, k = 1 pairs with down mode 1.
    const Matrix direct = alg.op(bcs_jw_index(spec, 1, false), FermionKind::annihilate) *
                          alg.op(bcs_jw_index(spec, 1, true), FermionKind::annihilate);
    const Matrix eta = bcs_pair_annihilator(spec, alg, 1, 2);
    CHECK(max_abs(eta - direct) == 0.0);
    CHECK(bcs_negate_mode(1, 3) == 2);
    CHECK(bcs_negate_mode(0, 3) == 0);
}

TEST_CASE("dimension accounting enforces the cap") {
    SpinModelSpec spin;
    spin.n_qubits = 8;
    spin.transverse_field = 0.1;
    IsingCost cost;
    cost.fields.assign(8, 0.0);
    spin.cost = cost;
    CHECK(hilbert_dim(spin) == 256);

    OscillatorSpec osc;
    osc.mass = {1.0, 1.0};
    osc.stiffness = {1.0, 1.0};
    osc.n_max = 70;  // 4900 > 4096
    CHECK_THROWS_AS(hilbert_dim(ModelSpec(osc)), CapacityError);

    SpinBosonSpec sb;
    sb.transverse_field = 0.0;
    sb.modes = {{1.0, 0.1}, {2.0, 0.1}};
    sb.n_max = 6;
    CHECK(hilbert_dim(ModelSpec(sb)) == 72);
}

TEST_CASE("family names are stable") {
    SpinModelSpec spin;
    spin.n_qubits = 1;
    spin.transverse_field = 0.0;
    IsingCost cost;
    cost.fields = {0.0};
    spin.cost = cost;
    CHECK(family_name(ModelSpec(spin)) == "spin");
}

}
