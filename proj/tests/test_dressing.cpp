#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dressim/config.hpp"
#include "dressim/dressing.hpp"
#include "dressim/errors.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace dressim;
using testing_helpers::random_hermitian;

namespace {

SpinModelSpec one_qubit(double b, double hz) {
    SpinModelSpec spec;
    spec.n_qubits = 1;
    spec.transverse_field = b;
    IsingCost cost;
    cost.fields = {hz};
    spec.cost = cost;
    return spec;
}

SpinModelSpec chain(int n) {
    SpinModelSpec spec;
    spec.n_qubits = n;
    spec.transverse_field = 0.35;
    IsingCost cost;
    for (int i = 0; i < n; ++i) cost.fields.push_back(0.2 + 0.1 * i);
    for (int i = 0; i + 1 < n; ++i) cost.couplings.push_back({i, i + 1, 0.4});
    spec.cost = cost;
    return spec;
}

BcsSpec ring(int l) {
    BcsSpec spec;
    spec.n_momenta = l;
    for (int k = 0; k < l; ++k) spec.energies.push_back(0.3 + 0.25 * k);
    spec.interaction = -0.2;
    return spec;
}

double first_order_gap(const HermitianOperator& h, const NoiseChannel& channel,
                       const ModelSpec& model, double eps) {
    const NoiseChannel scaled = scale_channel(channel, eps);
    const auto v = build_dressing_unitary(scaled, model);
    return spectral_norm(dress_exact(h, v).matrix() -
                         dress_first_order(h, scaled, model).matrix());
}

} // namespace

TEST_SUITE("dressing") {

TEST_CASE("single-qubit rotation matches the closed form") {
    const auto spec = one_qubit(0.6, 0.9);
    const ModelSpec model = spec;
    const auto h = build_spin_hamiltonian(spec);
    const double a = 0.37;
    SpinZChannel channel;
    channel.angles = {a};
    const auto v = build_dressing_unitary(channel, model);
    const Matrix expected = 0.6 * (std::cos(2.0 * a) * pauli_x() +
                                   std::sin(2.0 * a) * pauli_y()) +
                            0.9 * pauli_z();
    CHECK(max_abs(dress_exact(h, v).matrix() - expected) <= 1e-12);
}

TEST_CASE("single-qubit linearization carries twice the rotation angle") {
    const auto spec = one_qubit(0.6, 0.9);
    const ModelSpec model = spec;
    const auto h = build_spin_hamiltonian(spec);
    const double a = 0.01;
    SpinZChannel channel;
    channel.angles = {a};
    // e^{-ia sigma_z} sigma_x e^{ia sigma_z} = sigma_x + 2a sigma_y + O(a^2).
    const Matrix expected = h.matrix() + 2.0 * a * 0.6 * pauli_y();
    CHECK(max_abs(dress_first_order(h, channel, model).matrix() - expected) <= 1e-12);
    // And the leading neglected term is (1/2)[X,[X,H]] = -2a^2 B sigma_x.
    const double gap = spectral_norm(
        dress_exact(h, build_dressing_unitary(channel, model)).matrix() -
        dress_first_order(h, channel, model).matrix());
    CHECK(gap == doctest::Approx(2.0 * a * a * 0.6).epsilon(0.05));
}

TEST_CASE("generic channel linearization is the symmetrized commutator") {
    Rng rng(31);
    const auto spec = chain(3);
    const ModelSpec model = spec;
    const auto h = build_spin_hamiltonian(spec);
    GenericChannel channel;
    channel.generator = random_hermitian(8, rng);
    channel.strength = 0.02;
    const Matrix x = Complex(0.0, -1.0) * channel.strength * channel.generator;
    const Matrix comm = x * h.matrix() - h.matrix() * x;
    const Matrix expected = h.matrix() + 0.5 * (comm + comm.adjoint().eval());
    CHECK(max_abs(dress_first_order(h, channel, model).matrix() - expected) <= 1e-12);
}

TEST_CASE("linearization error scales quadratically for every family") {
    const double eps[3] = {1e-1, 1e-2, 1e-3};

    const auto check_family = [&](const ModelSpec& model, const NoiseChannel& channel) {
        const auto h = build_hamiltonian(model);
        double ratios[3];
        for (int i = 0; i < 3; ++i)
            ratios[i] = first_order_gap(h, channel, model, eps[i]) / (eps[i] * eps[i]);
        const double lo = std::min({ratios[0], ratios[1], ratios[2]});
        const double hi = std::max({ratios[0], ratios[1], ratios[2]});
        CHECK(lo > 0.0);
        CHECK(hi < 2.0 * lo);
    };

    SpinZChannel spin_channel;
    spin_channel.angles = {0.8, -0.5, 0.3};
    check_family(chain(3), spin_channel);

    OscillatorSpec osc;
    osc.mass = {1.0, 1.5};
    osc.stiffness = {1.0, 0.8};
    osc.couplings = {{0, 1, 0.2}};
    osc.n_max = 10;
    OscillatorShiftChannel osc_channel;
    osc_channel.momentum_shifts = {0.7, -0.4};
    osc_channel.position_shifts = {0.5, 0.6};
    check_family(osc, osc_channel);

    SpinBosonSpec sb;
    sb.transverse_field = 0.3;
    sb.modes = {{1.0, 0.4}};
    sb.n_max = 12;
    SpinBosonChannel sb_channel;
    sb_channel.spin_angle = 0.6;
    sb_channel.displacements = {Complex(0.5, -0.3)};
    check_family(sb, sb_channel);

    BcsPairChannel bcs_channel;
    bcs_channel.q = 1;
    bcs_channel.qprime = 0;
    bcs_channel.g = {0.9, -0.6, 0.4};
    bcs_channel.angle = 1.0;
    check_family(ring(3), bcs_channel);
}

TEST_CASE("momentum and position shifts move the quadratures as labeled") {
    OscillatorSpec spec;
    spec.mass = {1.3};
    spec.stiffness = {0.9};
    spec.n_max = 32;
    const ModelSpec model = spec;
    OscillatorShiftChannel channel;
    channel.momentum_shifts = {0.15};
    channel.position_shifts = {0.1};
    const auto v = build_dressing_unitary(channel, model);
    const Matrix x = oscillator_position(spec, 0);
    const Matrix p = oscillator_momentum(spec, 0);
    const Matrix vx = v.matrix() * x * v.matrix().adjoint();
    const Matrix vp = v.matrix() * p * v.matrix().adjoint();
    const Matrix id = identity(32);
    // Truncation artifacts live near the top of the ladder; compare low blocks.
    const Index b = 8;
    CHECK(max_abs((vx - (x - (0.1 / 0.9) * id)).topLeftCorner(b, b)) <= 1e-8);
    CHECK(max_abs((vp - (p + 0.15 * 1.3 * id)).topLeftCorner(b, b)) <= 1e-8);
}

TEST_CASE("mode displacement matches the Laguerre closed form") {
    SpinBosonSpec spec;
    spec.transverse_field = 0.0;
    spec.modes = {{1.0, 0.2}};
    spec.n_max = 16;
    const ModelSpec model = spec;
    SpinBosonChannel channel;
    channel.spin_angle = 0.0;
    const Complex a(0.4, 0.0);
    channel.displacements = {a};
    const auto v = build_dressing_unitary(channel, model);
    // V = I_spin ⊗ exp(conj(a) b - a b†); compare the low Fock block.
    for (int m = 0; m < 8; ++m)
        for (int n = 0; n < 8; ++n)
            CHECK(std::abs(v.matrix()(m, n) - oracles::displacement_element(m, n, -a)) <= 1e-9);
}

TEST_CASE("sampling is deterministic and draws with the requested moments") {
    SamplerDescriptor d;
    d.distribution = NoiseDistribution::gaussian;
    d.width = 0.1;
    d.count = 4000;
    const ModelSpec model = chain(2);
    const auto a = sample_ensemble(d, model, 77);
    const auto b = sample_ensemble(d, model, 77);
    const auto c = sample_ensemble(d, model, 78);
    REQUIRE(a.entries.size() == 4000);
    double sum = 0.0, sumsq = 0.0;
    bool identical = true, different = false;
    long n_draws = 0;
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].weight == doctest::Approx(1.0 / 4000.0).epsilon(1e-12));
        const auto& ca = std::get<SpinZChannel>(a.entries[i].channel);
        const auto& cb = std::get<SpinZChannel>(b.entries[i].channel);
        const auto& cc = std::get<SpinZChannel>(c.entries[i].channel);
        for (std::size_t j = 0; j < ca.angles.size(); ++j) {
            sum += ca.angles[j];
            sumsq += ca.angles[j] * ca.angles[j];
            ++n_draws;
            identical = identical && ca.angles[j] == cb.angles[j];
            different = different || ca.angles[j] != cc.angles[j];
        }
    }
    CHECK(identical);
    CHECK(different);
    const double mean = sum / static_cast<double>(n_draws);
    const double stddev = std::sqrt(sumsq / static_cast<double>(n_draws) - mean * mean);
    CHECK(std::abs(mean) <= 4.0 * 0.1 / std::sqrt(static_cast<double>(n_draws)));
    CHECK(stddev == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("uniform sampling stays inside the stated width") {
    SamplerDescriptor d;
    d.distribution = NoiseDistribution::uniform;
    d.width = 0.25;
    d.count = 500;
    const auto ens = sample_ensemble(d, chain(2), 5);
    for (const auto& entry : ens.entries)
        for (double angle : std::get<SpinZChannel>(entry.channel).angles)
            CHECK(std::abs(angle) <= 0.25);
}

TEST_CASE("channel scaling acts on the linear parameters") {
    SpinZChannel spin;
    spin.angles = {0.4, -0.2};
    const auto scaled_spin = std::get<SpinZChannel>(scale_channel(spin, 0.5));
    CHECK(scaled_spin.angles[0] == doctest::Approx(0.2));
    CHECK(scaled_spin.angles[1] == doctest::Approx(-0.1));

    GenericChannel generic;
    generic.generator = identity(2);
    generic.strength = 0.8;
    CHECK(std::get<GenericChannel>(scale_channel(generic, 0.25)).strength ==
          doctest::Approx(0.2));

    BcsPairChannel bcs;
    bcs.q = 1;
    bcs.g = {1.0, 2.0};
    bcs.angle = 0.6;
    const auto scaled_bcs = std::get<BcsPairChannel>(scale_channel(bcs, 0.5));
    CHECK(scaled_bcs.angle == doctest::Approx(0.3));
    CHECK(scaled_bcs.g[0] == doctest::Approx(1.0));
}

TEST_CASE("channel validation names the offending key") {
    const ModelSpec model = chain(2);
    SpinZChannel wrong;
    wrong.angles = {0.1};  // needs one angle per qubit
    CHECK_THROWS_AS(validate_channel(wrong, model), ConfigError);

    BcsPairChannel degenerate;
    degenerate.q = 1;
    degenerate.qprime = 1;
    degenerate.g = {0.1, 0.2, 0.3};
    CHECK_THROWS_AS(validate_channel(degenerate, ModelSpec(ring(3))), ConfigError);

    GenericChannel skew;
    skew.generator = Matrix::Zero(4, 4);
    skew.generator(0, 1) = Complex(1.0, 0.0);
    skew.strength = 0.1;
    CHECK_THROWS_AS(validate_channel(skew, model), ConfigError);
}

TEST_CASE("ensembles must carry normalized nonnegative weights") {
    const ModelSpec model = chain(2);
    ChannelEnsemble bad;
    SpinZChannel c;
    c.angles = {0.0, 0.0};
    bad.entries.push_back({0.7, c});
    CHECK_THROWS_AS(validate_ensemble(bad, model), ConfigError);
    bad.entries.push_back({0.3, c});
    CHECK_NOTHROW(validate_ensemble(bad, model));
    bad.entries[0].weight = -0.1;
    bad.entries[1].weight = 1.1;
    CHECK_THROWS_AS(validate_ensemble(bad, model), ConfigError);
}

TEST_CASE("exact dressing preserves the spectrum across sampled ensembles") {
    const auto models = {ModelSpec(chain(5)), ModelSpec(ring(2))};
    for (const auto& model : models) {
        const auto h = build_hamiltonian(model);
        const double tol = 1e-9 * (1.0 + spectral_norm(h.matrix()));
        SamplerDescriptor d;
        d.distribution = NoiseDistribution::gaussian;
        d.width = 0.3;
        d.count = 20;
        const auto ens = sample_ensemble(d, model, 123);
        const RealVector base = eigh(h).eigenvalues;
        for (const auto& entry : ens.entries) {
            const auto v = build_dressing_unitary(entry.channel, model);
            const RealVector ev = eigh(dress_exact(h, v)).eigenvalues;
            CHECK((ev - base).cwiseAbs().maxCoeff() <= tol);
        }
    }
}

TEST_CASE("linearized outputs stay Hermitian") {
    const ModelSpec model = chain(4);
    const auto h = build_hamiltonian(model);
    SamplerDescriptor d;
    d.distribution = NoiseDistribution::gaussian;
    d.width = 0.5;
    d.count = 10;
    for (const auto& entry : sample_ensemble(d, model, 9).entries) {
        const auto first = dress_first_order(h, entry.channel, model);
        CHECK(hermiticity_defect(first.matrix()) <= 1e-12);
    }
}

TEST_CASE("three-momentum mode shift permutes the down-spin labels exactly") {
    const BcsSpec spec = ring(3);
    const ModelSpec model = spec;
    const auto h = build_bcs_hamiltonian(spec);
    FermionAlgebra alg(spec.n_fermion_modes());
    for (int shift : {1, 2}) {
        const auto v = build_bcs_dressing(mode_shift_channel(spec, shift), spec);
        for (int k = 0; k < 3; ++k) {
            const Matrix moved = v.matrix() *
                                 alg.op(bcs_jw_index(spec, k, true), FermionKind::number) *
                                 v.matrix().adjoint();
            const int target = (k + shift) % 3;
            const Matrix& expected =
                alg.op(bcs_jw_index(spec, target, true), FermionKind::number);
            CHECK(max_abs(moved - expected) <= 1e-12);
            const Matrix up_moved =
                v.matrix() * alg.op(bcs_jw_index(spec, k, false), FermionKind::number) *
                v.matrix().adjoint();
            CHECK(max_abs(up_moved -
                          alg.op(bcs_jw_index(spec, k, false), FermionKind::number)) <= 1e-12);
        }
        const RealVector base = eigh(h).eigenvalues;
        const RealVector ev = eigh(dress_exact(h, v)).eigenvalues;
        CHECK((ev - base).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + spectral_norm(h.matrix())));
    }
    CHECK_THROWS_AS(mode_shift_channel(ring(2), 1), ContractViolation);
}

TEST_CASE("zero channels dress with the identity") {
    const auto models = {ModelSpec(chain(2)), ModelSpec(ring(2))};
    for (const auto& model : models) {
        const auto v = build_dressing_unitary(zero_channel(model), model);
        CHECK(max_abs(v.matrix() - identity(v.dim())) <= 1e-12);
    }
}

}
