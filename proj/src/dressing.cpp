// dressing.cpp — dressing unitaries, first-order forms, ensemble sampling.

#include "dressim/dressing.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "dressim/errors.hpp"
#include "dressim/rng.hpp"

namespace dressim {

namespace {

using namespace std::complex_literals;

void require(bool ok, const std::string& what) {
    if (!ok) throw ContractViolation(what);
}

// Channel and ensemble shape mistakes are user-facing config errors keyed by
// the offending field, not internal contract violations.
void require_shape(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError(key, what);
}

void require_finite(double x, const std::string& what) {
    if (!std::isfinite(x)) throw ContractViolation(what + " must be finite");
}

int wrap_mode(int x, int n) {
    return ((x % n) + n) % n;
}

double pairwise_sum(const double* data, std::size_t n) {
    if (n == 0) return 0.0;
    if (n == 1) return data[0];
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

// Tensor chain over uniform sites; factor(i) returns the site-local matrix.
template <typename FactorFn>
Matrix site_chain(int n_sites, FactorFn&& factor, const NumericalPolicy& pol) {
    Matrix v = Matrix::Identity(1, 1);
    for (int i = 0; i < n_sites; ++i) v = kron(v, factor(i), pol);
    return v;
}

Matrix spin_z_factor(double angle) {
    Matrix f = Matrix::Zero(2, 2);
    f(0, 0) = std::exp(-1.0i * angle);
    f(1, 1) = std::exp(1.0i * angle);
    return f;
}

// Σ_k g_k (c†_{q-k,↓} c_{q'-k,↓} - h.c.), anti-Hermitian.
Matrix bcs_rotation_generator(const BcsPairChannel& channel, const BcsSpec& spec,
                              const FermionAlgebra& alg, const NumericalPolicy&) {
    const int l = spec.n_momenta;
    Matrix a = Matrix::Zero(alg.dim(), alg.dim());
    for (int k = 0; k < l; ++k) {
        if (channel.g[k] == 0.0) continue;
        const int from = bcs_jw_index(spec, wrap_mode(channel.qprime - k, l), true);
        const int to = bcs_jw_index(spec, wrap_mode(channel.q - k, l), true);
        const Matrix hop = alg.op(to, FermionKind::create) * alg.op(from, FermionKind::annihilate);
        a += channel.g[k] * (hop - Matrix(hop.adjoint()));
    }
    return a;
}

} // namespace

// --------------------------- validation --------------------------------------

void validate_channel(const NoiseChannel& channel, const ModelSpec& model,
                      const NumericalPolicy& pol) {
    if (std::holds_alternative<GenericChannel>(channel)) {
        const auto& c = std::get<GenericChannel>(channel);
        require_finite(c.strength, "generic channel strength");
        const Index dim = hilbert_dim(model, pol);
        require_shape(c.generator.rows() == dim && c.generator.cols() == dim, "generator",
                      "generic channel generator does not match the model dimension");
        try {
            HermitianOperator::from(c.generator, pol);
        } catch (const ContractViolation&) {
            throw ConfigError("generator", "generic channel generator must be Hermitian");
        }
        return;
    }
    if (std::holds_alternative<SpinZChannel>(channel)) {
        require_shape(std::holds_alternative<SpinModelSpec>(model), "type",
                      "spin_z channel requires a spin model");
        const auto& c = std::get<SpinZChannel>(channel);
        const auto& m = std::get<SpinModelSpec>(model);
        require_shape(static_cast<int>(c.angles.size()) == m.n_qubits, "angles",
                      "spin_z channel needs one angle per qubit");
        for (double a : c.angles) require_finite(a, "spin_z angle");
        return;
    }
    if (std::holds_alternative<OscillatorShiftChannel>(channel)) {
        require_shape(std::holds_alternative<OscillatorSpec>(model), "type",
                      "oscillator channel requires an oscillator model");
        const auto& c = std::get<OscillatorShiftChannel>(channel);
        const auto& m = std::get<OscillatorSpec>(model);
        require_shape(static_cast<int>(c.momentum_shifts.size()) == m.n_sites() &&
                          static_cast<int>(c.position_shifts.size()) == m.n_sites(),
                      "momentum_shifts", "oscillator channel needs one shift pair per site");
        for (double a : c.momentum_shifts) require_finite(a, "oscillator momentum shift");
        for (double a : c.position_shifts) require_finite(a, "oscillator position shift");
        return;
    }
    if (std::holds_alternative<SpinBosonChannel>(channel)) {
        require_shape(std::holds_alternative<SpinBosonSpec>(model), "type",
                      "spin_boson channel requires a spin-boson model");
        const auto& c = std::get<SpinBosonChannel>(channel);
        const auto& m = std::get<SpinBosonSpec>(model);
        require_shape(static_cast<int>(c.displacements.size()) == m.n_modes(), "displacements",
                      "spin_boson channel needs one displacement per mode");
        require_finite(c.spin_angle, "spin_boson spin angle");
        for (const Complex& d : c.displacements) {
            require_finite(d.real(), "spin_boson displacement");
            require_finite(d.imag(), "spin_boson displacement");
        }
        return;
    }
    const auto& c = std::get<BcsPairChannel>(channel);
    require_shape(std::holds_alternative<BcsSpec>(model), "type",
                  "bcs_pair channel requires a BCS model");
    const auto& m = std::get<BcsSpec>(model);
    const int l = m.n_momenta;
    require_shape(c.q >= 0 && c.q < l && c.qprime >= 0 && c.qprime < l, "q",
                  "bcs_pair channel momenta out of range");
    require_shape(c.q != c.qprime, "qprime",
                  "bcs_pair channel is degenerate at q = qprime (constant-g generator cancels)");
    require_shape(static_cast<int>(c.g.size()) == l, "g",
                  "bcs_pair channel needs one g per momentum");
    require_finite(c.angle, "bcs_pair angle");
    for (double g : c.g) require_finite(g, "bcs_pair g");
}

NoiseChannel scale_channel(const NoiseChannel& channel, double s) {
    require_finite(s, "channel scale");
    NoiseChannel out = channel;
    std::visit(
        [s](auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, SpinZChannel>) {
                for (double& a : c.angles) a *= s;
            } else if constexpr (std::is_same_v<T, OscillatorShiftChannel>) {
                for (double& a : c.momentum_shifts) a *= s;
                for (double& a : c.position_shifts) a *= s;
            } else if constexpr (std::is_same_v<T, SpinBosonChannel>) {
                c.spin_angle *= s;
                for (Complex& d : c.displacements) d *= s;
            } else if constexpr (std::is_same_v<T, BcsPairChannel>) {
                c.angle *= s;
            } else {
                c.strength *= s;
            }
        },
        out);
    return out;
}

void validate_ensemble(const ChannelEnsemble& ensemble, const ModelSpec& model,
                       const NumericalPolicy& pol) {
    require_shape(!ensemble.entries.empty(), "channels", "channel ensemble must not be empty");
    std::vector<double> weights;
    weights.reserve(ensemble.entries.size());
    for (const auto& entry : ensemble.entries) {
        require_finite(entry.weight, "channel weight");
        require_shape(entry.weight >= 0.0, "weight", "channel weights must be nonnegative");
        weights.push_back(entry.weight);
        validate_channel(entry.channel, model, pol);
    }
    const double total = pairwise_sum(weights.data(), weights.size());
    if (std::abs(total - 1.0) > pol.weight_sum_tol) {
        std::ostringstream os;
        os << "channel weights sum to " << total << ", expected 1 within " << pol.weight_sum_tol;
        throw ConfigError("weight", os.str());
    }
}

// --------------------------- sampling ----------------------------------------

namespace {

double draw(Rng& rng, NoiseDistribution dist, double width) {
    return dist == NoiseDistribution::gaussian ? rng.gaussian(width)
                                               : rng.uniform_symmetric(width);
}

NoiseChannel sample_channel(Rng& rng, const SamplerDescriptor& d, const ModelSpec& model) {
    if (d.generic) {
        GenericChannel c;
        c.generator = d.generic_generator;
        c.strength = draw(rng, d.distribution, d.width);
        return c;
    }
    if (std::holds_alternative<SpinModelSpec>(model)) {
        SpinZChannel c;
        c.angles.resize(std::get<SpinModelSpec>(model).n_qubits);
        for (double& a : c.angles) a = draw(rng, d.distribution, d.width);
        return c;
    }
    if (std::holds_alternative<OscillatorSpec>(model)) {
        OscillatorShiftChannel c;
        const int n = std::get<OscillatorSpec>(model).n_sites();
        c.momentum_shifts.resize(n);
        c.position_shifts.resize(n);
        for (double& a : c.momentum_shifts) a = draw(rng, d.distribution, d.width);
        for (double& a : c.position_shifts) a = draw(rng, d.distribution, d.width);
        return c;
    }
    if (std::holds_alternative<SpinBosonSpec>(model)) {
        SpinBosonChannel c;
        c.spin_angle = draw(rng, d.distribution, d.width);
        c.displacements.resize(std::get<SpinBosonSpec>(model).n_modes());
        for (Complex& disp : c.displacements) {
            const double re = draw(rng, d.distribution, d.width);
            const double im = draw(rng, d.distribution, d.width);
            disp = Complex(re, im);
        }
        return c;
    }
    BcsPairChannel c;
    c.q = d.bcs_q;
    c.qprime = d.bcs_qprime;
    c.angle = d.bcs_angle;
    c.g.resize(std::get<BcsSpec>(model).n_momenta);
    for (double& g : c.g) g = draw(rng, d.distribution, d.width);
    return c;
}

} // namespace

ChannelEnsemble sample_ensemble(const EnsembleDescriptor& descriptor, const ModelSpec& model,
                                std::uint64_t master_seed, const NumericalPolicy& pol) {
    if (std::holds_alternative<ChannelEnsemble>(descriptor)) {
        const auto& ensemble = std::get<ChannelEnsemble>(descriptor);
        validate_ensemble(ensemble, model, pol);
        return ensemble;
    }
    const auto& d = std::get<SamplerDescriptor>(descriptor);
    require(d.count >= 1, "sampler count must be at least 1");
    require_finite(d.width, "sampler width");
    require(d.width >= 0.0, "sampler width must be nonnegative");

    ChannelEnsemble ensemble;
    ensemble.entries.reserve(d.count);
    const double weight = 1.0 / static_cast<double>(d.count);
    for (int i = 0; i < d.count; ++i) {
        Rng rng(sub_seed(master_seed, static_cast<std::uint64_t>(i)));
        ensemble.entries.push_back({weight, sample_channel(rng, d, model)});
    }
    validate_ensemble(ensemble, model, pol);
    return ensemble;
}

// --------------------------- dressing unitaries ------------------------------

UnitaryOperator build_bcs_dressing(const BcsPairChannel& channel, const BcsSpec& spec,
                                   const NumericalPolicy& pol) {
    validate_channel(NoiseChannel{channel}, ModelSpec{spec}, pol);
    const FermionAlgebra alg(spec.n_fermion_modes(), pol);
    const Matrix a = bcs_rotation_generator(channel, spec, alg, pol);
    return expm_antihermitian(channel.angle * a, pol);
}

UnitaryOperator build_dressing_unitary(const NoiseChannel& channel, const ModelSpec& model,
                                       const NumericalPolicy& pol) {
    validate_channel(channel, model, pol);
    if (std::holds_alternative<GenericChannel>(channel)) {
        const auto& c = std::get<GenericChannel>(channel);
        return expm_antihermitian(-1.0i * c.strength * c.generator, pol);
    }
    if (std::holds_alternative<SpinZChannel>(channel)) {
        const auto& c = std::get<SpinZChannel>(channel);
        const Matrix v = site_chain(
            static_cast<int>(c.angles.size()),
            [&](int i) { return spin_z_factor(c.angles[i]); }, pol);
        return UnitaryOperator::from(v, pol);
    }
    if (std::holds_alternative<OscillatorShiftChannel>(channel)) {
        const auto& c = std::get<OscillatorShiftChannel>(channel);
        const auto& m = std::get<OscillatorSpec>(model);
        // All momentum-shift factors precede all position-shift factors;
        // cross-site factors commute, so the full V is the tensor chain of the
        // per-site products.
        const Matrix v = site_chain(
            m.n_sites(),
            [&](int j) -> Matrix {
                OscillatorSpec single;
                single.mass = {m.mass[j]};
                single.stiffness = {m.stiffness[j]};
                single.n_max = m.n_max;
                const Matrix xloc = oscillator_position(single, 0, pol);
                const Matrix ploc = oscillator_momentum(single, 0, pol);
                const Matrix fx =
                    expm_antihermitian(-1.0i * c.momentum_shifts[j] * m.mass[j] * xloc, pol)
                        .matrix();
                const Matrix fp =
                    expm_antihermitian(-1.0i * (c.position_shifts[j] / m.stiffness[j]) * ploc,
                                       pol)
                        .matrix();
                return fx * fp;
            },
            pol);
        return UnitaryOperator::from(v, pol);
    }
    if (std::holds_alternative<SpinBosonChannel>(channel)) {
        const auto& c = std::get<SpinBosonChannel>(channel);
        const auto& m = std::get<SpinBosonSpec>(model);
        const Matrix b = boson_lowering(m.n_max);
        const Matrix bdag = b.adjoint();
        Matrix v = spin_z_factor(c.spin_angle);
        for (int a = 0; a < m.n_modes(); ++a) {
            const Complex alpha = c.displacements[a];
            const Matrix gen = std::conj(alpha) * b - alpha * bdag;
            v = kron(v, expm_antihermitian(gen, pol).matrix(), pol);
        }
        return UnitaryOperator::from(v, pol);
    }
    return build_bcs_dressing(std::get<BcsPairChannel>(channel), std::get<BcsSpec>(model), pol);
}

// --------------------------- first-order forms -------------------------------

Matrix first_order_generator(const NoiseChannel& channel, const ModelSpec& model,
                             const NumericalPolicy& pol) {
    validate_channel(channel, model, pol);
    if (std::holds_alternative<GenericChannel>(channel)) {
        const auto& c = std::get<GenericChannel>(channel);
        return -1.0i * c.strength * c.generator;
    }
    if (std::holds_alternative<SpinZChannel>(channel)) {
        const auto& c = std::get<SpinZChannel>(channel);
        const int n = static_cast<int>(c.angles.size());
        const Index dim = hilbert_dim(model, pol);
        Matrix x = Matrix::Zero(dim, dim);
        const Matrix sz = pauli_z();
        for (int i = 0; i < n; ++i)
            x += -1.0i * c.angles[i] * embed_site_operator(sz, i, n, 2, pol);
        return x;
    }
    if (std::holds_alternative<OscillatorShiftChannel>(channel)) {
        const auto& c = std::get<OscillatorShiftChannel>(channel);
        const auto& m = std::get<OscillatorSpec>(model);
        const Index dim = hilbert_dim(model, pol);
        Matrix x = Matrix::Zero(dim, dim);
        for (int j = 0; j < m.n_sites(); ++j) {
            x += -1.0i * c.momentum_shifts[j] * m.mass[j] * oscillator_position(m, j, pol);
            x += -1.0i * (c.position_shifts[j] / m.stiffness[j]) * oscillator_momentum(m, j, pol);
        }
        return x;
    }
    if (std::holds_alternative<SpinBosonChannel>(channel)) {
        const auto& c = std::get<SpinBosonChannel>(channel);
        const auto& m = std::get<SpinBosonSpec>(model);
        Matrix x = -1.0i * c.spin_angle * spinboson_spin_operator(m, pauli_z(), pol);
        for (int a = 0; a < m.n_modes(); ++a) {
            const Matrix b = spinboson_mode_lowering(m, a, pol);
            x += std::conj(c.displacements[a]) * b - c.displacements[a] * Matrix(b.adjoint());
        }
        return x;
    }
    const auto& c = std::get<BcsPairChannel>(channel);
    const auto& m = std::get<BcsSpec>(model);
    const FermionAlgebra alg(m.n_fermion_modes(), pol);
    return c.angle * bcs_rotation_generator(c, m, alg, pol);
}

HermitianOperator dress_exact(const HermitianOperator& h, const UnitaryOperator& v,
                              const NumericalPolicy& pol) {
    return conjugate(h, v, pol);
}

HermitianOperator dress_first_order(const HermitianOperator& h, const NoiseChannel& channel,
                                    const ModelSpec& model, const NumericalPolicy& pol) {
    const Matrix x = first_order_generator(channel, model, pol);
    require(x.rows() == h.dim(), "first-order generator does not match the Hamiltonian");
    const Matrix comm = x * h.matrix() - h.matrix() * x;
    const Matrix dressed = h.matrix() + 0.5 * (comm + Matrix(comm.adjoint()));
    return HermitianOperator::from(dressed, pol);
}

std::vector<std::pair<double, HermitianOperator>> dressed_hamiltonians(
    const HermitianOperator& h, const ChannelEnsemble& ensemble, const ModelSpec& model,
    DressingMode mode, const NumericalPolicy& pol) {
    validate_ensemble(ensemble, model, pol);
    require(h.dim() == hilbert_dim(model, pol),
            "Hamiltonian dimension does not match the model");
    std::vector<std::pair<double, HermitianOperator>> result;
    result.reserve(ensemble.entries.size());
    for (const auto& entry : ensemble.entries) {
        if (mode == DressingMode::exact) {
            const UnitaryOperator v = build_dressing_unitary(entry.channel, model, pol);
            result.emplace_back(entry.weight, dress_exact(h, v, pol));
        } else {
            result.emplace_back(entry.weight, dress_first_order(h, entry.channel, model, pol));
        }
    }
    return result;
}

BcsPairChannel mode_shift_channel(const BcsSpec& spec, int shift) {
    require(spec.n_momenta == 3,
            "mode-shift channel is exact only on the three-momentum ring");
    require(shift == 1 || shift == 2, "mode shift must be 1 or 2");
    BcsPairChannel c;
    c.q = shift;
    c.qprime = 0;
    c.g.assign(3, 1.0);
    // exp(angle (P^s - P^-s)) lands exactly on the mode permutation k -> k+s
    // at this magnitude; the sign picks the forward direction.
    c.angle = 2.0 * std::numbers::pi / (3.0 * std::sqrt(3.0));
    return c;
}

} // namespace dressim
