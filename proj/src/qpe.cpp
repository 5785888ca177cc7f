// qpe.cpp — kernel and circuit QPE distributions, ensemble aggregation.

#include "dressim/qpe.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>

#include "dressim/errors.hpp"
#include "dressim/evolution.hpp"
#include "dressim/fft.hpp"
#include "dressim/parallel.hpp"

namespace dressim {

namespace {

using namespace std::complex_literals;

constexpr long kMaxAmplitudes = 1L << 20;

void require(bool ok, const std::string& what) {
    if (!ok) throw ContractViolation(what);
}

void check_register(int n_register) {
    require(n_register >= 1, "phase register needs at least one qubit");
    require(n_register <= 20, "phase register is capped at 20 qubits");
}

double wrap_half(double x) {
    return x - std::round(x);
}

// |K_n(δ)|² with δ already wrapped; stable through the δ → 0 limit.
double kernel_power(double delta, double two_n) {
    const double x = std::numbers::pi * delta;
    if (std::abs(x) * two_n < 1e-4) {
        const double fourn = two_n * two_n;
        return 1.0 - (fourn - 1.0) / 3.0 * x * x;
    }
    const double s = std::sin(two_n * x) / (two_n * std::sin(x));
    return s * s;
}

RealVector aggregate(const std::vector<double>& weights, const std::vector<RealVector>& terms) {
    std::function<RealVector(std::size_t, std::size_t)> sum =
        [&](std::size_t begin, std::size_t count) -> RealVector {
        if (count == 1) return weights[begin] * terms[begin];
        const std::size_t half = count / 2;
        return sum(begin, half) + sum(begin + half, count - half);
    };
    return sum(0, terms.size());
}

} // namespace

// ---------------------------- coefficients ------------------------------------

Vector channel_coefficients(const Vector& c, const UnitaryOperator& v_a,
                            const Spectrum& spectrum, const NumericalPolicy& pol) {
    const Matrix& vec = spectrum.eigenvectors.matrix();
    require(c.size() == vec.rows() && v_a.dim() == vec.rows(),
            "coefficient vector does not match the eigenbasis");
    if (std::abs(c.norm() - 1.0) > pol.coefficient_norm_tol)
        throw ContractViolation("initial coefficients must be normalized");
    const Vector out = vec.adjoint() * (v_a.matrix().adjoint() * (vec * c));
    if (std::abs(out.norm() - 1.0) > pol.coefficient_norm_tol)
        throw NumericalError("dressed coefficients lost normalization");
    return out;
}

// ---------------------------- kernel route ------------------------------------

RealVector qpe_kernel_distribution(const RealVector& energies, const RealVector& weights,
                                   double t, int n_register, const NumericalPolicy& pol) {
    check_register(n_register);
    require(energies.size() == weights.size() && energies.size() >= 1,
            "kernel distribution needs matching energies and weights");
    require(std::isfinite(t), "evolution time must be finite");
    double wsum = 0.0;
    for (Index i = 0; i < weights.size(); ++i) {
        require(weights(i) >= -pol.coefficient_norm_tol, "kernel weights must be nonnegative");
        wsum += weights(i);
    }
    if (std::abs(wsum - 1.0) > 1e3 * pol.coefficient_norm_tol)
        throw ContractViolation("kernel weights must sum to 1");

    // Pool weights at degenerate energies; the histogram is then independent
    // of eigenbasis choices inside degenerate blocks.
    std::vector<std::pair<double, double>> pooled;  // (energy, weight)
    {
        std::vector<std::pair<double, double>> sorted;
        sorted.reserve(energies.size());
        for (Index i = 0; i < energies.size(); ++i) sorted.push_back({energies(i), weights(i)});
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            double w = 0.0, esum = 0.0;
            while (j < sorted.size() && sorted[j].first - sorted[i].first <= pol.degeneracy_tol) {
                w += sorted[j].second;
                esum += sorted[j].first;
                ++j;
            }
            pooled.push_back({esum / static_cast<double>(j - i), w});
            i = j;
        }
    }

    const long bins = 1L << n_register;
    const double two_n = static_cast<double>(bins);
    RealVector hist = RealVector::Zero(bins);
    for (const auto& [e, w] : pooled) {
        if (w == 0.0) continue;
        double phi = -e * t / (2.0 * std::numbers::pi);
        phi -= std::floor(phi);
        for (long j = 0; j < bins; ++j) {
            const double delta = wrap_half(phi - static_cast<double>(j) / two_n);
            hist(j) += w * kernel_power(delta, two_n);
        }
    }
    return hist;
}

// ---------------------------- circuit route -----------------------------------

RealVector qpe_circuit_distribution(const HermitianOperator& h, const Vector& initial_state,
                                    double t, int n_register, const NumericalPolicy& pol) {
    check_register(n_register);
    require(std::isfinite(t), "evolution time must be finite");
    const Index d = h.dim();
    require(initial_state.size() == d, "initial state does not match the Hamiltonian");
    if (std::abs(initial_state.norm() - 1.0) > pol.coefficient_norm_tol)
        throw ContractViolation("initial state must be normalized");
    const long bins = 1L << n_register;
    if (bins * static_cast<long>(d) > kMaxAmplitudes) {
        std::ostringstream os;
        os << "circuit statevector needs " << bins * static_cast<long>(d)
           << " amplitudes, above the cap of " << kMaxAmplitudes;
        throw CapacityError(os.str());
    }

    // Register in uniform superposition, then |k>U^k|ψ>.
    const Matrix u = propagator(h, t, pol).matrix();
    const double register_scale = 1.0 / std::sqrt(static_cast<double>(bins));
    std::vector<Vector> system(bins);
    Vector current = initial_state;
    for (long k = 0; k < bins; ++k) {
        system[k] = register_scale * current;
        if (k + 1 < bins) current = u * current;
    }

    // Inverse register Fourier transform, one length-2^n transform per system
    // basis index, then the marginal over j.
    RealVector hist = RealVector::Zero(bins);
    std::vector<Complex> column(bins);
    for (Index s = 0; s < d; ++s) {
        for (long k = 0; k < bins; ++k) column[k] = system[k](s);
        dft_inplace(column, -1);
        for (long j = 0; j < bins; ++j) {
            const double amp = std::abs(column[j]) * register_scale;
            hist(j) += amp * amp;
        }
    }
    return hist;
}

// ---------------------------- conventions -------------------------------------

double qpe_default_time(const HermitianOperator& h, const NumericalPolicy& pol) {
    const Spectrum spec = eigh(h, pol);
    const double hnorm = std::max(std::abs(spec.eigenvalues.minCoeff()),
                                  std::abs(spec.eigenvalues.maxCoeff()));
    if (hnorm == 0.0) return 1.0;
    return 0.9 * std::numbers::pi / hnorm;
}

double qpe_energy_estimate(long j, int n_register, double t) {
    check_register(n_register);
    if (t == 0.0) throw ContractViolation("evolution time must be nonzero");
    const double bins = static_cast<double>(1L << n_register);
    const double phi = wrap_half(static_cast<double>(j) / bins);
    return -2.0 * std::numbers::pi * phi / t;
}

// ---------------------------- ensemble run ------------------------------------

QpeResult run_generalized_qpe(const QpeConfig& cfg, const ModelSpec& model, int threads,
                              const NumericalPolicy& pol) {
    check_register(cfg.n_register);
    if (cfg.mode == QpeMode::circuit)
        require(cfg.n_register <= 12, "circuit mode is capped at 12 register qubits");
    validate_ensemble(cfg.ensemble, model, pol);

    const HermitianOperator h = build_hamiltonian(model, pol);
    const Spectrum noiseless = eigh(h, pol);
    const Index d = h.dim();
    const double t = cfg.t_evolution > 0.0 ? cfg.t_evolution : qpe_default_time(h, pol);
    require(std::isfinite(t) && t > 0.0, "evolution time must be positive");

    Vector c;
    if (std::holds_alternative<EigenCoefficients>(cfg.initial)) {
        c = std::get<EigenCoefficients>(cfg.initial).c;
        require(c.size() == d, "initial coefficients do not match the model dimension");
        if (std::abs(c.norm() - 1.0) > pol.coefficient_norm_tol)
            throw ContractViolation("initial coefficients must be normalized");
    } else {
        const long idx = std::get<BasisStateInitial>(cfg.initial).index;
        require(idx >= 0 && idx < d, "initial basis state out of range");
        c = noiseless.eigenvectors.matrix().row(idx).conjugate().transpose();
    }
    const Vector psi = noiseless.eigenvectors.matrix() * c;

    const std::size_t n_channels = cfg.ensemble.entries.size();
    const long bins = 1L << cfg.n_register;
    std::vector<RealVector> per_channel(n_channels);
    parallel_for(static_cast<long>(n_channels), threads, [&](long a) {
        const NoiseChannel& channel = cfg.ensemble.entries[a].channel;
        const bool need_v = cfg.dressing == DressingMode::exact ||
                            cfg.convention == QpeInitialConvention::dressed_state;
        UnitaryOperator v = UnitaryOperator::from(identity(d), pol);
        if (need_v) v = build_dressing_unitary(channel, model, pol);
        const HermitianOperator ha = cfg.dressing == DressingMode::exact
                                         ? dress_exact(h, v, pol)
                                         : dress_first_order(h, channel, model, pol);
        const Vector state = cfg.convention == QpeInitialConvention::fixed_state
                                 ? psi
                                 : Vector(v.matrix() * psi);
        if (cfg.mode == QpeMode::circuit) {
            per_channel[a] = qpe_circuit_distribution(ha, state, t, cfg.n_register, pol);
        } else {
            const Spectrum spec_a = eigh(ha, pol);
            const Vector overlaps = spec_a.eigenvectors.matrix().adjoint() * state;
            RealVector weights(d);
            for (Index u = 0; u < d; ++u) weights(u) = std::norm(overlaps(u));
            per_channel[a] =
                qpe_kernel_distribution(spec_a.eigenvalues, weights, t, cfg.n_register, pol);
        }
    });

    std::vector<double> channel_weights(n_channels);
    for (std::size_t a = 0; a < n_channels; ++a)
        channel_weights[a] = cfg.ensemble.entries[a].weight;

    QpeResult result;
    result.n_register = cfg.n_register;
    result.t_used = t;
    result.histogram = aggregate(channel_weights, per_channel);
    result.per_channel = std::move(per_channel);

    const double total = result.histogram.sum();
    if (std::abs(total - 1.0) > pol.histogram_norm_tol) {
        std::ostringstream os;
        os << "QPE histogram sums to " << total << ", expected 1 within "
           << pol.histogram_norm_tol;
        throw NumericalError(os.str());
    }

    result.estimates.reserve(bins);
    for (long j = 0; j < bins; ++j)
        result.estimates.push_back({j, qpe_energy_estimate(j, cfg.n_register, t),
                                    result.histogram(j)});
    return result;
}

} // namespace dressim
