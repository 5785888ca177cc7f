// fid.cpp — FID signal, spectrum, peaks, gap matching.

#include "dressim/fid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "dressim/errors.hpp"
#include "dressim/fft.hpp"
#include "dressim/parallel.hpp"

namespace dressim {

namespace {

using namespace std::complex_literals;

void require(bool ok, const std::string& what) {
    if (!ok) throw ContractViolation(what);
}

Complex pairwise_sum(const Complex* data, std::size_t n) {
    if (n == 0) return Complex(0.0, 0.0);
    if (n == 1) return data[0];
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

} // namespace

// ---------------------------- observables ------------------------------------

Matrix observable_matrix(const ObservableSpec& observable, const ModelSpec& model,
                         const NumericalPolicy& pol) {
    const Index dim = hilbert_dim(model, pol);
    if (std::holds_alternative<Matrix>(observable)) {
        const Matrix& o = std::get<Matrix>(observable);
        require(o.rows() == dim && o.cols() == dim,
                "observable matrix does not match the model dimension");
        if (!all_finite(o)) throw NumericalError("observable has non-finite entries");
        return o;
    }
    const auto& ladder = std::get<LadderObservable>(observable);
    require(std::holds_alternative<SpinModelSpec>(model),
            "ladder observable requires a spin model");
    const int n = std::get<SpinModelSpec>(model).n_qubits;
    require(ladder.qubit >= 0 && ladder.qubit < n, "ladder observable qubit out of range");
    Matrix local = Matrix::Zero(2, 2);
    local(0, 1) = 2.0;  // σ^x + iσ^y
    return embed_site_operator(local, ladder.qubit, n, 2, pol);
}

// ---------------------------- signal ------------------------------------------

std::vector<Complex> fid_signal(const ChannelEnsemble& ensemble, const ModelSpec& model,
                                const DensityMatrix& rho0, const FidConfig& cfg,
                                DressingMode mode, int threads, const NumericalPolicy& pol) {
    validate_grid(cfg.grid);
    require(std::isfinite(cfg.v0), "signal scale must be finite");
    const HermitianOperator h = build_hamiltonian(model, pol);
    require(rho0.dim() == h.dim(), "initial state does not match the model dimension");
    const Matrix obs = observable_matrix(cfg.observable, model, pol);

    const Spectrum noiseless = eigh(h, pol);
    const double hnorm = std::max(std::abs(noiseless.eigenvalues.minCoeff()),
                                  std::abs(noiseless.eigenvalues.maxCoeff()));
    if (hnorm > 0.0) {
        const double dt_required = std::numbers::pi / hnorm;
        if (cfg.grid.dt >= dt_required) {
            std::ostringstream os;
            os << "time step " << cfg.grid.dt << " aliases the spectral range; grid.dt must be"
               << " below pi/||H|| = " << dt_required;
            throw ConfigError("grid.dt", os.str());
        }
    }

    const auto dressed = dressed_hamiltonians(h, ensemble, model, mode, pol);
    const long n = cfg.grid.n_samples;
    const std::size_t n_channels = dressed.size();

    // Per channel: W_{uv} = (V†ρ0V)_{uv} (V†OV)_{vu}, then
    // V_a(t) = Σ_{uv} W_{uv} e^{-i(λ_u-λ_v)t} — O(d²) per sample.
    std::vector<std::vector<Complex>> per_channel(n_channels);
    parallel_for(static_cast<long>(n_channels), threads, [&](long a) {
        const Spectrum spec = eigh(dressed[a].second, pol);
        const Matrix& v = spec.eigenvectors.matrix();
        const Matrix rho_eig = v.adjoint() * rho0.matrix() * v;
        const Matrix obs_eig = v.adjoint() * obs * v;
        const Matrix w = rho_eig.cwiseProduct(obs_eig.transpose());
        const Index d = h.dim();
        auto& out = per_channel[a];
        out.resize(n);
        Vector phases(d);
        for (long i = 0; i < n; ++i) {
            const double t = cfg.grid.time(i);
            for (Index u = 0; u < d; ++u)
                phases(u) = std::exp(-1.0i * spec.eigenvalues(u) * t);
            out[i] = (phases.transpose() * w * phases.conjugate())(0, 0);
        }
    });

    std::vector<double> weights(n_channels);
    for (std::size_t a = 0; a < n_channels; ++a) weights[a] = dressed[a].first;

    std::vector<Complex> signal(n);
    std::vector<Complex> terms(n_channels);
    for (long i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < n_channels; ++a) terms[a] = weights[a] * per_channel[a][i];
        signal[i] = cfg.v0 * pairwise_sum(terms.data(), terms.size());
    }

    const double bound = cfg.v0 * spectral_norm(obs, pol) * (1.0 + 1e-9) + 1e-12;
    for (const Complex& s : signal)
        if (std::abs(s) > bound)
            throw NumericalError("FID signal exceeds the V0·||O|| bound");
    return signal;
}

// ---------------------------- spectrum ----------------------------------------

FidSpectrum dft_spectrum(const std::vector<Complex>& signal, const TimeGrid& grid, Window window) {
    validate_grid(grid);
    const long n = static_cast<long>(signal.size());
    require(n >= 8, "spectrum needs at least 8 samples");
    require(n == grid.n_samples, "signal length does not match the grid");

    std::vector<Complex> data(signal.begin(), signal.end());
    if (window == Window::hann) {
        for (long m = 0; m < n; ++m) {
            const double w =
                0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(m) /
                                      static_cast<double>(n - 1)));
            data[m] *= w;
        }
    }
    dft_inplace(data, -1);

    FidSpectrum out;
    out.frequencies.resize(n);
    out.power.resize(n);
    const double domega = 2.0 * std::numbers::pi / (static_cast<double>(n) * grid.dt);
    const long half = n / 2;
    const double scale = 1.0 / static_cast<double>(n);
    for (long i = 0; i < n; ++i) {
        out.frequencies(i) = domega * static_cast<double>(i - half);
        // a tone e^{-iωt} appears in the forward DFT at bin -ω
        const long k = ((-(i - half)) % n + n) % n;
        const double mag = std::abs(data[k]) * scale;
        out.power(i) = mag * mag;
    }
    return out;
}

// ---------------------------- peaks -------------------------------------------

std::vector<Peak> extract_peaks(const RealVector& frequencies, const RealVector& power,
                                double threshold_ratio) {
    require(frequencies.size() > 0 && frequencies.size() == power.size(),
            "peak extraction needs a nonempty spectrum");
    require(threshold_ratio > 0.0 && threshold_ratio < 1.0,
            "peak threshold must lie strictly between 0 and 1");
    const long n = frequencies.size();
    const double maxp = power.maxCoeff();
    std::vector<Peak> peaks;
    if (maxp <= 0.0) return peaks;
    const double thr = threshold_ratio * maxp;
    const double dw = n > 1 ? frequencies(1) - frequencies(0) : 0.0;

    for (long i = 1; i + 1 < n; ++i) {
        const double ym = power(i - 1), y0 = power(i), yp = power(i + 1);
        if (y0 < thr || y0 <= ym || y0 <= yp) continue;
        double offset = 0.0;
        double amplitude = y0;
        // On-grid tones leave only rounding noise in the neighbours; the
        // log-parabola would amplify that noise into a spurious sub-bin shift.
        const bool neighbours_real = ym > y0 * 1e-12 && yp > y0 * 1e-12;
        if (!neighbours_real) {
            peaks.push_back({frequencies(i), amplitude});
            continue;
        }
        if (ym > 0.0 && y0 > 0.0 && yp > 0.0) {
            // log-power parabola: near-unbiased for windowed tone shapes
            const double lm = std::log(ym), l0 = std::log(y0), lp = std::log(yp);
            const double denom = lm - 2.0 * l0 + lp;
            if (denom < 0.0) {
                offset = 0.5 * (lm - lp) / denom;
                amplitude = std::exp(l0 - 0.25 * (lm - lp) * offset);
            }
        } else {
            const double denom = ym - 2.0 * y0 + yp;
            if (denom < 0.0) {
                offset = 0.5 * (ym - yp) / denom;
                amplitude = y0 - 0.25 * (ym - yp) * offset;
            }
        }
        offset = std::clamp(offset, -0.5, 0.5);
        peaks.push_back({frequencies(i) + offset * dw, amplitude});
    }
    std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
        if (a.amplitude != b.amplitude) return a.amplitude > b.amplitude;
        return a.omega < b.omega;
    });
    return peaks;
}

// ---------------------------- gap matching ------------------------------------

std::vector<Tone> spectral_tones(const Spectrum& spectrum, const DensityMatrix& rho0,
                                 const Matrix& observable, const NumericalPolicy& pol) {
    const Matrix& v = spectrum.eigenvectors.matrix();
    require(rho0.dim() == v.rows() && observable.rows() == v.rows() &&
                observable.cols() == v.rows(),
            "tone expansion needs matching dimensions");
    const Matrix rho_eig = v.adjoint() * rho0.matrix() * v;
    const Matrix obs_eig = v.adjoint() * observable * v;
    const Index d = v.rows();

    struct Term {
        double omega;
        Complex amplitude;
    };
    std::vector<Term> terms;
    terms.reserve(static_cast<std::size_t>(d) * d);
    for (Index u = 0; u < d; ++u)
        for (Index w = 0; w < d; ++w)
            terms.push_back({spectrum.eigenvalues(u) - spectrum.eigenvalues(w),
                             rho_eig(u, w) * obs_eig(w, u)});
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.omega < b.omega; });

    std::vector<Tone> tones;
    std::size_t i = 0;
    while (i < terms.size()) {
        std::size_t j = i;
        Complex amp(0.0, 0.0);
        double omega_sum = 0.0;
        while (j < terms.size() && terms[j].omega - terms[i].omega <= pol.degeneracy_tol) {
            amp += terms[j].amplitude;
            omega_sum += terms[j].omega;
            ++j;
        }
        tones.push_back({omega_sum / static_cast<double>(j - i), amp});
        i = j;
    }
    return tones;
}

namespace {

MatchReport match_against_gaps(const std::vector<Peak>& peaks, const Spectrum& spectrum,
                               double tol) {
    require(tol > 0.0, "gap-matching tolerance must be positive");
    const Index d = spectrum.eigenvalues.size();
    MatchReport report;
    report.tol = tol;
    report.all_peaks_matched = true;
    for (const Peak& p : peaks) {
        GapMatch m;
        m.peak = p;
        double best = std::numeric_limits<double>::infinity();
        for (Index u = 0; u < d; ++u) {
            for (Index v = 0; v < d; ++v) {
                const double gap = spectrum.eigenvalues(u) - spectrum.eigenvalues(v);
                const double delta = std::abs(p.omega - gap);
                if (delta < best) {
                    best = delta;
                    m.gap = gap;
                    m.u = u;
                    m.v = v;
                }
            }
        }
        m.delta = best;
        m.matched = best <= tol;
        report.all_peaks_matched = report.all_peaks_matched && m.matched;
        report.matches.push_back(m);
    }
    return report;
}

} // namespace

MatchReport match_gaps(const std::vector<Peak>& peaks, const Spectrum& spectrum, double tol) {
    return match_against_gaps(peaks, spectrum, tol);
}

MatchReport match_gaps(const std::vector<Peak>& peaks, const Spectrum& spectrum, double tol,
                       const DensityMatrix& rho0, const Matrix& observable,
                       double amplitude_floor, const NumericalPolicy& pol) {
    require(amplitude_floor > 0.0 && amplitude_floor < 1.0,
            "amplitude floor must lie strictly between 0 and 1");
    MatchReport report = match_against_gaps(peaks, spectrum, tol);
    const auto tones = spectral_tones(spectrum, rho0, observable, pol);
    double max_amp = 0.0;
    for (const Tone& t : tones) max_amp = std::max(max_amp, std::abs(t.amplitude));
    if (max_amp <= 0.0) return report;
    for (const Tone& t : tones) {
        const double amp = std::abs(t.amplitude);
        if (amp < amplitude_floor * max_amp) continue;
        bool seen = false;
        for (const Peak& p : peaks)
            if (std::abs(p.omega - t.omega) <= tol) {
                seen = true;
                break;
            }
        if (!seen) report.missed_gaps.push_back({t.omega, amp});
    }
    return report;
}

// ---------------------------- pipeline ----------------------------------------

FidResult run_fid(const ChannelEnsemble& ensemble, const ModelSpec& model,
                  const DensityMatrix& rho0, const FidConfig& cfg, double peak_threshold,
                  DressingMode mode, int threads, const NumericalPolicy& pol) {
    FidResult result;
    result.signal = fid_signal(ensemble, model, rho0, cfg, mode, threads, pol);
    FidSpectrum spec = dft_spectrum(result.signal, cfg.grid, cfg.window);
    result.frequencies = std::move(spec.frequencies);
    result.power = std::move(spec.power);
    result.peaks = extract_peaks(result.frequencies, result.power, peak_threshold);
    return result;
}

} // namespace dressim
