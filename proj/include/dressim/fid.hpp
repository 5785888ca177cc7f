// fid.hpp — free-induction-decay readout: channel-averaged signal
// V(t) = V0 Σ_a p_a Tr[U_a(t) ρ0 U_a†(t) O], its Fourier spectrum, peak
// extraction, and matching of peaks against eigenvalue gaps E_u - E_v.

#pragma once

#include <variant>
#include <vector>

#include "dressim/dressing.hpp"
#include "dressim/evolution.hpp"
#include "dressim/linalg.hpp"
#include "dressim/models.hpp"

namespace dressim {

// ---------------------------- configuration ----------------------------------

// σ^x + iσ^y on one qubit of a spin model (= 2|0><1| on that site).
struct LadderObservable {
    int qubit = 0;
};

using ObservableSpec = std::variant<LadderObservable, Matrix>;

Matrix observable_matrix(const ObservableSpec& observable, const ModelSpec& model,
                         const NumericalPolicy& pol = default_policy());

enum class Window { none, hann };

struct FidConfig {
    double v0 = 1.0;
    ObservableSpec observable;
    TimeGrid grid;
    Window window = Window::hann;
};

// ---------------------------- results ----------------------------------------

struct Peak {
    double omega;
    double amplitude;
};

struct FidSpectrum {
    RealVector frequencies;  // ascending, two-sided
    RealVector power;
};

struct FidResult {
    std::vector<Complex> signal;
    RealVector frequencies;
    RealVector power;
    std::vector<Peak> peaks;  // descending amplitude
};

struct GapMatch {
    Peak peak;
    double gap;  // nearest E_u - E_v
    Index u = 0;
    Index v = 0;
    double delta = 0.0;
    bool matched = false;
};

struct MissedGap {
    double gap;
    double amplitude;  // |Σ ρ_{uv} O_{vu}| over the degenerate gap cluster
};

struct MatchReport {
    std::vector<GapMatch> matches;
    std::vector<MissedGap> missed_gaps;
    bool all_peaks_matched = false;
    double tol = 0.0;
};

// One tone per cluster of equal gaps: complex amplitude Σ ρ_{uv} O_{vu} with
// ρ, O taken in the eigenbasis; sorted by frequency.
struct Tone {
    double omega;
    Complex amplitude;
};

std::vector<Tone> spectral_tones(const Spectrum& spectrum, const DensityMatrix& rho0,
                                 const Matrix& observable,
                                 const NumericalPolicy& pol = default_policy());

// ---------------------------- pipeline ----------------------------------------

// Exact per-channel evolution; rejects grids with dt ≥ π/‖H‖₂ (aliasing).
std::vector<Complex> fid_signal(const ChannelEnsemble& ensemble, const ModelSpec& model,
                                const DensityMatrix& rho0, const FidConfig& cfg,
                                DressingMode mode = DressingMode::exact, int threads = 1,
                                const NumericalPolicy& pol = default_policy());

// Two-sided power spectrum on the ascending frequency axis
// ω_i = 2π(i - n/2)/(n dt); a tone e^{-iωt} lands at +ω. Needs n ≥ 8.
FidSpectrum dft_spectrum(const std::vector<Complex>& signal, const TimeGrid& grid, Window window);

// Local maxima above threshold_ratio × max power, refined by three-point
// parabolic interpolation (log-power when all three bins are positive).
std::vector<Peak> extract_peaks(const RealVector& frequencies, const RealVector& power,
                                double threshold_ratio);

MatchReport match_gaps(const std::vector<Peak>& peaks, const Spectrum& spectrum, double tol);

// Also reports gaps whose noiseless tone amplitude is at least
// amplitude_floor × the strongest tone but have no peak within tol.
MatchReport match_gaps(const std::vector<Peak>& peaks, const Spectrum& spectrum, double tol,
                       const DensityMatrix& rho0, const Matrix& observable,
                       double amplitude_floor,
                       const NumericalPolicy& pol = default_policy());

FidResult run_fid(const ChannelEnsemble& ensemble, const ModelSpec& model,
                  const DensityMatrix& rho0, const FidConfig& cfg, double peak_threshold,
                  DressingMode mode = DressingMode::exact, int threads = 1,
                  const NumericalPolicy& pol = default_policy());

} // namespace dressim
