#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dressim/config.hpp"
#include "dressim/errors.hpp"
#include "dressim/fft.hpp"
#include "dressim/fid.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace dressim;
using testing_helpers::random_hermitian;

namespace {

constexpr double kPi = std::numbers::pi;

SpinModelSpec chain(int n) {
    SpinModelSpec spec;
    spec.n_qubits = n;
    spec.transverse_field = 0.3;
    IsingCost cost;
    for (int i = 0; i < n; ++i) cost.fields.push_back(0.5 + 0.17 * i);
    for (int i = 0; i + 1 < n; ++i) cost.couplings.push_back({i, i + 1, -0.35});
    spec.cost = cost;
    return spec;
}

std::vector<Complex> tone(double omega, double dt, long n, Complex amp) {
    std::vector<Complex> x(static_cast<std::size_t>(n));
    for (long m = 0; m < n; ++m)
        x[static_cast<std::size_t>(m)] =
            amp * std::exp(Complex(0.0, -omega * dt * static_cast<double>(m)));
    return x;
}

} // namespace

TEST_SUITE("fid") {

TEST_CASE("fast transform matches the direct Fourier sum") {
    Rng rng(51);
    for (std::size_t n : {16u, 24u}) {  // radix-2 and direct paths
        std::vector<Complex> x(n);
        for (auto& v : x) v = Complex(rng.gaussian(1.0), rng.gaussian(1.0));
        for (int sign : {-1, 1}) {
            auto fast = x;
            dft_inplace(fast, sign);
            const auto slow = oracles::naive_dft(x, sign);
            for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(fast[k] - slow[k]) <= 1e-10);
        }
    }
}

TEST_CASE("a negative-phase tone lands on the positive frequency axis") {
    const long n = 64;
    const double dt = 0.25;
    const TimeGrid grid{0.0, dt, n};
    const double omega0 = 2.0 * kPi * 8.0 / (dt * static_cast<double>(n));  // on-grid
    const auto spec = dft_spectrum(tone(omega0, dt, n, Complex(1.0, 0.0)), grid, Window::none);
    Index argmax = 0;
    spec.power.maxCoeff(&argmax);
    CHECK(spec.frequencies(argmax) == doctest::Approx(omega0).epsilon(1e-12));
    // On-grid rectangular tone concentrates in one bin with unit power.
    CHECK(spec.power(argmax) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("a cosine splits into a symmetric pair") {
    const long n = 64;
    const double dt = 0.25;
    const double omega0 = 2.0 * kPi * 6.0 / (dt * static_cast<double>(n));
    std::vector<Complex> x(static_cast<std::size_t>(n));
    for (long m = 0; m < n; ++m)
        x[static_cast<std::size_t>(m)] = std::cos(omega0 * dt * static_cast<double>(m));
    const auto spec = dft_spectrum(x, TimeGrid{0.0, dt, n}, Window::none);
    const auto peaks = extract_peaks(spec.frequencies, spec.power, 0.1);
    REQUIRE(peaks.size() == 2);
    CHECK(std::abs(peaks[0].omega) == doctest::Approx(omega0).epsilon(1e-9));
    CHECK(std::abs(peaks[1].omega) == doctest::Approx(omega0).epsilon(1e-9));
    CHECK(peaks[0].omega == doctest::Approx(-peaks[1].omega).epsilon(1e-9));
}

TEST_CASE("parabolic refinement resolves an off-grid tone to a fraction of a bin") {
    const long n = 128;
    const double dt = 0.2;
    const double bin = 2.0 * kPi / (dt * static_cast<double>(n));
    const double omega0 = bin * 13.3;
    const auto spec =
        dft_spectrum(tone(omega0, dt, n, Complex(1.0, 0.0)), TimeGrid{0.0, dt, n}, Window::hann);
    const auto peaks = extract_peaks(spec.frequencies, spec.power, 0.05);
    REQUIRE(!peaks.empty());
    CHECK(std::abs(peaks[0].omega - omega0) <= 0.1 * bin);
}

TEST_CASE("threshold filters weak tones and orders peaks by amplitude") {
    const long n = 128;
    const double dt = 0.2;
    const double bin = 2.0 * kPi / (dt * static_cast<double>(n));
    auto x = tone(bin * 20.0, dt, n, Complex(1.0, 0.0));
    const auto weak = tone(bin * 40.0, dt, n, Complex(0.1, 0.0));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += weak[i];
    const auto spec = dft_spectrum(x, TimeGrid{0.0, dt, n}, Window::none);

    const auto strict = extract_peaks(spec.frequencies, spec.power, 0.3);
    REQUIRE(strict.size() == 1);
    CHECK(strict[0].omega == doctest::Approx(bin * 20.0).epsilon(1e-9));

    const auto loose = extract_peaks(spec.frequencies, spec.power, 0.001);
    REQUIRE(loose.size() >= 2);
    CHECK(loose[0].amplitude >= loose[1].amplitude);
    CHECK(loose[1].omega == doctest::Approx(bin * 40.0).epsilon(1e-6));
}

TEST_CASE("signal equals the eigen-expansion oracle per channel") {
    const auto spec = chain(2);
    const ModelSpec model = spec;
    const auto h = build_hamiltonian(model);
    SamplerDescriptor d;
    d.distribution = NoiseDistribution::gaussian;
    d.width = 0.2;
    d.count = 5;
    const auto ens = sample_ensemble(d, model, 17);
    FidConfig cfg;
    cfg.v0 = 1.3;
    cfg.observable = LadderObservable{0};
    cfg.grid = TimeGrid{0.0, 0.4, 32};
    const Matrix obs = observable_matrix(cfg.observable, model);
    Vector psi = Vector::Constant(4, Complex(0.5, 0.0));
    const auto rho0 = DensityMatrix::pure(psi);

    for (const auto& entry : ens.entries) {
        ChannelEnsemble single;
        single.entries.push_back({1.0, entry.channel});
        const auto signal = fid_signal(single, model, rho0, cfg);
        const auto v = build_dressing_unitary(entry.channel, model);
        const Spectrum s = eigh(dress_exact(h, v));
        const Matrix rho_e = s.eigenvectors.matrix().adjoint() * rho0.matrix() *
                             s.eigenvectors.matrix();
        const Matrix obs_e = s.eigenvectors.matrix().adjoint() * obs * s.eigenvectors.matrix();
        for (long i = 0; i < cfg.grid.n_samples; ++i) {
            Complex expected(0.0, 0.0);
            for (Index u = 0; u < 4; ++u)
                for (Index w = 0; w < 4; ++w)
                    expected += rho_e(u, w) * obs_e(w, u) *
                                std::exp(Complex(0.0, -(s.eigenvalues(u) - s.eigenvalues(w)) *
                                                          cfg.grid.time(i)));
            expected *= cfg.v0;
            CHECK(std::abs(signal[static_cast<std::size_t>(i)] - expected) <= 1e-10);
        }
    }
}

TEST_CASE("sampling faster than the spectral range is required") {
    const ModelSpec model = chain(2);
    const auto rho0 = DensityMatrix::from(0.25 * identity(4));
    ChannelEnsemble noiseless;
    noiseless.entries.push_back({1.0, zero_channel(model)});
    FidConfig cfg;
    cfg.observable = LadderObservable{0};
    cfg.grid = TimeGrid{0.0, 50.0, 32};  // far beyond pi/||H||
    try {
        fid_signal(noiseless, model, rho0, cfg);
        FAIL("aliasing grid was accepted");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "grid.dt");
    }
    cfg.grid = TimeGrid{0.0, 0.3, 4};  // too short for a spectrum
    CHECK_THROWS_AS(run_fid(noiseless, model, rho0, cfg, 0.05), ContractViolation);
}

TEST_CASE("the readout prefactor scales the signal linearly") {
    const ModelSpec model = chain(2);
    Vector psi = Vector::Constant(4, Complex(0.5, 0.0));
    const auto rho0 = DensityMatrix::pure(psi);
    ChannelEnsemble noiseless;
    noiseless.entries.push_back({1.0, zero_channel(model)});
    FidConfig cfg;
    cfg.observable = LadderObservable{1};
    cfg.grid = TimeGrid{0.0, 0.4, 16};
    auto base = fid_signal(noiseless, model, rho0, cfg);
    cfg.v0 = 2.5;
    auto scaled = fid_signal(noiseless, model, rho0, cfg);
    for (std::size_t i = 0; i < base.size(); ++i)
        CHECK(std::abs(scaled[i] - 2.5 * base[i]) <= 1e-12);
}

TEST_CASE("ladder observable embeds the raising pattern at the named qubit") {
    const ModelSpec model = chain(2);
    const Matrix obs = observable_matrix(LadderObservable{1}, model);
    Matrix local = Matrix::Zero(2, 2);
    local(0, 1) = 2.0;
    CHECK(max_abs(obs - kron(identity(2), local)) == 0.0);
    CHECK_THROWS_AS(observable_matrix(LadderObservable{5}, model), ContractViolation);
}

TEST_CASE("tone summary collapses degenerate gaps and matches the initial value") {
    const ModelSpec model = chain(3);
    const auto h = build_hamiltonian(model);
    const Spectrum s = eigh(h);
    Vector psi = Vector::Constant(8, Complex(1.0, 0.0));
    const auto rho0 = DensityMatrix::pure(psi);
    const Matrix obs = observable_matrix(LadderObservable{0}, model);
    const auto tones = spectral_tones(s, rho0, obs);
    REQUIRE(!tones.empty());
    for (std::size_t i = 1; i < tones.size(); ++i) {
        CHECK(tones[i].omega > tones[i - 1].omega);
        CHECK(tones[i].omega - tones[i - 1].omega > 1e-9);
    }
    Complex total(0.0, 0.0);
    for (const auto& t : tones) total += t.amplitude;
    const Complex v0 = trace(rho0.matrix() * obs);
    CHECK(std::abs(total - v0) <= 1e-10);
}

TEST_CASE("gap matching accepts true gaps, flags strangers, reports missing tones") {
    Matrix diag = Matrix::Zero(3, 3);
    diag.diagonal() << Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(2.5, 0.0);
    const Spectrum s = eigh(HermitianOperator::from(diag));

    std::vector<Peak> peaks = {{1.5, 1.0}, {1.0, 0.8}, {0.0, 0.5}};
    const auto ok = match_gaps(peaks, s, 0.05);
    CHECK(ok.all_peaks_matched);
    REQUIRE(ok.matches.size() == 3);
    for (const auto& m : ok.matches) CHECK(std::abs(m.delta) <= 0.05);

    std::vector<Peak> stray = {{0.7, 1.0}};  // no gap within tolerance
    const auto bad = match_gaps(stray, s, 0.05);
    CHECK(!bad.all_peaks_matched);
    CHECK(!bad.matches[0].matched);

    // Uniform pure state over the eigenbasis sees every gap; with no peaks
    // extracted, the strong tones must be reported as missed.
    Vector psi = Vector::Constant(3, Complex(1.0, 0.0));
    const auto rho0 = DensityMatrix::pure(psi);
    Matrix obs = Matrix::Zero(3, 3);
    obs(0, 1) = Complex(1.0, 0.0);
    obs(1, 0) = Complex(1.0, 0.0);
    const auto missing = match_gaps({}, s, 0.05, rho0, obs, 0.05);
    CHECK(missing.all_peaks_matched);  // vacuous: no peaks to mismatch
    CHECK(!missing.missed_gaps.empty());
}

TEST_CASE("windowing does not move well-separated peaks") {
    const ModelSpec model = chain(2);
    Vector psi = Vector::Constant(4, Complex(0.5, 0.0));
    const auto rho0 = DensityMatrix::pure(psi);
    ChannelEnsemble noiseless;
    noiseless.entries.push_back({1.0, zero_channel(model)});
    FidConfig cfg;
    cfg.observable = LadderObservable{0};
    cfg.grid = TimeGrid{0.0, 0.45, 256};
    const double bin = 2.0 * kPi / (cfg.grid.dt * 256.0);

    cfg.window = Window::hann;
    const auto with = run_fid(noiseless, model, rho0, cfg, 0.05);
    cfg.window = Window::none;
    const auto without = run_fid(noiseless, model, rho0, cfg, 0.05);
    REQUIRE(!with.peaks.empty());
    REQUIRE(with.peaks.size() == without.peaks.size());
    for (std::size_t i = 0; i < with.peaks.size(); ++i) {
        double best = 1e9;
        for (const auto& other : without.peaks)
            best = std::min(best, std::abs(with.peaks[i].omega - other.omega));
        CHECK(best <= bin);
    }
}

TEST_CASE("noisy exact-dressing peaks stay on the noiseless gaps end to end") {
    const auto spec = chain(3);
    const ModelSpec model = spec;
    const auto h = build_hamiltonian(model);
    SamplerDescriptor d;
    d.distribution = NoiseDistribution::gaussian;
    d.width = 0.05;
    d.count = 8;
    const auto ens = sample_ensemble(d, model, 4);
    Vector psi = Vector::Constant(8, Complex(1.0, 0.0));
    const auto rho0 = DensityMatrix::pure(psi);
    FidConfig cfg;
    cfg.observable = LadderObservable{0};
    cfg.grid = TimeGrid{0.0, 0.3, 1024};
    const auto result = run_fid(ens, model, rho0, cfg, 0.05);
    REQUIRE(!result.peaks.empty());
    const double bin = 2.0 * kPi / (cfg.grid.dt * 1024.0);
    const auto report = match_gaps(result.peaks, eigh(h), bin);
    CHECK(report.all_peaks_matched);
}

}
