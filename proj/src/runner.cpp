// runner.cpp — experiment orchestration and result serialization.

#include "dressim/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <variant>

#include <json.hpp>

#include "dressim/validate.hpp"
#include "dressim/version.hpp"

namespace dressim {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// All CSV numbers round-trip exactly; output bytes depend only on the values.
std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path.string());
    out << text;
    if (!out) throw Error("failed writing output file: " + path.string());
}

struct TaskContext {
    const ExperimentConfig& cfg;
    const NumericalPolicy& pol;
    int threads;
    fs::path out_dir;
    std::vector<std::pair<std::string, double>> timings;

    ModelSpec model;
    HermitianOperator h;
    ChannelEnsemble ensemble;

    explicit TaskContext(const RunRequest& request)
        : cfg(request.cfg), pol(request.cfg.policy), threads(request.threads),
          out_dir(request.cfg.output_dir), model(request.cfg.model),
          h(build_hamiltonian(request.cfg.model, request.cfg.policy)),
          ensemble(sample_ensemble(request.cfg.ensemble, request.cfg.model,
                                   request.cfg.master_seed, request.cfg.policy)) {
        fs::create_directories(out_dir);
    }

    void write_manifest(const RunRequest& request, Task task) {
        RunManifest manifest;
        manifest.config_hash = config_hash(request.config_text);
        manifest.seed = cfg.master_seed;
        manifest.version = kVersion;
        manifest.task = task_name(task);
        manifest.timings_seconds = timings;
        manifest.policy = cfg.policy;
        write_text(out_dir / "manifest.json", manifest_to_json(manifest));
    }
};

// ---------------------------- spectrum ----------------------------------------

void run_spectrum(TaskContext& ctx) {
    const auto t0 = Clock::now();
    const Spectrum base = eigh(ctx.h, ctx.pol);
    const auto channels =
        dressed_hamiltonians(ctx.h, ctx.ensemble, ctx.model, ctx.cfg.dressing, ctx.pol);

    std::string noiseless = "index,energy\n";
    for (Index u = 0; u < base.eigenvalues.size(); ++u)
        noiseless += std::to_string(u) + "," + num(base.eigenvalues(u)) + "\n";

    std::string dressed = "channel,index,energy\n";
    double max_dev = 0.0;
    for (std::size_t a = 0; a < channels.size(); ++a) {
        const RealVector ev = eigh(channels[a].second, ctx.pol).eigenvalues;
        max_dev = std::max(max_dev, (ev - base.eigenvalues).cwiseAbs().maxCoeff());
        for (Index u = 0; u < ev.size(); ++u)
            dressed += std::to_string(a) + "," + std::to_string(u) + "," + num(ev(u)) + "\n";
    }
    ctx.timings.emplace_back("compute", seconds_since(t0));

    const auto t1 = Clock::now();
    const double hnorm = spectral_norm(ctx.h.matrix(), ctx.pol);
    json report;
    report["schema_version"] = kSchemaVersion;
    report["hilbert_dim"] = ctx.h.dim();
    report["n_channels"] = channels.size();
    report["dressing_mode"] =
        ctx.cfg.dressing == DressingMode::exact ? "exact" : "first_order";
    report["spectral_norm"] = hnorm;
    report["max_eigenvalue_deviation"] = max_dev;
    report["exact_invariance_tolerance"] =
        ctx.pol.spectral_invariance_tol * (1.0 + hnorm);
    write_text(ctx.out_dir / "eigenvalues.csv", noiseless);
    write_text(ctx.out_dir / "dressed_spectra.csv", dressed);
    write_text(ctx.out_dir / "spectrum_report.json", report.dump(2) + "\n");
    ctx.timings.emplace_back("write", seconds_since(t1));
}

// ---------------------------- fid ---------------------------------------------

void run_fid_task(TaskContext& ctx) {
    const FidTaskConfig& task = *ctx.cfg.fid;
    const auto t0 = Clock::now();
    const DensityMatrix rho0 = initial_density(task.initial, ctx.h.dim(), ctx.pol);
    const FidResult result = run_fid(ctx.ensemble, ctx.model, rho0, task.fid,
                                     task.peak_threshold, ctx.cfg.dressing, ctx.threads,
                                     ctx.pol);
    const double bin = 2.0 * std::numbers::pi /
                       (task.fid.grid.dt * static_cast<double>(task.fid.grid.n_samples));
    const double tol = task.match_tol > 0.0 ? task.match_tol : bin;
    const Matrix obs = observable_matrix(task.fid.observable, ctx.model, ctx.pol);
    const MatchReport report = match_gaps(result.peaks, eigh(ctx.h, ctx.pol), tol, rho0, obs,
                                          task.amplitude_floor, ctx.pol);
    ctx.timings.emplace_back("compute", seconds_since(t0));

    const auto t1 = Clock::now();
    std::string series = "index,t,re,im\n";
    for (std::size_t i = 0; i < result.signal.size(); ++i)
        series += std::to_string(i) + "," + num(task.fid.grid.time(static_cast<long>(i))) +
                  "," + num(result.signal[i].real()) + "," + num(result.signal[i].imag()) +
                  "\n";

    std::string spectrum = "index,omega,power\n";
    for (Index i = 0; i < result.frequencies.size(); ++i)
        spectrum += std::to_string(i) + "," + num(result.frequencies(i)) + "," +
                    num(result.power(i)) + "\n";

    json jreport;
    jreport["schema_version"] = kSchemaVersion;
    jreport["peak_threshold"] = task.peak_threshold;
    jreport["match_tolerance"] = report.tol;
    jreport["all_peaks_matched"] = report.all_peaks_matched;
    json peaks = json::array();
    for (const auto& m : report.matches) {
        json one;
        one["omega"] = m.peak.omega;
        one["amplitude"] = m.peak.amplitude;
        one["nearest_gap"] = m.gap;
        one["u"] = m.u;
        one["v"] = m.v;
        one["delta"] = m.delta;
        one["matched"] = m.matched;
        peaks.push_back(one);
    }
    jreport["peaks"] = peaks;
    json missed = json::array();
    for (const auto& g : report.missed_gaps) {
        json one;
        one["gap"] = g.gap;
        one["amplitude"] = g.amplitude;
        missed.push_back(one);
    }
    jreport["missed_gaps"] = missed;

    write_text(ctx.out_dir / "fid_series.csv", series);
    write_text(ctx.out_dir / "fid_spectrum.csv", spectrum);
    write_text(ctx.out_dir / "match_report.json", jreport.dump(2) + "\n");
    ctx.timings.emplace_back("write", seconds_since(t1));
}

// ---------------------------- qpe ---------------------------------------------

void run_qpe_task(TaskContext& ctx) {
    const QpeTaskConfig& task = *ctx.cfg.qpe;
    const auto t0 = Clock::now();
    QpeConfig qpe;
    qpe.n_register = task.n_register;
    qpe.t_evolution = task.t_evolution;
    qpe.initial = task.initial;
    qpe.ensemble = ctx.ensemble;
    qpe.mode = task.mode;
    qpe.convention = task.convention;
    qpe.dressing = ctx.cfg.dressing;
    const QpeResult result = run_generalized_qpe(qpe, ctx.model, ctx.threads, ctx.pol);
    ctx.timings.emplace_back("compute", seconds_since(t0));

    const auto t1 = Clock::now();
    std::string histogram = "j,probability,energy_estimate\n";
    for (const auto& est : result.estimates)
        histogram += std::to_string(est.j) + "," + num(est.probability) + "," +
                     num(est.energy) + "\n";

    json summary;
    summary["schema_version"] = kSchemaVersion;
    summary["n_register"] = result.n_register;
    summary["t_evolution"] = result.t_used;
    summary["mode"] = task.mode == QpeMode::kernel ? "kernel" : "circuit";
    summary["histogram_sum"] = result.histogram.sum();
    json top = json::array();
    std::vector<QpeResult::Estimate> sorted = result.estimates;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.probability > b.probability; });
    const std::size_t n_top = std::min<std::size_t>(sorted.size(), 16);
    for (std::size_t i = 0; i < n_top; ++i) {
        json one;
        one["j"] = sorted[i].j;
        one["probability"] = sorted[i].probability;
        one["energy_estimate"] = sorted[i].energy;
        top.push_back(one);
    }
    summary["top_outcomes"] = top;

    write_text(ctx.out_dir / "qpe_histogram.csv", histogram);
    write_text(ctx.out_dir / "qpe_summary.json", summary.dump(2) + "\n");
    ctx.timings.emplace_back("write", seconds_since(t1));
}

// ---------------------------- validate ----------------------------------------

int run_validate_task(TaskContext& ctx) {
    const auto t0 = Clock::now();
    const auto results = run_validation_suite(ctx.cfg, ctx.threads);
    const bool ok = all_passed(results);
    ctx.timings.emplace_back("compute", seconds_since(t0));

    const auto t1 = Clock::now();
    json report;
    report["schema_version"] = kSchemaVersion;
    report["all_passed"] = ok;
    json checks = json::array();
    for (const auto& r : results) {
        json one;
        one["name"] = r.name;
        one["passed"] = r.passed;
        one["detail"] = r.detail;
        checks.push_back(one);
    }
    report["checks"] = checks;
    write_text(ctx.out_dir / "validation_report.json", report.dump(2) + "\n");
    ctx.timings.emplace_back("write", seconds_since(t1));
    return ok ? 0 : 1;
}

} // namespace

int run_experiment(const RunRequest& request) {
    if (!request.cfg.task)
        throw ConfigError("task", "no task selected; pick spectrum, fid, qpe, or validate");
    const Task task = *request.cfg.task;
    TaskContext ctx(request);
    int status = 0;
    switch (task) {
        case Task::spectrum: run_spectrum(ctx); break;
        case Task::fid: run_fid_task(ctx); break;
        case Task::qpe: run_qpe_task(ctx); break;
        case Task::validate: status = run_validate_task(ctx); break;
    }
    ctx.write_manifest(request, task);
    return status;
}

} // namespace dressim
