// dressim_cli.cpp — command-line driver; talks to the library exclusively
// through the C interface.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "dressim.h"

namespace {

struct CommonArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Path to the JSON experiment config")
        ->required();
    cmd->add_option("--seed", args.seed, "Master seed override")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--threads", args.threads,
                    "Worker thread cap (0 = hardware concurrency)");
    cmd->add_option("--out", args.out_dir, "Output directory override");
}

int status_to_exit(dressim_status status) {
    switch (status) {
        case DRESSIM_OK: return 0;
        case DRESSIM_VALIDATION_FAILED: return 1;
        case DRESSIM_CONFIG_ERROR: return 2;
        case DRESSIM_CAPACITY_ERROR: return 3;
        case DRESSIM_INTERNAL_ERROR: return 4;
    }
    return 4;
}

int run_task(const char* task, const CommonArgs& args) {
    dressim_session* raw = nullptr;
    dressim_status status = dressim_session_create(args.config_path.c_str(), &raw);
    std::unique_ptr<dressim_session, decltype(&dressim_session_destroy)> session(
        raw, &dressim_session_destroy);
    auto bail = [&](dressim_status st) {
        const char* message = session ? dressim_last_error(session.get()) : "";
        std::fprintf(stderr, "dressim %s: %s\n", task,
                     (message && *message) ? message : "unspecified error");
        return status_to_exit(st);
    };
    if (status != DRESSIM_OK) return bail(status);

    if ((status = dressim_session_set_task(session.get(), task)) != DRESSIM_OK)
        return bail(status);
    if (args.seed_set &&
        (status = dressim_session_set_seed(session.get(), args.seed)) != DRESSIM_OK)
        return bail(status);
    if ((status = dressim_session_set_threads(session.get(), args.threads)) != DRESSIM_OK)
        return bail(status);
    if (!args.out_dir.empty() &&
        (status = dressim_session_set_output_dir(session.get(), args.out_dir.c_str())) !=
            DRESSIM_OK)
        return bail(status);

    if ((status = dressim_session_run(session.get())) != DRESSIM_OK) return bail(status);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral simulator for classically dressed Hamiltonians"};
    app.set_version_flag("--version", std::string(dressim_version()));
    app.require_subcommand(1);

    const char* tasks[] = {"spectrum", "fid", "qpe", "validate"};
    const char* blurbs[] = {
        "Noiseless and per-channel dressed eigenvalues",
        "Channel-averaged free-induction signal, spectrum, and peak/gap report",
        "Generalized phase-estimation outcome histogram",
        "Run every invariant check against the configured model"};
    CommonArgs args[4];
    for (int i = 0; i < 4; ++i) add_common(app.add_subcommand(tasks[i], blurbs[i]), args[i]);

    CLI11_PARSE(app, argc, argv);

    for (int i = 0; i < 4; ++i)
        if (app.get_subcommand(tasks[i])->parsed()) return run_task(tasks[i], args[i]);
    return 2;
}
