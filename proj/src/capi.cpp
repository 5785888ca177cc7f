// capi.cpp — C interface: opaque session plus status-code error reporting.

#include "dressim.h"

#include <fstream>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "dressim/runner.hpp"
#include "dressim/version.hpp"

struct dressim_session {
    std::string config_text;
    std::optional<dressim::ExperimentConfig> cfg;
    dressim_status parse_status = DRESSIM_OK;
    std::string parse_error;
    int threads = 1;
    std::string last_error;
};

namespace {

dressim_status finish(dressim_session* session, dressim_status status, std::string message) {
    if (session) session->last_error = std::move(message);
    return status;
}

// Maps the library's exception taxonomy onto status codes; used around any
// call that touches library code.
template <typename Fn>
dressim_status guarded(dressim_session* session, Fn&& fn) {
    try {
        const dressim_status status = fn();
        // fn sets last_error itself for non-OK statuses it returns.
        if (status == DRESSIM_OK && session) session->last_error.clear();
        return status;
    } catch (const dressim::ConfigError& e) {
        return finish(session, DRESSIM_CONFIG_ERROR, e.what());
    } catch (const dressim::CapacityError& e) {
        return finish(session, DRESSIM_CAPACITY_ERROR, e.what());
    } catch (const std::exception& e) {
        return finish(session, DRESSIM_INTERNAL_ERROR, e.what());
    } catch (...) {
        return finish(session, DRESSIM_INTERNAL_ERROR, "unknown error");
    }
}

dressim_status create_common(std::string text, dressim_session** out) {
    auto* session = new (std::nothrow) dressim_session;
    if (!session) return DRESSIM_INTERNAL_ERROR;
    *out = session;
    session->config_text = std::move(text);
    const dressim_status status = guarded(session, [&] {
        session->cfg = dressim::parse_config_text(session->config_text);
        return DRESSIM_OK;
    });
    session->parse_status = status;
    session->parse_error = session->last_error;
    return status;
}

} // namespace

extern "C" {

dressim_status dressim_session_create(const char* config_path, dressim_session** out) {
    if (!out) return DRESSIM_CONFIG_ERROR;
    *out = nullptr;
    if (!config_path) return DRESSIM_CONFIG_ERROR;
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        auto* session = new (std::nothrow) dressim_session;
        if (!session) return DRESSIM_INTERNAL_ERROR;
        *out = session;
        session->parse_status = DRESSIM_CONFIG_ERROR;
        session->parse_error = std::string("cannot open config file: ") + config_path;
        return finish(session, DRESSIM_CONFIG_ERROR, session->parse_error);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return create_common(buffer.str(), out);
}

dressim_status dressim_session_create_from_string(const char* config_json,
                                                  dressim_session** out) {
    if (!out) return DRESSIM_CONFIG_ERROR;
    *out = nullptr;
    if (!config_json) return DRESSIM_CONFIG_ERROR;
    return create_common(config_json, out);
}

void dressim_session_destroy(dressim_session* session) { delete session; }

dressim_status dressim_session_set_seed(dressim_session* session, uint64_t seed) {
    if (!session) return DRESSIM_CONFIG_ERROR;
    if (!session->cfg) return finish(session, session->parse_status, session->parse_error);
    session->cfg->master_seed = seed;
    return finish(session, DRESSIM_OK, "");
}

dressim_status dressim_session_set_threads(dressim_session* session, int threads) {
    if (!session) return DRESSIM_CONFIG_ERROR;
    if (threads < 0)
        return finish(session, DRESSIM_CONFIG_ERROR, "threads: must be nonnegative");
    session->threads = threads;
    return finish(session, DRESSIM_OK, "");
}

dressim_status dressim_session_set_output_dir(dressim_session* session, const char* path) {
    if (!session) return DRESSIM_CONFIG_ERROR;
    if (!path || !*path)
        return finish(session, DRESSIM_CONFIG_ERROR, "output_dir: must be nonempty");
    if (!session->cfg) return finish(session, session->parse_status, session->parse_error);
    session->cfg->output_dir = path;
    return finish(session, DRESSIM_OK, "");
}

dressim_status dressim_session_set_task(dressim_session* session, const char* task) {
    if (!session) return DRESSIM_CONFIG_ERROR;
    if (!session->cfg) return finish(session, session->parse_status, session->parse_error);
    const std::string name = task ? task : "";
    dressim::Task parsed;
    if (name == "spectrum") parsed = dressim::Task::spectrum;
    else if (name == "fid") parsed = dressim::Task::fid;
    else if (name == "qpe") parsed = dressim::Task::qpe;
    else if (name == "validate") parsed = dressim::Task::validate;
    else
        return finish(session, DRESSIM_CONFIG_ERROR,
                      "task: expected spectrum, fid, qpe, or validate");
    if (parsed == dressim::Task::fid && !session->cfg->fid)
        return finish(session, DRESSIM_CONFIG_ERROR, "fid: required for the fid task");
    if (parsed == dressim::Task::qpe && !session->cfg->qpe)
        return finish(session, DRESSIM_CONFIG_ERROR, "qpe: required for the qpe task");
    session->cfg->task = parsed;
    return finish(session, DRESSIM_OK, "");
}

dressim_status dressim_session_run(dressim_session* session) {
    if (!session) return DRESSIM_CONFIG_ERROR;
    if (!session->cfg) return finish(session, session->parse_status, session->parse_error);
    return guarded(session, [&] {
        dressim::RunRequest request;
        request.cfg = *session->cfg;
        request.config_text = session->config_text;
        request.threads = session->threads;
        const int status = dressim::run_experiment(request);
        if (status != 0) {
            session->last_error = "one or more validation checks failed";
            return DRESSIM_VALIDATION_FAILED;
        }
        return DRESSIM_OK;
    });
}

const char* dressim_last_error(const dressim_session* session) {
    return session ? session->last_error.c_str() : "";
}

const char* dressim_version(void) { return dressim::kVersion; }

} // extern "C"
