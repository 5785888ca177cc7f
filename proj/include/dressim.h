/* dressim.h — C interface to the dressed-Hamiltonian spectral simulator.
 *
 * Usage: create a session from a config file or string, optionally override
 * seed / threads / output directory / task, then run. All functions return a
 * dressim_status; details for the last failure on a session are available via
 * dressim_last_error until the next call on that session.
 */

#ifndef DRESSIM_H
#define DRESSIM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct dressim_session dressim_session;

typedef enum dressim_status {
    DRESSIM_OK = 0,
    DRESSIM_VALIDATION_FAILED = 1, /* a validate-task check failed */
    DRESSIM_CONFIG_ERROR = 2,      /* malformed config; message names the key */
    DRESSIM_CAPACITY_ERROR = 3,    /* requested size exceeds the dense-solver cap */
    DRESSIM_INTERNAL_ERROR = 4     /* numerical contract violation or I/O failure */
} dressim_status;

/* Both constructors hand back a session whenever allocation succeeds, even if
 * the config fails to parse; the returned status reports the parse result and
 * dressim_last_error on the session carries the message. *out becomes NULL
 * only on allocation failure or NULL arguments. Destroy the session either
 * way. */
dressim_status dressim_session_create(const char* config_path, dressim_session** out);
dressim_status dressim_session_create_from_string(const char* config_json,
                                                  dressim_session** out);
void dressim_session_destroy(dressim_session* session);

dressim_status dressim_session_set_seed(dressim_session* session, uint64_t seed);
/* threads = 0 selects the hardware concurrency. */
dressim_status dressim_session_set_threads(dressim_session* session, int threads);
dressim_status dressim_session_set_output_dir(dressim_session* session, const char* path);
/* task: "spectrum", "fid", "qpe", or "validate". */
dressim_status dressim_session_set_task(dressim_session* session, const char* task);

/* Runs the selected task and writes its outputs. */
dressim_status dressim_session_run(dressim_session* session);

/* Message for the most recent failing call on this session; empty string when
 * the last call succeeded. Owned by the session. */
const char* dressim_last_error(const dressim_session* session);

const char* dressim_version(void);

#ifdef __cplusplus
}
#endif

#endif /* DRESSIM_H */
