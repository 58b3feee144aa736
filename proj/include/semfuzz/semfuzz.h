/*
 * semfuzz — coverage-guided fuzzing with broker-decoupled LLM mutations.
 *
 * C API of the shared library. All functions return a semfuzz_status;
 * anything other than SEMFUZZ_OK leaves a human-readable message in
 * semfuzz_last_error() (thread-local, valid until the next failing call on
 * the same thread). Handles are opaque and must be released with their
 * dedicated destroy/stop function.
 */
#ifndef SEMFUZZ_H
#define SEMFUZZ_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum semfuzz_status {
  SEMFUZZ_OK = 0,
  SEMFUZZ_ERR_INVALID_ARG = 1,     /* null pointer / bad handle */
  SEMFUZZ_ERR_CONFIG = 2,          /* bad configuration value; message names the key */
  SEMFUZZ_ERR_IO = 3,              /* filesystem or serialization failure */
  SEMFUZZ_ERR_RUNTIME = 4,         /* broker/target/template failure at run time */
  SEMFUZZ_ERR_TARGET_MISMATCH = 5, /* compare over runs of different targets */
} semfuzz_status;

/* Library version string, e.g. "0.1.0". */
const char* semfuzz_version(void);

/* Message for the most recent failure on this thread ("" when none). */
const char* semfuzz_last_error(void);

/* Frees strings returned through char** out-parameters. */
void semfuzz_string_free(char* s);

/* ---- campaign configuration -------------------------------------------- */

typedef struct semfuzz_config semfuzz_config;

semfuzz_status semfuzz_config_create(semfuzz_config** out);
void semfuzz_config_destroy(semfuzz_config* config);

/* Loads a flat `key = value` config file into the handle (later keys win). */
semfuzz_status semfuzz_config_load_file(semfuzz_config* config, const char* path);

/*
 * Sets one key. Keys are the kebab-case campaign fields: target, duration,
 * shots, seed-dir, rng-seed, broker, backend, backend-url, model,
 * request-timeout, poll-timeout, hang-budget, split-threshold, temperature,
 * mode, deterministic-time, trials, out, prompt-dir, library-info,
 * probe-totals. Unknown keys are rejected.
 */
semfuzz_status semfuzz_config_set(semfuzz_config* config, const char* key, const char* value);

/* Applies SEMFUZZ_BROKER_ADDR / SEMFUZZ_BACKEND_URL / SEMFUZZ_MODEL. */
semfuzz_status semfuzz_config_apply_env(semfuzz_config* config);

/* ---- campaign ------------------------------------------------------------ */

/*
 * Runs the configured campaign (spawning the in-process broker and mutation
 * service in all-in-one mode). Blocks until the duration elapses. On success
 * *out_summary_json (optional) receives a JSON summary of the run.
 */
semfuzz_status semfuzz_campaign_run(const semfuzz_config* config, char** out_summary_json);

/* ---- hermetic broker server ---------------------------------------------- */

typedef struct semfuzz_broker_server semfuzz_broker_server;

/* Starts the mini RESP server on host:port (port 0 = ephemeral). */
semfuzz_status semfuzz_broker_server_start(const char* host, uint16_t port,
                                           semfuzz_broker_server** out);
/* Actual bound port. */
uint16_t semfuzz_broker_server_port(const semfuzz_broker_server* server);
/* Stops the server and frees the handle. */
semfuzz_status semfuzz_broker_server_stop(semfuzz_broker_server* server);

/* ---- standalone mutation service ----------------------------------------- */

typedef struct semfuzz_service semfuzz_service;

/*
 * Starts a mutation-service instance against the configured broker endpoint
 * (config keys: broker, backend, shots, target, split-threshold, prompt-dir,
 * out, library-info). Runs until stopped.
 */
semfuzz_status semfuzz_service_start(const semfuzz_config* config, semfuzz_service** out);
/* Number of consumed messages so far. */
uint64_t semfuzz_service_processed(const semfuzz_service* service);
/* Stops the service loop and frees the handle. */
semfuzz_status semfuzz_service_stop(semfuzz_service* service);

/* ---- analytics ------------------------------------------------------------ */

/* Per-(benchmark, shot) SCR/RDR/FMR/HCER summaries of a JSONL query log. */
semfuzz_status semfuzz_analyze_logs(const char* jsonl_path, char** out_json);

/* CIP comparison of two run directories (run_b is the baseline). */
semfuzz_status semfuzz_compare_runs(const char* run_a_dir, const char* run_b_dir,
                                    char** out_json);

/*
 * Renders report.json / report.md / timeline.csv for a stored run into
 * out_dir; baseline_dir may be NULL or "" for no CIP columns.
 */
semfuzz_status semfuzz_render_report(const char* run_dir, const char* baseline_dir,
                                     const char* out_dir);

/* JSON list of builtin targets with their declared probe inventories. */
semfuzz_status semfuzz_targets_json(char** out_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SEMFUZZ_H */
