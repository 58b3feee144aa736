#include "semfuzz/semfuzz.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "broker/resp_server.hpp"
#include "core/config.hpp"
#include "core/errors.hpp"
#include "orchestrator/orchestrator.hpp"

namespace {

thread_local std::string g_last_error;

semfuzz_status status_of(const semfuzz::Error& e) {
  using Kind = semfuzz::Error::Kind;
  switch (e.kind()) {
    case Kind::Config:
      return SEMFUZZ_ERR_CONFIG;
    case Kind::Io:
      return SEMFUZZ_ERR_IO;
    case Kind::TargetMismatch:
      return SEMFUZZ_ERR_TARGET_MISMATCH;
    case Kind::Range:
    case Kind::EmptyInput:
      return SEMFUZZ_ERR_CONFIG;
    case Kind::Template:
    case Kind::Protocol:
    case Kind::Broker:
    case Kind::Target:
      return SEMFUZZ_ERR_RUNTIME;
  }
  return SEMFUZZ_ERR_RUNTIME;
}

semfuzz_status fail(semfuzz_status status, const char* message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
semfuzz_status guarded(Fn&& fn) {
  try {
    fn();
    return SEMFUZZ_OK;
  } catch (const semfuzz::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SEMFUZZ_ERR_RUNTIME;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct semfuzz_config {
  semfuzz::CampaignConfig value;
};

struct semfuzz_broker_server {
  semfuzz::broker::MiniRespServer server;
  semfuzz_broker_server(const std::string& host, uint16_t port) : server(host, port) {}
};

struct semfuzz_service {
  semfuzz::orchestrator::MutatorDaemon daemon;
  explicit semfuzz_service(const semfuzz::CampaignConfig& config) : daemon(config) {}
};

extern "C" {

const char* semfuzz_version(void) { return "0.1.0"; }

const char* semfuzz_last_error(void) { return g_last_error.c_str(); }

void semfuzz_string_free(char* s) { std::free(s); }

semfuzz_status semfuzz_config_create(semfuzz_config** out) {
  if (!out) return fail(SEMFUZZ_ERR_INVALID_ARG, "config_create: out is null");
  *out = new semfuzz_config{};
  return SEMFUZZ_OK;
}

void semfuzz_config_destroy(semfuzz_config* config) { delete config; }

semfuzz_status semfuzz_config_load_file(semfuzz_config* config, const char* path) {
  if (!config || !path) return fail(SEMFUZZ_ERR_INVALID_ARG, "config_load_file: null argument");
  return guarded([&] { semfuzz::config_load_file(config->value, path); });
}

semfuzz_status semfuzz_config_set(semfuzz_config* config, const char* key, const char* value) {
  if (!config || !key || !value) {
    return fail(SEMFUZZ_ERR_INVALID_ARG, "config_set: null argument");
  }
  return guarded([&] { semfuzz::config_set(config->value, key, value); });
}

semfuzz_status semfuzz_config_apply_env(semfuzz_config* config) {
  if (!config) return fail(SEMFUZZ_ERR_INVALID_ARG, "config_apply_env: config is null");
  return guarded([&] { semfuzz::orchestrator::apply_env_overrides(config->value); });
}

semfuzz_status semfuzz_campaign_run(const semfuzz_config* config, char** out_summary_json) {
  if (!config) return fail(SEMFUZZ_ERR_INVALID_ARG, "campaign_run: config is null");
  return guarded([&] {
    const std::string summary = semfuzz::orchestrator::run(config->value);
    if (out_summary_json) *out_summary_json = dup_string(summary);
  });
}

semfuzz_status semfuzz_broker_server_start(const char* host, uint16_t port,
                                           semfuzz_broker_server** out) {
  if (!host || !out) return fail(SEMFUZZ_ERR_INVALID_ARG, "broker_server_start: null argument");
  return guarded([&] { *out = new semfuzz_broker_server(host, port); });
}

uint16_t semfuzz_broker_server_port(const semfuzz_broker_server* server) {
  return server ? server->server.port() : 0;
}

semfuzz_status semfuzz_broker_server_stop(semfuzz_broker_server* server) {
  if (!server) return fail(SEMFUZZ_ERR_INVALID_ARG, "broker_server_stop: server is null");
  return guarded([&] {
    server->server.stop();
    delete server;
  });
}

semfuzz_status semfuzz_service_start(const semfuzz_config* config, semfuzz_service** out) {
  if (!config || !out) return fail(SEMFUZZ_ERR_INVALID_ARG, "service_start: null argument");
  return guarded([&] { *out = new semfuzz_service(config->value); });
}

uint64_t semfuzz_service_processed(const semfuzz_service* service) {
  return service ? service->daemon.processed() : 0;
}

semfuzz_status semfuzz_service_stop(semfuzz_service* service) {
  if (!service) return fail(SEMFUZZ_ERR_INVALID_ARG, "service_stop: service is null");
  return guarded([&] {
    service->daemon.stop();
    delete service;
  });
}

semfuzz_status semfuzz_analyze_logs(const char* jsonl_path, char** out_json) {
  if (!jsonl_path || !out_json) {
    return fail(SEMFUZZ_ERR_INVALID_ARG, "analyze_logs: null argument");
  }
  return guarded([&] { *out_json = dup_string(semfuzz::orchestrator::analyze(jsonl_path)); });
}

semfuzz_status semfuzz_compare_runs(const char* run_a_dir, const char* run_b_dir,
                                    char** out_json) {
  if (!run_a_dir || !run_b_dir || !out_json) {
    return fail(SEMFUZZ_ERR_INVALID_ARG, "compare_runs: null argument");
  }
  return guarded(
      [&] { *out_json = dup_string(semfuzz::orchestrator::compare(run_a_dir, run_b_dir)); });
}

semfuzz_status semfuzz_render_report(const char* run_dir, const char* baseline_dir,
                                     const char* out_dir) {
  if (!run_dir || !out_dir) return fail(SEMFUZZ_ERR_INVALID_ARG, "render_report: null argument");
  return guarded([&] {
    semfuzz::orchestrator::report(run_dir, baseline_dir ? baseline_dir : "", out_dir);
  });
}

semfuzz_status semfuzz_targets_json(char** out_json) {
  if (!out_json) return fail(SEMFUZZ_ERR_INVALID_ARG, "targets_json: out is null");
  return guarded([&] { *out_json = dup_string(semfuzz::orchestrator::targets_json()); });
}

}  // extern "C"
