// semfuzz CLI: campaign runner, mutation-service runner, hermetic broker,
// log analyzer and report/compare tooling. Links only the public C API.

#include <semfuzz/semfuzz.h>

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

namespace {

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted.store(true); }

int exit_code_for(semfuzz_status status) {
  switch (status) {
    case SEMFUZZ_OK:
      return 0;
    case SEMFUZZ_ERR_CONFIG:
    case SEMFUZZ_ERR_INVALID_ARG:
    case SEMFUZZ_ERR_TARGET_MISMATCH:
      return 2;
    default:
      return 1;
  }
}

int report_failure(semfuzz_status status) {
  std::cerr << "semfuzz: " << semfuzz_last_error() << "\n";
  return exit_code_for(status);
}

// RAII over the C config handle.
struct ConfigHandle {
  semfuzz_config* ptr = nullptr;
  ConfigHandle() { semfuzz_config_create(&ptr); }
  ~ConfigHandle() { semfuzz_config_destroy(ptr); }
  ConfigHandle(const ConfigHandle&) = delete;
  ConfigHandle& operator=(const ConfigHandle&) = delete;
};

struct FlagSpec {
  std::string key;    // config key
  std::string flag;   // CLI flag name
  std::string help;
};

const std::vector<FlagSpec> kCampaignFlags = {
    {"target", "--target", "target program (chunkfmt, minijson, or cmd:<command>)"},
    {"duration", "--duration", "campaign budget, e.g. 60s, 5m, 1500ms"},
    {"shots", "--shots", "prompt shots: 0, 1 or 3"},
    {"seed-dir", "--seed-dir", "directory holding the seed corpus"},
    {"rng-seed", "--rng-seed", "64-bit RNG seed"},
    {"broker", "--broker", "broker endpoint: none, inproc, or host:port"},
    {"backend", "--backend",
     "LLM backend: mock-identity, mock-mutator[:seed=N], mock-chaos[:t=..,m=..,o=..,d=..], "
     "or an http:// chat endpoint"},
    {"backend-url", "--backend-url", "HTTP chat endpoint URL"},
    {"model", "--model", "model name for the HTTP backend"},
    {"request-timeout", "--request-timeout", "LLM request timeout"},
    {"poll-timeout", "--poll-timeout", "P2C poll timeout per iteration"},
    {"hang-budget", "--hang-budget", "per-execution hang budget"},
    {"split-threshold", "--split-threshold", "head size sent to the model (bytes)"},
    {"temperature", "--temperature", "sampling temperature"},
    {"mode", "--mode", "all-in-one (spawn service locally) or client"},
    {"trials", "--trials", "number of independent campaigns with derived seeds"},
    {"out", "--out", "output directory"},
    {"prompt-dir", "--prompt-dir", "prompt template directory"},
    {"library-info", "--library-info", "text file stored as library_info context"},
    {"probe-totals", "--probe-totals", "probe totals for cmd: targets, e.g. function=3,branch=8"},
};

// Collects flag values as strings; they are pushed through semfuzz_config_set
// so the library owns all validation and error wording.
void add_campaign_flags(CLI::App* cmd, std::vector<std::pair<std::string, std::string>>* values,
                        std::string* config_file, bool* deterministic) {
  cmd->add_option("--config", *config_file, "flat key = value config file");
  for (const FlagSpec& spec : kCampaignFlags) {
    cmd->add_option_function<std::string>(
        spec.flag,
        [values, key = spec.key](const std::string& v) { values->emplace_back(key, v); },
        spec.help);
  }
  cmd->add_flag("--deterministic-time", *deterministic,
                "simulated clock advancing per execution (reproducible outputs)");
}

semfuzz_status build_config(ConfigHandle& config, const std::string& config_file,
                            const std::vector<std::pair<std::string, std::string>>& values,
                            bool deterministic) {
  if (!config_file.empty()) {
    if (auto rc = semfuzz_config_load_file(config.ptr, config_file.c_str()); rc != SEMFUZZ_OK) {
      return rc;
    }
  }
  if (auto rc = semfuzz_config_apply_env(config.ptr); rc != SEMFUZZ_OK) return rc;
  for (const auto& [key, value] : values) {
    if (auto rc = semfuzz_config_set(config.ptr, key.c_str(), value.c_str());
        rc != SEMFUZZ_OK) {
      return rc;
    }
  }
  if (deterministic) {
    if (auto rc = semfuzz_config_set(config.ptr, "deterministic-time", "true");
        rc != SEMFUZZ_OK) {
      return rc;
    }
  }
  return SEMFUZZ_OK;
}

int cmd_run(const std::string& config_file,
            const std::vector<std::pair<std::string, std::string>>& values, bool deterministic) {
  ConfigHandle config;
  if (auto rc = build_config(config, config_file, values, deterministic); rc != SEMFUZZ_OK) {
    return report_failure(rc);
  }
  char* summary = nullptr;
  const auto rc = semfuzz_campaign_run(config.ptr, &summary);
  if (rc != SEMFUZZ_OK) return report_failure(rc);
  std::cout << summary << "\n";
  semfuzz_string_free(summary);
  return 0;
}

int cmd_serve_mutator(const std::string& config_file,
                      const std::vector<std::pair<std::string, std::string>>& values,
                      bool deterministic, long run_for_ms) {
  ConfigHandle config;
  if (auto rc = build_config(config, config_file, values, deterministic); rc != SEMFUZZ_OK) {
    return report_failure(rc);
  }
  semfuzz_service* service = nullptr;
  if (auto rc = semfuzz_service_start(config.ptr, &service); rc != SEMFUZZ_OK) {
    return report_failure(rc);
  }
  std::cerr << "semfuzz: mutation service running (Ctrl-C to stop)\n";
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(run_for_ms);
  while (!g_interrupted.load()) {
    if (run_for_ms > 0 && std::chrono::steady_clock::now() >= deadline) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  const std::uint64_t processed = semfuzz_service_processed(service);
  if (auto rc = semfuzz_service_stop(service); rc != SEMFUZZ_OK) return report_failure(rc);
  std::cerr << "semfuzz: mutation service stopped after " << processed << " messages\n";
  return 0;
}

int cmd_broker(const std::string& bind, long run_for_ms) {
  std::string host = "127.0.0.1";
  std::uint16_t port = 6399;
  if (const char* env = std::getenv("SEMFUZZ_BROKER_ADDR"); env && *env && bind.empty()) {
    const std::string addr(env);
    const auto colon = addr.rfind(':');
    if (colon != std::string::npos) {
      host = addr.substr(0, colon);
      port = static_cast<std::uint16_t>(std::stoi(addr.substr(colon + 1)));
    }
  } else if (!bind.empty()) {
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos) {
      std::cerr << "semfuzz: --bind expects host:port\n";
      return 2;
    }
    host = bind.substr(0, colon);
    port = static_cast<std::uint16_t>(std::stoi(bind.substr(colon + 1)));
  }
  semfuzz_broker_server* server = nullptr;
  if (auto rc = semfuzz_broker_server_start(host.c_str(), port, &server); rc != SEMFUZZ_OK) {
    return report_failure(rc);
  }
  std::cout << "semfuzz: broker listening on " << host << ":" << semfuzz_broker_server_port(server)
            << "\n";
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(run_for_ms);
  while (!g_interrupted.load()) {
    if (run_for_ms > 0 && std::chrono::steady_clock::now() >= deadline) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  if (auto rc = semfuzz_broker_server_stop(server); rc != SEMFUZZ_OK) return report_failure(rc);
  return 0;
}

int print_or_write(const char* json, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << json << "\n";
    return 0;
  }
  std::ofstream out(out_path, std::ios::trunc);
  out << json << "\n";
  if (!out) {
    std::cerr << "semfuzz: cannot write " << out_path << "\n";
    return 1;
  }
  std::cout << "semfuzz: wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  CLI::App app{"coverage-guided fuzzer with broker-decoupled LLM mutations"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "run a fuzzing campaign");
  std::string run_config_file;
  std::vector<std::pair<std::string, std::string>> run_values;
  bool run_deterministic = false;
  add_campaign_flags(run_cmd, &run_values, &run_config_file, &run_deterministic);

  // serve-mutator
  auto* serve_cmd = app.add_subcommand("serve-mutator", "run the mutation service standalone");
  std::string serve_config_file;
  std::vector<std::pair<std::string, std::string>> serve_values;
  bool serve_deterministic = false;
  long serve_run_for_ms = 0;
  add_campaign_flags(serve_cmd, &serve_values, &serve_config_file, &serve_deterministic);
  serve_cmd->add_option("--run-for-ms", serve_run_for_ms,
                        "stop after this many milliseconds (0 = until signalled)");

  // broker
  auto* broker_cmd = app.add_subcommand("broker", "run the hermetic RESP broker");
  std::string broker_bind;
  long broker_run_for_ms = 0;
  broker_cmd->add_option("--bind", broker_bind, "host:port (default 127.0.0.1:6399)");
  broker_cmd->add_option("--run-for-ms", broker_run_for_ms,
                         "stop after this many milliseconds (0 = until signalled)");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "metrics from a JSONL query log");
  std::string analyze_log;
  std::string analyze_out;
  analyze_cmd->add_option("--log", analyze_log, "path to log.jsonl")->required();
  analyze_cmd->add_option("--out", analyze_out, "write JSON here instead of stdout");

  // report
  auto* report_cmd = app.add_subcommand("report", "render report files for a stored run");
  std::string report_run, report_baseline, report_out;
  report_cmd->add_option("--run", report_run, "run directory (holds campaign.json)")->required();
  report_cmd->add_option("--baseline", report_baseline, "baseline run directory for CIP");
  report_cmd->add_option("--out", report_out, "output directory (default: the run directory)");

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "CIP between two runs (second is baseline)");
  std::string compare_a, compare_b, compare_out;
  compare_cmd->add_option("run_a", compare_a, "run directory")->required();
  compare_cmd->add_option("run_b", compare_b, "baseline run directory")->required();
  compare_cmd->add_option("--out", compare_out, "write JSON here as well");

  // targets
  auto* targets_cmd = app.add_subcommand("targets", "list builtin targets");

  CLI11_PARSE(app, argc, argv);

  if (run_cmd->parsed()) return cmd_run(run_config_file, run_values, run_deterministic);
  if (serve_cmd->parsed()) {
    return cmd_serve_mutator(serve_config_file, serve_values, serve_deterministic,
                             serve_run_for_ms);
  }
  if (broker_cmd->parsed()) return cmd_broker(broker_bind, broker_run_for_ms);
  if (analyze_cmd->parsed()) {
    char* json = nullptr;
    if (auto rc = semfuzz_analyze_logs(analyze_log.c_str(), &json); rc != SEMFUZZ_OK) {
      return report_failure(rc);
    }
    const int code = print_or_write(json, analyze_out);
    semfuzz_string_free(json);
    return code;
  }
  if (report_cmd->parsed()) {
    const std::string out_dir = report_out.empty() ? report_run : report_out;
    if (auto rc = semfuzz_render_report(report_run.c_str(),
                                        report_baseline.empty() ? nullptr : report_baseline.c_str(),
                                        out_dir.c_str());
        rc != SEMFUZZ_OK) {
      return report_failure(rc);
    }
    std::cout << "semfuzz: report rendered into " << out_dir << "\n";
    return 0;
  }
  if (compare_cmd->parsed()) {
    char* json = nullptr;
    if (auto rc = semfuzz_compare_runs(compare_a.c_str(), compare_b.c_str(), &json);
        rc != SEMFUZZ_OK) {
      return report_failure(rc);
    }
    std::cout << json << "\n";
    int code = 0;
    if (!compare_out.empty()) {
      std::ofstream out(compare_out, std::ios::trunc);
      out << json << "\n";
      if (!out) {
        std::cerr << "semfuzz: cannot write " << compare_out << "\n";
        code = 1;
      }
    }
    semfuzz_string_free(json);
    return code;
  }
  if (targets_cmd->parsed()) {
    char* json = nullptr;
    if (auto rc = semfuzz_targets_json(&json); rc != SEMFUZZ_OK) return report_failure(rc);
    std::cout << json << "\n";
    semfuzz_string_free(json);
    return 0;
  }
  return 2;
}
