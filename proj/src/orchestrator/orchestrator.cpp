#include "orchestrator/orchestrator.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "broker/resp_client.hpp"
#include "core/errors.hpp"
#include "harness/target.hpp"
#include "metrics/report.hpp"

namespace semfuzz::orchestrator {

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("library-info: cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::unique_ptr<broker::Broker> connect_broker(const BrokerEndpoint& endpoint) {
  switch (endpoint.kind) {
    case BrokerEndpoint::Kind::None:
      return nullptr;
    case BrokerEndpoint::Kind::InProcess:
      return std::make_unique<broker::InProcBroker>();
    case BrokerEndpoint::Kind::Remote:
      return std::make_unique<broker::RespClient>(endpoint.host, endpoint.port);
  }
  return nullptr;
}

nlohmann::ordered_json coverage_json(const std::map<ProbeClass, double>& coverage) {
  auto obj = nlohmann::ordered_json::object();
  for (const auto& [cls, pct] : coverage) obj[probe_class_name(cls)] = pct;
  return obj;
}

engine::CampaignResult single_run(const CampaignConfig& config,
                                  const std::filesystem::path& out_dir) {
  auto target = harness::make_target(config.target, config.probe_totals);

  std::unique_ptr<Clock> clock;
  if (config.deterministic_time) clock = std::make_unique<SimClock>();
  else clock = std::make_unique<WallClock>();

  std::unique_ptr<broker::Broker> engine_broker = connect_broker(config.broker);
  if (engine_broker && !config.library_info.empty()) {
    const std::string info = read_text(config.library_info);
    engine_broker->context_set(kContextLibraryInfo, Bytes(info.begin(), info.end()));
  }

  engine::CampaignHooks hooks;
  hooks.broker = engine_broker.get();

  std::filesystem::create_directories(out_dir);
  const auto log_path = out_dir / "log.jsonl";

  std::unique_ptr<JsonlLogSink> sink;
  std::unique_ptr<service::MutationService> lockstep_service;
  std::unique_ptr<service::ServiceRunner> service_runner;

  const bool run_service = engine_broker != nullptr && config.mode == "all-in-one";
  if (run_service) {
    sink = std::make_unique<JsonlLogSink>(log_path);
    service::ServiceConfig service_config;
    service_config.benchmark = target->name();
    service_config.shot = config.shots;
    service_config.split_threshold = config.split_threshold;
    service_config.prompt_dir = config.prompt_dir;
    service_config.pop_timeout = std::chrono::milliseconds(20);

    BackendDescriptor backend = config.backend;
    backend.temperature = config.temperature;

    if (config.deterministic_time) {
      // Deterministic runs drive the service in lockstep with the fuzz loop.
      lockstep_service = std::make_unique<service::MutationService>(
          *engine_broker, service_config, backend, *sink);
      hooks.lockstep_step = [&service = *lockstep_service] {
        service.step_once(std::chrono::milliseconds(0));
      };
    } else {
      service_runner = std::make_unique<service::ServiceRunner>(*engine_broker, service_config,
                                                                backend, *sink);
    }
  }

  engine::CampaignResult result = engine::run_campaign(config, *target, *clock, hooks);

  if (service_runner) service_runner->stop();

  engine::write_campaign_outputs(result, out_dir);

  std::vector<metrics::MetricsSummary> summaries;
  std::size_t skipped = 0;
  if (std::filesystem::exists(log_path)) {
    summaries = metrics::summarize_log(log_path, &skipped);
    for (metrics::MetricsSummary& s : summaries) s.coverage = result.coverage_final;
  }
  metrics::render_report(result, summaries, out_dir);
  return result;
}

}  // namespace

void apply_env_overrides(CampaignConfig& config) {
  if (const char* addr = std::getenv("SEMFUZZ_BROKER_ADDR"); addr && *addr) {
    config_set(config, "broker", addr);
  }
  if (const char* url = std::getenv("SEMFUZZ_BACKEND_URL"); url && *url) {
    config_set(config, "backend-url", url);
  }
  if (const char* model = std::getenv("SEMFUZZ_MODEL"); model && *model) {
    config_set(config, "model", model);
  }
}

std::string run(const CampaignConfig& config) {
  config_validate(config);

  nlohmann::ordered_json summary;
  if (config.trials <= 1) {
    const engine::CampaignResult result = single_run(config, config.out_dir);
    summary["out_dir"] = config.out_dir.string();
    summary["target"] = result.target;
    summary["exec_count"] = result.exec_count;
    summary["llm_derived_execs"] = result.llm_derived_execs;
    summary["corpus_size"] = result.corpus.size();
    summary["crash_count"] = result.crashes.size();
    summary["hang_count"] = result.hangs.size();
    summary["coverage_final"] = coverage_json(result.coverage_final);
    return summary.dump(2);
  }

  // Independent trials with derived seeds rng_seed + i.
  auto runs = nlohmann::ordered_json::array();
  std::map<ProbeClass, double> coverage_sum;
  std::uint64_t crashes = 0;
  for (int i = 0; i < config.trials; ++i) {
    CampaignConfig trial_config = config;
    trial_config.rng_seed = config.rng_seed + static_cast<std::uint64_t>(i);
    trial_config.trials = 1;
    char tag[32];
    std::snprintf(tag, sizeof(tag), "trial-%03d", i);
    trial_config.out_dir = config.out_dir / tag;
    const engine::CampaignResult result = single_run(trial_config, trial_config.out_dir);
    nlohmann::ordered_json run_json;
    run_json["out_dir"] = trial_config.out_dir.string();
    run_json["rng_seed"] = trial_config.rng_seed;
    run_json["exec_count"] = result.exec_count;
    run_json["crash_count"] = result.crashes.size();
    run_json["coverage_final"] = coverage_json(result.coverage_final);
    runs.push_back(std::move(run_json));
    for (const auto& [cls, pct] : result.coverage_final) coverage_sum[cls] += pct;
    crashes += result.crashes.size();
  }
  std::map<ProbeClass, double> coverage_mean;
  for (auto& [cls, sum] : coverage_sum) coverage_mean[cls] = sum / config.trials;

  summary["out_dir"] = config.out_dir.string();
  summary["trials"] = config.trials;
  summary["runs"] = std::move(runs);
  summary["mean_coverage_final"] = coverage_json(coverage_mean);
  summary["total_crashes"] = crashes;

  std::ofstream aggregate(config.out_dir / "aggregate.json", std::ios::trunc);
  aggregate << summary.dump(2) << '\n';
  if (!aggregate) throw IoError("cannot write aggregate.json");
  return summary.dump(2);
}

std::string analyze(const std::filesystem::path& jsonl_path) {
  std::size_t skipped = 0;
  const auto summaries = metrics::summarize_log(jsonl_path, &skipped);
  return metrics::summaries_to_json(summaries, skipped);
}

std::string compare(const std::filesystem::path& run_a_dir,
                    const std::filesystem::path& run_b_dir) {
  const auto a = engine::load_campaign_result(run_a_dir / "campaign.json");
  const auto b = engine::load_campaign_result(run_b_dir / "campaign.json");
  return metrics::compare_runs(a, b);
}

void report(const std::filesystem::path& run_dir, const std::filesystem::path& baseline_dir,
            const std::filesystem::path& out_dir) {
  const auto result = engine::load_campaign_result(run_dir / "campaign.json");
  std::vector<metrics::MetricsSummary> summaries;
  const auto log_path = run_dir / "log.jsonl";
  if (std::filesystem::exists(log_path)) {
    summaries = metrics::summarize_log(log_path);
    for (metrics::MetricsSummary& s : summaries) s.coverage = result.coverage_final;
  }
  if (!baseline_dir.empty()) {
    const auto baseline = engine::load_campaign_result(baseline_dir / "campaign.json");
    for (metrics::MetricsSummary& s : summaries) {
      std::map<ProbeClass, double> cip_map;
      for (const auto& [cls, pct] : result.coverage_final) {
        const auto it = baseline.coverage_final.find(cls);
        if (it != baseline.coverage_final.end()) cip_map[cls] = metrics::cip(pct, it->second);
      }
      s.cip = std::move(cip_map);
    }
    metrics::render_report(result, summaries, out_dir, &baseline);
  } else {
    metrics::render_report(result, summaries, out_dir);
  }
}

std::string targets_json() {
  auto arr = nlohmann::ordered_json::array();
  for (const std::string& name : harness::builtin_target_names()) {
    const auto target = harness::make_target(name);
    nlohmann::ordered_json j;
    j["name"] = target->name();
    j["kind"] = target->kind() == harness::TargetAdapter::Kind::InProcess ? "in-process"
                                                                          : "external-command";
    auto totals = nlohmann::ordered_json::object();
    for (const auto& [cls, count] : target->probe_totals()) {
      totals[probe_class_name(cls)] = count;
    }
    j["probe_totals"] = std::move(totals);
    j["dictionary_tokens"] = target->dictionary().size();
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

MutatorDaemon::MutatorDaemon(const CampaignConfig& config) {
  config_validate(config);
  if (config.broker.kind == BrokerEndpoint::Kind::None) {
    throw ConfigError("broker: serve-mutator needs a broker endpoint (inproc is only "
                      "meaningful inside run --mode all-in-one)");
  }
  broker_ = connect_broker(config.broker);
  if (!config.library_info.empty()) {
    const std::string info = read_text(config.library_info);
    broker_->context_set(kContextLibraryInfo, Bytes(info.begin(), info.end()));
  }
  std::filesystem::create_directories(config.out_dir);
  sink_ = std::make_unique<JsonlLogSink>(config.out_dir / "log.jsonl");

  service::ServiceConfig service_config;
  service_config.benchmark = config.target;
  service_config.shot = config.shots;
  service_config.split_threshold = config.split_threshold;
  service_config.prompt_dir = config.prompt_dir;
  BackendDescriptor backend = config.backend;
  backend.temperature = config.temperature;
  runner_ = std::make_unique<service::ServiceRunner>(*broker_, service_config, backend, *sink_);
}

MutatorDaemon::~MutatorDaemon() { stop(); }

void MutatorDaemon::stop() {
  if (runner_) runner_->stop();
}

std::uint64_t MutatorDaemon::processed() const {
  return runner_ ? runner_->service().processed() : 0;
}

}  // namespace semfuzz::orchestrator
