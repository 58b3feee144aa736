#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "broker/broker.hpp"
#include "broker/resp_server.hpp"
#include "core/config.hpp"
#include "core/query_log.hpp"
#include "engine/campaign.hpp"
#include "service/mutation_service.hpp"

namespace semfuzz::orchestrator {

/// Applies SEMFUZZ_BROKER_ADDR / SEMFUZZ_BACKEND_URL / SEMFUZZ_MODEL when set.
/// Precedence: config file < environment < explicit flags.
void apply_env_overrides(CampaignConfig& config);

/// Runs the configured campaign (plus broker/mutation service in all-in-one
/// mode, and one run per trial when trials > 1). Writes corpus directories,
/// campaign.json, log.jsonl and the report files under the configured out
/// directory. Returns a short JSON summary of what happened.
std::string run(const CampaignConfig& config);

/// Per-scope metric summaries for a JSONL log, as JSON.
std::string analyze(const std::filesystem::path& jsonl_path);

/// CIP report for two run directories (each holding campaign.json); run_b is
/// the baseline.
std::string compare(const std::filesystem::path& run_a_dir,
                    const std::filesystem::path& run_b_dir);

/// Re-renders report files for a stored run, optionally against a baseline
/// run directory.
void report(const std::filesystem::path& run_dir, const std::filesystem::path& baseline_dir,
            const std::filesystem::path& out_dir);

/// JSON description of the builtin targets (name, kind, probe totals).
std::string targets_json();

// Standalone mutation service wired to a (usually remote) broker; used by the
// serve-mutator verb and the C API.
class MutatorDaemon {
public:
  explicit MutatorDaemon(const CampaignConfig& config);
  ~MutatorDaemon();

  void stop();
  std::uint64_t processed() const;

private:
  std::unique_ptr<broker::Broker> broker_;
  std::unique_ptr<JsonlLogSink> sink_;
  std::unique_ptr<service::ServiceRunner> runner_;
};

}  // namespace semfuzz::orchestrator
