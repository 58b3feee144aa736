#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "broker/broker.hpp"
#include "core/clock.hpp"
#include "core/config.hpp"
#include "core/coverage.hpp"
#include "core/types.hpp"
#include "harness/target.hpp"

namespace semfuzz::engine {

enum class Classification : std::uint8_t { Crash, Hang, Interesting, Boring };

const char* classification_name(Classification c);

// Crash/Hang win over coverage; Interesting when the run adds an unseen edge
// bucket or (class, id) probe. The map absorbs the run's coverage regardless
// of the verdict.
Classification classify_execution(const ExecutionOutcome& outcome, CoverageMap& map);

inline constexpr std::size_t kPublishBackpressureBound = 1024;

enum class PublishResult : std::uint8_t { Acknowledged, Dropped };

// Fire-and-forget enqueue on C2P; dropped (and counted by the caller) once the
// queue depth reaches the backpressure bound. Throws BrokerError when the
// broker is unreachable.
PublishResult publish_to_llm(broker::Broker& broker, const Bytes& payload);

// Non-blocking-ish poll of P2C: a payload if one arrives within poll_timeout.
// Throws BrokerError when the broker is unreachable.
std::optional<Bytes> try_consume_llm(broker::Broker& broker,
                                     std::chrono::milliseconds poll_timeout);

struct TimelinePoint {
  std::uint64_t t_ms;
  ProbeClass cls;
  double percent;

  bool operator==(const TimelinePoint&) const = default;
};

struct CampaignResult {
  // Config echo (enough to compare and replay a run)
  std::string target;
  std::uint64_t rng_seed = 0;
  std::uint64_t duration_ms = 0;
  int shots = 0;
  std::string backend;
  bool deterministic_time = false;
  std::uint64_t hang_budget_ms = 100;

  std::map<ProbeClass, double> coverage_final;
  std::vector<TimelinePoint> coverage_timeline;
  std::vector<TestCase> seeds;
  std::vector<TestCase> corpus;   // interesting mutants, discovery order
  std::vector<TestCase> crashes;  // novel crashes
  std::vector<TestCase> hangs;    // novel hangs
  std::uint64_t exec_count = 0;
  std::uint64_t llm_derived_execs = 0;
  std::uint64_t published = 0;
  std::uint64_t publish_dropped = 0;
  std::uint64_t broker_failures = 0;
  CoverageMap final_map;
};

// Injection points for the orchestrator and tests: the broker connection (if
// any) and an optional lockstep hook that runs one mutation-service step per
// iteration under deterministic time.
struct CampaignHooks {
  broker::Broker* broker = nullptr;
  std::function<void()> lockstep_step;
};

/// Runs the fuzzing loop until the configured duration elapses. Throws
/// ConfigError for unusable inputs before the loop starts; per-iteration
/// failures never abort the loop.
CampaignResult run_campaign(const CampaignConfig& config, harness::TargetAdapter& target,
                            Clock& clock, const CampaignHooks& hooks);

/// Re-executes seeds then corpus entries in discovery order against a fresh
/// map, checking each corpus entry is coverage-novel at insertion time and
/// each stored crash/hang reproduces its status. Returns an empty string on
/// success, otherwise a description of the first violation.
std::string replay_violations(const CampaignResult& result, harness::TargetAdapter& target,
                              std::chrono::milliseconds hang_budget);

// --- campaign output files -------------------------------------------------

/// Writes out/queue/, out/crashes/, out/hangs/ and out/campaign.json.
void write_campaign_outputs(const CampaignResult& result, const std::filesystem::path& out_dir);

std::string campaign_result_to_json(const CampaignResult& result);
CampaignResult campaign_result_from_json(const std::string& text);
CampaignResult load_campaign_result(const std::filesystem::path& json_path);

}  // namespace semfuzz::engine
