#include "engine/campaign.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "engine/fuzz_queue.hpp"
#include "engine/havoc.hpp"

namespace semfuzz::engine {

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::Crash: return "crash";
    case Classification::Hang: return "hang";
    case Classification::Interesting: return "interesting";
    case Classification::Boring: return "boring";
  }
  return "boring";
}

Classification classify_execution(const ExecutionOutcome& outcome, CoverageMap& map) {
  const bool novel = map.merge(outcome);
  if (outcome.status == ExecStatus::Crash) return Classification::Crash;
  if (outcome.status == ExecStatus::Hang) return Classification::Hang;
  return novel ? Classification::Interesting : Classification::Boring;
}

PublishResult publish_to_llm(broker::Broker& broker, const Bytes& payload) {
  if (broker.queue_len(kQueueC2P) >= kPublishBackpressureBound) {
    return PublishResult::Dropped;
  }
  broker.queue_push(kQueueC2P, payload);
  return PublishResult::Acknowledged;
}

std::optional<Bytes> try_consume_llm(broker::Broker& broker,
                                     std::chrono::milliseconds poll_timeout) {
  return broker.queue_pop(kQueueP2C, poll_timeout);
}

namespace {

std::vector<std::filesystem::path> list_seed_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw ConfigError("seed-dir: not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw ConfigError("seed-dir: no seed files in " + dir.string());
  }
  return files;
}

Bytes read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>{});
}

double percent_of(const CoverageMap& map, ProbeClass cls) {
  const auto it = map.totals().find(cls);
  if (it == map.totals().end() || it->second == 0) return 0.0;
  return 100.0 * static_cast<double>(map.covered_count(cls)) / static_cast<double>(it->second);
}

class CampaignRun {
public:
  CampaignRun(const CampaignConfig& config, harness::TargetAdapter& target, Clock& clock,
              const CampaignHooks& hooks)
      : config_(config), target_(target), clock_(clock), hooks_(hooks),
        rng_(config.rng_seed), map_(target.probe_totals()) {}

  CampaignResult run() {
    result_.target = target_.name();
    result_.rng_seed = config_.rng_seed;
    result_.duration_ms = static_cast<std::uint64_t>(config_.duration.count());
    result_.shots = config_.shots;
    result_.backend = backend_descriptor_to_string(config_.backend);
    result_.deterministic_time = config_.deterministic_time;
    result_.hang_budget_ms = static_cast<std::uint64_t>(config_.hang_budget.count());

    const auto seed_files = list_seed_files(config_.seed_dir);
    if (config_.duration.count() == 0) {
      for (ProbeClass cls : kProbeClasses) {
        if (map_.totals().contains(cls)) result_.coverage_final[cls] = percent_of(map_, cls);
      }
      result_.final_map = map_;
      return std::move(result_);
    }

    for (const auto& path : seed_files) run_seed(path);

    const std::uint64_t duration_ns =
        static_cast<std::uint64_t>(config_.duration.count()) * 1'000'000ull;
    while (clock_.now_ns() < duration_ns) {
      iterate();
    }

    for (ProbeClass cls : kProbeClasses) {
      if (map_.totals().contains(cls)) result_.coverage_final[cls] = percent_of(map_, cls);
    }
    result_.final_map = map_;
    return std::move(result_);
  }

private:
  void run_seed(const std::filesystem::path& path) {
    TestCase tc;
    tc.id = next_id_++;
    tc.payload = read_file_bytes(path);
    tc.origin = Origin::Seed;
    tc.discovered_at_ns = clock_.now_ns();

    const ExecutionOutcome outcome = target_.execute(as_span(tc.payload), config_.hang_budget);
    clock_.on_execution();
    ++result_.exec_count;
    const Classification verdict = classify_execution(outcome, map_);
    update_timeline();
    if (verdict == Classification::Crash && crash_map_.merge(outcome)) {
      result_.crashes.push_back(tc);
    } else if (verdict == Classification::Hang && hang_map_.merge(outcome)) {
      result_.hangs.push_back(tc);
    }
    queue_.add(std::make_shared<const TestCase>(tc));
    result_.seeds.push_back(std::move(tc));
  }

  void iterate() {
    const auto entry = queue_.select_next(rng_);
    const Bytes mutant = mutate_builtin(as_span(entry->payload), rng_, target_.dictionary());

    if (hooks_.broker != nullptr) {
      if (broker_retry_at_ns_ <= clock_.now_ns()) {
        try {
          if (publish_to_llm(*hooks_.broker, mutant) == PublishResult::Acknowledged) {
            ++result_.published;
          } else {
            ++result_.publish_dropped;
          }
        } catch (const BrokerError& e) {
          note_broker_failure(e.what());
          ++result_.publish_dropped;
        }
      } else {
        ++result_.publish_dropped;
      }

      if (hooks_.lockstep_step) hooks_.lockstep_step();

      if (broker_retry_at_ns_ <= clock_.now_ns()) {
        std::optional<Bytes> llm_payload;
        try {
          llm_payload = try_consume_llm(*hooks_.broker, config_.poll_timeout);
        } catch (const BrokerError& e) {
          note_broker_failure(e.what());
        }
        if (llm_payload) {
          execute_candidate(std::move(*llm_payload), Origin::Llm, entry->id);
        }
      }
    }

    execute_candidate(mutant, Origin::Builtin, entry->id);
  }

  void execute_candidate(Bytes payload, Origin origin, std::uint64_t parent_id) {
    const ExecutionOutcome outcome = target_.execute(as_span(payload), config_.hang_budget);
    clock_.on_execution();
    ++result_.exec_count;
    if (origin == Origin::Llm) ++result_.llm_derived_execs;

    const Classification verdict = classify_execution(outcome, map_);
    update_timeline();
    switch (verdict) {
      case Classification::Interesting: {
        TestCase tc;
        tc.id = next_id_++;
        tc.payload = std::move(payload);
        tc.origin = origin;
        tc.parent_id = parent_id;
        tc.discovered_at_ns = clock_.now_ns();
        queue_.add(std::make_shared<const TestCase>(tc));
        queue_.grant_coverage_bonus(parent_id);
        result_.corpus.push_back(std::move(tc));
        break;
      }
      case Classification::Crash:
        if (crash_map_.merge(outcome)) {
          store_triaged(std::move(payload), origin, parent_id, result_.crashes);
        }
        break;
      case Classification::Hang:
        if (hang_map_.merge(outcome)) {
          store_triaged(std::move(payload), origin, parent_id, result_.hangs);
        }
        break;
      case Classification::Boring:
        break;
    }
  }

  void store_triaged(Bytes payload, Origin origin, std::uint64_t parent_id,
                     std::vector<TestCase>& bucket) {
    TestCase tc;
    tc.id = next_id_++;
    tc.payload = std::move(payload);
    tc.origin = origin;
    tc.parent_id = parent_id;
    tc.discovered_at_ns = clock_.now_ns();
    bucket.push_back(std::move(tc));
  }

  void update_timeline() {
    for (ProbeClass cls : kProbeClasses) {
      if (!map_.totals().contains(cls)) continue;
      const std::size_t covered = map_.covered_count(cls);
      auto [it, inserted] = last_covered_.try_emplace(cls, 0);
      if (!inserted && it->second == covered) continue;
      if (inserted && covered == 0) continue;
      it->second = covered;
      result_.coverage_timeline.push_back({clock_.now_ms(), cls, percent_of(map_, cls)});
    }
  }

  void note_broker_failure(const std::string& what) {
    ++result_.broker_failures;
    // Back off for a second of campaign time before retrying the broker.
    broker_retry_at_ns_ = clock_.now_ns() + 1'000'000'000ull;
    if (result_.broker_failures == 1) {
      std::cerr << "semfuzz: broker unavailable, continuing with builtin mutations only ("
                << what << ")\n";
    }
  }

  const CampaignConfig& config_;
  harness::TargetAdapter& target_;
  Clock& clock_;
  const CampaignHooks& hooks_;

  Rng rng_;
  CoverageMap map_;
  CoverageMap crash_map_;
  CoverageMap hang_map_;
  FuzzQueue queue_;
  CampaignResult result_;
  std::uint64_t next_id_ = 1;
  std::map<ProbeClass, std::size_t> last_covered_;
  std::uint64_t broker_retry_at_ns_ = 0;
};

}  // namespace

CampaignResult run_campaign(const CampaignConfig& config, harness::TargetAdapter& target,
                            Clock& clock, const CampaignHooks& hooks) {
  config_validate(config);
  return CampaignRun(config, target, clock, hooks).run();
}

std::string replay_violations(const CampaignResult& result, harness::TargetAdapter& target,
                              std::chrono::milliseconds hang_budget) {
  CoverageMap map(target.probe_totals());
  for (const TestCase& seed : result.seeds) {
    const auto outcome = target.execute(as_span(seed.payload), hang_budget);
    map.merge(outcome);
  }
  for (const TestCase& tc : result.corpus) {
    const auto outcome = target.execute(as_span(tc.payload), hang_budget);
    if (!map.is_novel(outcome)) {
      return "corpus entry id " + std::to_string(tc.id) +
             " is not coverage-novel against its pre-insertion map";
    }
    map.merge(outcome);
  }
  for (const TestCase& tc : result.crashes) {
    const auto outcome = target.execute(as_span(tc.payload), hang_budget);
    if (outcome.status != ExecStatus::Crash) {
      return "stored crash id " + std::to_string(tc.id) + " replays as " +
             exec_status_name(outcome.status);
    }
  }
  for (const TestCase& tc : result.hangs) {
    const auto outcome = target.execute(as_span(tc.payload), hang_budget);
    if (outcome.status != ExecStatus::Hang) {
      return "stored hang id " + std::to_string(tc.id) + " replays as " +
             exec_status_name(outcome.status);
    }
  }
  return "";
}

}  // namespace semfuzz::engine
