#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "engine/campaign.hpp"
#include "metrics/metrics.hpp"

namespace semfuzz::metrics {

/// Per-scope summaries for a JSONL log (duplicates marked while summarizing).
std::vector<MetricsSummary> summarize_log(const std::filesystem::path& jsonl_path,
                                          std::size_t* skipped = nullptr);

std::string summaries_to_json(const std::vector<MetricsSummary>& summaries,
                              std::size_t skipped);

/// Emits report.json (full precision), report.md (display tables) and
/// timeline.csv (`t_ms,class,percent`) into out_dir. When a baseline result
/// is supplied, per-class CIP columns are included, treating it as the
/// reference run.
void render_report(const engine::CampaignResult& result,
                   const std::vector<MetricsSummary>& summaries,
                   const std::filesystem::path& out_dir,
                   const engine::CampaignResult* baseline = nullptr);

/// CIP table for two runs of the same target (run_b is the baseline). Returns
/// the report as JSON; throws TargetMismatchError when targets differ.
std::string compare_runs(const engine::CampaignResult& run, const engine::CampaignResult& baseline);

}  // namespace semfuzz::metrics
