#include "metrics/report.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

#include "core/errors.hpp"

namespace semfuzz::metrics {

namespace {

nlohmann::ordered_json summary_to_json(const MetricsSummary& s) {
  nlohmann::ordered_json j;
  j["benchmark"] = s.benchmark;
  j["shot"] = s.shot;
  j["n_total"] = s.n_total;
  j["n_ok"] = s.n_ok;
  j["n_timeout"] = s.n_timeout;
  j["n_format_mismatch"] = s.n_format_mismatch;
  j["n_hex_error"] = s.n_hex_error;
  j["n_empty"] = s.n_empty;
  j["n_duplicate"] = s.n_duplicate;
  j["scr"] = s.scr;
  j["rdr"] = s.rdr;
  j["fmr"] = s.fmr;
  j["hcer"] = s.hcer;
  j["timeout_rate"] = s.timeout_rate;
  j["empty_rate"] = s.empty_rate;
  if (!s.coverage.empty()) {
    auto coverage = nlohmann::ordered_json::object();
    for (const auto& [cls, pct] : s.coverage) coverage[probe_class_name(cls)] = pct;
    j["coverage"] = std::move(coverage);
  }
  if (s.cip) {
    auto cip_obj = nlohmann::ordered_json::object();
    for (const auto& [cls, points] : *s.cip) cip_obj[probe_class_name(cls)] = points;
    j["cip"] = std::move(cip_obj);
  }
  return j;
}

std::string fixed4(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << round_display(v);
  return os.str();
}

nlohmann::ordered_json campaign_summary_json(const engine::CampaignResult& r) {
  nlohmann::ordered_json j;
  j["target"] = r.target;
  j["rng_seed"] = r.rng_seed;
  j["duration_ms"] = r.duration_ms;
  j["shots"] = r.shots;
  j["backend"] = r.backend;
  j["deterministic_time"] = r.deterministic_time;
  j["exec_count"] = r.exec_count;
  j["llm_derived_execs"] = r.llm_derived_execs;
  j["published"] = r.published;
  j["publish_dropped"] = r.publish_dropped;
  j["broker_failures"] = r.broker_failures;
  j["corpus_size"] = r.corpus.size();
  j["crash_count"] = r.crashes.size();
  j["hang_count"] = r.hangs.size();
  auto coverage = nlohmann::ordered_json::object();
  for (const auto& [cls, pct] : r.coverage_final) coverage[probe_class_name(cls)] = pct;
  j["coverage_final"] = std::move(coverage);
  return j;
}

std::map<ProbeClass, double> cip_per_class(const engine::CampaignResult& run,
                                           const engine::CampaignResult& baseline) {
  std::map<ProbeClass, double> out;
  for (const auto& [cls, pct] : run.coverage_final) {
    const auto it = baseline.coverage_final.find(cls);
    if (it != baseline.coverage_final.end()) out[cls] = cip(pct, it->second);
  }
  return out;
}

}  // namespace

std::vector<MetricsSummary> summarize_log(const std::filesystem::path& jsonl_path,
                                          std::size_t* skipped) {
  LogTables tables = build_log_table(jsonl_path);
  if (skipped) *skipped = tables.skipped;
  std::vector<MetricsSummary> summaries;
  summaries.reserve(tables.tables.size());
  for (LogTable& table : tables.tables) summaries.push_back(summarize(table));
  return summaries;
}

std::string summaries_to_json(const std::vector<MetricsSummary>& summaries,
                              std::size_t skipped) {
  nlohmann::ordered_json j;
  j["skipped_lines"] = skipped;
  auto arr = nlohmann::ordered_json::array();
  for (const MetricsSummary& s : summaries) arr.push_back(summary_to_json(s));
  j["scopes"] = std::move(arr);
  return j.dump(2);
}

void render_report(const engine::CampaignResult& result,
                   const std::vector<MetricsSummary>& summaries,
                   const std::filesystem::path& out_dir,
                   const engine::CampaignResult* baseline) {
  std::filesystem::create_directories(out_dir);

  // report.json: every number at full precision
  nlohmann::ordered_json j;
  j["campaign"] = campaign_summary_json(result);
  auto arr = nlohmann::ordered_json::array();
  for (const MetricsSummary& s : summaries) arr.push_back(summary_to_json(s));
  j["metrics"] = std::move(arr);
  if (baseline) {
    j["baseline"] = campaign_summary_json(*baseline);
    auto cip_obj = nlohmann::ordered_json::object();
    for (const auto& [cls, points] : cip_per_class(result, *baseline)) {
      cip_obj[probe_class_name(cls)] = points;
    }
    j["cip"] = std::move(cip_obj);
  }
  {
    std::ofstream out(out_dir / "report.json", std::ios::trunc);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("cannot write report.json in " + out_dir.string());
  }

  // timeline.csv
  {
    std::ofstream out(out_dir / "timeline.csv", std::ios::trunc);
    out << "t_ms,class,percent\n";
    for (const auto& point : result.coverage_timeline) {
      out << point.t_ms << ',' << probe_class_name(point.cls) << ',' << point.percent << '\n';
    }
    if (!out) throw IoError("cannot write timeline.csv in " + out_dir.string());
  }

  // report.md
  std::ofstream md(out_dir / "report.md", std::ios::trunc);
  md << "# Campaign report: " << result.target << "\n\n";
  md << "- executions: " << result.exec_count << " (llm-derived: " << result.llm_derived_execs
     << ")\n";
  md << "- corpus entries: " << result.corpus.size() << ", crashes: " << result.crashes.size()
     << ", hangs: " << result.hangs.size() << "\n";
  md << "- backend: " << result.backend << ", shots: " << result.shots << ", rng seed: "
     << result.rng_seed << "\n\n";

  md << "## Final coverage\n\n";
  if (baseline) {
    md << "| class | coverage (%) | baseline (%) | CIP (points) |\n";
    md << "|---|---|---|---|\n";
    const auto cips = cip_per_class(result, *baseline);
    for (const auto& [cls, pct] : result.coverage_final) {
      md << "| " << probe_class_name(cls) << " | " << fixed4(pct) << " | ";
      const auto bit = baseline->coverage_final.find(cls);
      if (bit != baseline->coverage_final.end()) {
        md << fixed4(bit->second) << " | " << fixed4(cips.at(cls)) << " |\n";
      } else {
        md << "- | - |\n";
      }
    }
  } else {
    md << "| class | coverage (%) |\n|---|---|\n";
    for (const auto& [cls, pct] : result.coverage_final) {
      md << "| " << probe_class_name(cls) << " | " << fixed4(pct) << " |\n";
    }
  }

  md << "\n## Coverage over time\n\n";
  md << "| t_ms | class | percent |\n|---|---|---|\n";
  const auto& timeline = result.coverage_timeline;
  const std::size_t max_rows = 100;
  const std::size_t step = timeline.size() > max_rows ? timeline.size() / max_rows + 1 : 1;
  for (std::size_t i = 0; i < timeline.size(); i += step) {
    const auto& p = timeline[i];
    md << "| " << p.t_ms << " | " << probe_class_name(p.cls) << " | " << fixed4(p.percent)
       << " |\n";
  }
  if (step > 1) md << "\n(full series in timeline.csv)\n";

  md << "\n## LLM interaction metrics\n\n";
  if (summaries.empty()) {
    md << "(no query log records)\n";
  } else {
    md << "| benchmark | shot | n | SCR | RDR | FMR | HCER | timeout | empty |\n";
    md << "|---|---|---|---|---|---|---|---|---|\n";
    for (const MetricsSummary& s : summaries) {
      md << "| " << s.benchmark << " | " << s.shot << " | " << s.n_total << " | "
         << fixed4(s.scr) << " | " << fixed4(s.rdr) << " | " << fixed4(s.fmr) << " | "
         << fixed4(s.hcer) << " | " << fixed4(s.timeout_rate) << " | " << fixed4(s.empty_rate)
         << " |\n";
    }
  }
  if (!md) throw IoError("cannot write report.md in " + out_dir.string());
}

std::string compare_runs(const engine::CampaignResult& run,
                         const engine::CampaignResult& baseline) {
  if (run.target != baseline.target) {
    throw TargetMismatchError("compare: runs target different programs (\"" + run.target +
                              "\" vs \"" + baseline.target + "\")");
  }
  nlohmann::ordered_json j;
  j["target"] = run.target;
  auto coverage_run = nlohmann::ordered_json::object();
  for (const auto& [cls, pct] : run.coverage_final) coverage_run[probe_class_name(cls)] = pct;
  auto coverage_base = nlohmann::ordered_json::object();
  for (const auto& [cls, pct] : baseline.coverage_final) {
    coverage_base[probe_class_name(cls)] = pct;
  }
  auto cip_obj = nlohmann::ordered_json::object();
  for (const auto& [cls, points] : cip_per_class(run, baseline)) {
    cip_obj[probe_class_name(cls)] = points;
  }
  j["coverage_llm"] = std::move(coverage_run);
  j["coverage_baseline"] = std::move(coverage_base);
  j["cip"] = std::move(cip_obj);
  return j.dump(2);
}

}  // namespace semfuzz::metrics
