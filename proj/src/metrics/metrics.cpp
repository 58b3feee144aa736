#include "metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "core/errors.hpp"

namespace semfuzz::metrics {

namespace {

std::uint64_t count_status(const LogTable& table, QueryStatus status) {
  return static_cast<std::uint64_t>(
      std::count_if(table.records.begin(), table.records.end(),
                    [&](const QueryLogRecord& r) { return r.status == status; }));
}

double rate(std::uint64_t count, std::uint64_t total) {
  return 100.0 * static_cast<double>(count) / static_cast<double>(total);
}

void require_nonempty(const LogTable& table, const char* op) {
  if (table.records.empty()) {
    throw EmptyInputError(std::string(op) + " on an empty log table");
  }
}

}  // namespace

LogTables build_log_table(const std::vector<QueryLogRecord>& records) {
  LogTables out;
  std::map<std::pair<std::string, int>, std::size_t> index;
  for (const QueryLogRecord& r : records) {
    const auto key = std::make_pair(r.benchmark, r.shot);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, out.tables.size());
      out.tables.push_back(LogTable{r.benchmark, r.shot, {}});
      it = index.find(key);
    }
    out.tables[it->second].records.push_back(r);
  }
  return out;
}

LogTables build_log_table(const std::filesystem::path& jsonl_path) {
  std::ifstream in(jsonl_path);
  if (!in) throw IoError("cannot read log file: " + jsonl_path.string());
  std::vector<QueryLogRecord> records;
  std::size_t skipped = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (auto record = query_record_from_jsonl(line)) {
      records.push_back(std::move(*record));
    } else {
      ++skipped;
    }
  }
  LogTables out = build_log_table(records);
  out.skipped = skipped;
  return out;
}

double scr(const LogTable& table) {
  require_nonempty(table, "scr");
  return rate(count_status(table, QueryStatus::Ok), table.records.size());
}

double rdr(LogTable& table) {
  require_nonempty(table, "rdr");
  std::set<std::string> seen;
  std::uint64_t duplicates = 0;
  for (QueryLogRecord& r : table.records) {
    r.duplicate = false;
    if (r.status != QueryStatus::Ok || !r.final_output_digest) continue;
    if (!seen.insert(*r.final_output_digest).second) {
      r.duplicate = true;
      ++duplicates;
    }
  }
  return rate(duplicates, table.records.size());
}

double fmr(const LogTable& table) {
  require_nonempty(table, "fmr");
  return rate(count_status(table, QueryStatus::FormatMismatch), table.records.size());
}

double hcer(const LogTable& table) {
  require_nonempty(table, "hcer");
  return rate(count_status(table, QueryStatus::HexError), table.records.size());
}

double timeout_rate(const LogTable& table) {
  require_nonempty(table, "timeout_rate");
  return rate(count_status(table, QueryStatus::Timeout), table.records.size());
}

double empty_rate(const LogTable& table) {
  require_nonempty(table, "empty_rate");
  return rate(count_status(table, QueryStatus::Empty), table.records.size());
}

double cip(double coverage_llm, double coverage_baseline) {
  if (coverage_llm < 0.0 || coverage_llm > 100.0 || coverage_baseline < 0.0 ||
      coverage_baseline > 100.0) {
    throw RangeError("cip: coverage percentages must lie in [0, 100]");
  }
  return coverage_llm - coverage_baseline;
}

double coverage_percent(const CoverageMap& map, ProbeClass cls) {
  const auto it = map.totals().find(cls);
  if (it == map.totals().end() || it->second == 0) {
    throw RangeError(std::string("coverage_percent: no declared probes for class ") +
                     probe_class_name(cls));
  }
  return 100.0 * static_cast<double>(map.covered_count(cls)) /
         static_cast<double>(it->second);
}

MetricsSummary summarize(LogTable& table) {
  require_nonempty(table, "summarize");
  MetricsSummary s;
  s.benchmark = table.benchmark;
  s.shot = table.shot;
  s.n_total = table.records.size();
  s.n_ok = count_status(table, QueryStatus::Ok);
  s.n_timeout = count_status(table, QueryStatus::Timeout);
  s.n_format_mismatch = count_status(table, QueryStatus::FormatMismatch);
  s.n_hex_error = count_status(table, QueryStatus::HexError);
  s.n_empty = count_status(table, QueryStatus::Empty);
  s.scr = scr(table);
  s.rdr = rdr(table);
  s.n_duplicate = static_cast<std::uint64_t>(
      std::count_if(table.records.begin(), table.records.end(),
                    [](const QueryLogRecord& r) { return r.duplicate; }));
  s.fmr = fmr(table);
  s.hcer = hcer(table);
  s.timeout_rate = timeout_rate(table);
  s.empty_rate = empty_rate(table);
  return s;
}

double round_display(double value) {
  const double scaled = value * 10000.0;
  const double floor_v = std::floor(scaled);
  const double frac = scaled - floor_v;
  double rounded;
  if (frac > 0.5) {
    rounded = floor_v + 1;
  } else if (frac < 0.5) {
    rounded = floor_v;
  } else {
    // half-even tie break
    rounded = std::fmod(floor_v, 2.0) == 0.0 ? floor_v : floor_v + 1;
  }
  return rounded / 10000.0;
}

}  // namespace semfuzz::metrics
