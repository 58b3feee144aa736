#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/coverage.hpp"
#include "core/query_log.hpp"
#include "core/types.hpp"

namespace semfuzz::metrics {

// Records of one (benchmark, shot) scope, in log order.
struct LogTable {
  std::string benchmark;
  int shot = 0;
  std::vector<QueryLogRecord> records;

  bool operator==(const LogTable&) const = default;
};

struct LogTables {
  std::vector<LogTable> tables;  // ordered by first appearance in the file
  std::size_t skipped = 0;       // malformed lines, counted and skipped
};

/// Groups a JSONL log by (benchmark, shot), preserving record order.
LogTables build_log_table(const std::filesystem::path& jsonl_path);
LogTables build_log_table(const std::vector<QueryLogRecord>& records);

/// Syntactic correctness rate: 100 * count(Ok) / n. Throws EmptyInputError
/// for empty tables.
double scr(const LogTable& table);

/// Response duplication rate. Marks each Ok record duplicate iff an earlier
/// Ok record in the same table carries the same final_output_digest, then
/// returns 100 * count(duplicate) / n.
double rdr(LogTable& table);

double fmr(const LogTable& table);           // FormatMismatch rate
double hcer(const LogTable& table);          // HexError rate
double timeout_rate(const LogTable& table);  // Timeout rate
double empty_rate(const LogTable& table);    // Empty rate

/// Coverage Improvement Percentage: coverage_llm minus coverage_baseline,
/// in percentage points. Inputs must lie in [0, 100] (RangeError otherwise).
double cip(double coverage_llm, double coverage_baseline);

/// 100 * |covered[class]| / totals[class]. Throws RangeError when the class
/// has no declared total.
double coverage_percent(const CoverageMap& map, ProbeClass cls);

// Counts plus derived rates for one scope. Rates are exact count ratios; the
// partition counts sum to n_total by construction.
struct MetricsSummary {
  std::string benchmark;
  int shot = 0;
  std::uint64_t n_total = 0;
  std::uint64_t n_ok = 0;
  std::uint64_t n_timeout = 0;
  std::uint64_t n_format_mismatch = 0;
  std::uint64_t n_hex_error = 0;
  std::uint64_t n_empty = 0;
  std::uint64_t n_duplicate = 0;
  double scr = 0;
  double rdr = 0;
  double fmr = 0;
  double hcer = 0;
  double timeout_rate = 0;
  double empty_rate = 0;
  std::map<ProbeClass, double> coverage;          // filled by the report layer
  std::optional<std::map<ProbeClass, double>> cip;  // vs a named baseline run

  bool operator==(const MetricsSummary&) const = default;
};

/// All rates for one table (marks duplicates as a side effect).
MetricsSummary summarize(LogTable& table);

/// Half-even rounding to 4 decimals, used for display surfaces only.
double round_display(double value);

}  // namespace semfuzz::metrics
