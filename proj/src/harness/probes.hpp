#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "core/coverage.hpp"
#include "core/types.hpp"

namespace semfuzz::harness {

// Signals a planted fault inside a toy target; execute() maps it to Crash.
struct TargetFault {
  std::string detail;
};

// Signals the planted hang after the budget has been burned.
struct TargetHang {};

// Per-execution probe collector. Probe registrations feed two views:
//   - the distinct (class, id) set for this run, and
//   - edge hit counters indexed by (prev_id >> 1) ^ id mod 65536, with
//     prev_id starting at 0 each run.
// reset() must be called before every execution; epoch stamping makes that
// O(touched) instead of O(map).
class ProbeCollector {
public:
  ProbeCollector();

  void reset(std::chrono::steady_clock::time_point hang_deadline);

  void hit(ProbeClass cls, std::uint32_t id);

  void signal_crash(std::string detail);
  bool crash_signaled() const { return crash_; }
  const std::string& crash_detail() const { return crash_detail_; }

  std::chrono::steady_clock::time_point hang_deadline() const { return hang_deadline_; }

  // Sorted, deduplicated probe hits for this run.
  std::vector<ProbeHit> extract_probes() const;
  // Sorted (edge index, saturated count) pairs for this run.
  std::vector<std::pair<std::uint16_t, std::uint8_t>> extract_edges() const;

private:
  std::vector<ProbeHit> raw_hits_;
  std::uint32_t prev_location_ = 0;

  std::array<std::uint32_t, kEdgeMapSize> edge_epoch_{};
  std::array<std::uint8_t, kEdgeMapSize> edge_count_{};
  std::vector<std::uint16_t> touched_;
  std::uint32_t epoch_ = 0;

  bool crash_ = false;
  std::string crash_detail_;
  std::chrono::steady_clock::time_point hang_deadline_{};
};

// Facade handed to target code during one execution.
class ProbeContext {
public:
  explicit ProbeContext(ProbeCollector& collector) : collector_(collector) {}

  void probe(ProbeClass cls, std::uint32_t id) { collector_.hit(cls, id); }

  // Planted bug trigger: aborts the execution with a Crash outcome.
  [[noreturn]] void crash(std::string detail) {
    collector_.signal_crash(detail);
    throw TargetFault{std::move(detail)};
  }

  // Planted hang: aborts the execution; execute() reports Hang and accounts
  // the full hang budget as the execution time.
  [[noreturn]] void hang();

private:
  ProbeCollector& collector_;
};

}  // namespace semfuzz::harness
