#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>

#include "core/types.hpp"

namespace semfuzz {

inline constexpr std::size_t kEdgeMapSize = 65536;

// AFL-style count bucketing. Index 0 means "never hit"; raw counts collapse
// into the ranges {1, 2, 3, 4-7, 8-15, 16-31, 32-127, 128+} (indices 1..8).
// Monotone by construction: a <= b implies bucket_index(a) <= bucket_index(b).
std::uint8_t bucket_index(std::uint32_t raw_count);

// Bit for a non-zero bucket, used to accumulate which buckets an edge has
// visited across a campaign.
std::uint8_t bucket_mask(std::uint32_t raw_count);

// Accumulated coverage across a campaign: per-edge bucket bits plus the
// per-class sets of probe identifiers seen so far. `totals` declares the
// probe inventory of the target per class.
class CoverageMap {
public:
  CoverageMap() = default;
  explicit CoverageMap(std::map<ProbeClass, std::uint32_t> totals)
      : totals_(std::move(totals)) {}

  // True if the outcome would add a new (class, id) probe or a new edge
  // bucket. Does not modify the map.
  bool is_novel(const ExecutionOutcome& outcome) const;

  // Folds the outcome into the map. Returns what is_novel() returned just
  // before the merge.
  bool merge(const ExecutionOutcome& outcome);

  const std::set<std::uint32_t>& covered(ProbeClass c) const;
  std::size_t covered_count(ProbeClass c) const { return covered(c).size(); }

  const std::map<ProbeClass, std::uint32_t>& totals() const { return totals_; }
  void set_totals(std::map<ProbeClass, std::uint32_t> totals) { totals_ = std::move(totals); }

  const std::array<std::uint8_t, kEdgeMapSize>& edge_bitmap() const { return edge_bitmap_; }
  std::array<std::uint8_t, kEdgeMapSize>& edge_bitmap() { return edge_bitmap_; }

  std::map<ProbeClass, std::set<std::uint32_t>>& covered_sets() { return covered_; }
  const std::map<ProbeClass, std::set<std::uint32_t>>& covered_sets() const { return covered_; }

  bool operator==(const CoverageMap&) const = default;

private:
  std::array<std::uint8_t, kEdgeMapSize> edge_bitmap_{};
  std::map<ProbeClass, std::set<std::uint32_t>> covered_;
  std::map<ProbeClass, std::uint32_t> totals_;
};

}  // namespace semfuzz
