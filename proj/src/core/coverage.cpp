#include "core/coverage.hpp"

namespace semfuzz {

std::uint8_t bucket_index(std::uint32_t raw_count) {
  if (raw_count == 0) return 0;
  if (raw_count == 1) return 1;
  if (raw_count == 2) return 2;
  if (raw_count == 3) return 3;
  if (raw_count <= 7) return 4;
  if (raw_count <= 15) return 5;
  if (raw_count <= 31) return 6;
  if (raw_count <= 127) return 7;
  return 8;
}

std::uint8_t bucket_mask(std::uint32_t raw_count) {
  const std::uint8_t idx = bucket_index(raw_count);
  return idx == 0 ? 0 : static_cast<std::uint8_t>(1u << (idx - 1));
}

bool CoverageMap::is_novel(const ExecutionOutcome& outcome) const {
  for (const auto& [index, count] : outcome.edge_hits) {
    const std::uint8_t mask = bucket_mask(count);
    if ((mask & ~edge_bitmap_[index]) != 0) return true;
  }
  for (const ProbeHit& hit : outcome.probes) {
    auto it = covered_.find(hit.cls);
    if (it == covered_.end() || !it->second.contains(hit.id)) return true;
  }
  return false;
}

bool CoverageMap::merge(const ExecutionOutcome& outcome) {
  const bool novel = is_novel(outcome);
  for (const auto& [index, count] : outcome.edge_hits) {
    edge_bitmap_[index] |= bucket_mask(count);
  }
  for (const ProbeHit& hit : outcome.probes) {
    covered_[hit.cls].insert(hit.id);
  }
  return novel;
}

const std::set<std::uint32_t>& CoverageMap::covered(ProbeClass c) const {
  static const std::set<std::uint32_t> kEmpty;
  auto it = covered_.find(c);
  return it == covered_.end() ? kEmpty : it->second;
}

}  // namespace semfuzz
