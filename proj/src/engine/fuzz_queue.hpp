#pragma once

#include <memory>
#include <vector>

#include "core/rng.hpp"
#include "core/types.hpp"

namespace semfuzz::engine {

// Round-robin scheduler with per-entry energy. Each entry is selected
// `energy` consecutive times before the cursor advances; energy replenishes
// to the base when it wraps around. An entry whose mutants produce fresh
// coverage earns a one-time +4 bonus, extending its current stretch.
class FuzzQueue {
public:
  static constexpr std::uint32_t kBaseEnergy = 1;
  static constexpr std::uint32_t kCoverageBonus = 4;

  void add(std::shared_ptr<const TestCase> test_case);

  // Next scheduled entry. The rng parameter is part of the selection
  // contract; the round-robin policy draws nothing from it today.
  std::shared_ptr<const TestCase> select_next(Rng& rng);

  // One-time energy bonus for the entry that produced new coverage.
  void grant_coverage_bonus(std::uint64_t entry_id);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::uint32_t energy_of(std::uint64_t entry_id) const;

private:
  struct Entry {
    std::shared_ptr<const TestCase> test_case;
    std::uint32_t energy = kBaseEnergy;
    bool bonus_granted = false;
  };

  std::vector<Entry> entries_;
  std::size_t cursor_ = 0;
};

}  // namespace semfuzz::engine
