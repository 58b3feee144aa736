#include "engine/fuzz_queue.hpp"

#include "core/errors.hpp"

namespace semfuzz::engine {

void FuzzQueue::add(std::shared_ptr<const TestCase> test_case) {
  entries_.push_back(Entry{std::move(test_case), kBaseEnergy, false});
}

std::shared_ptr<const TestCase> FuzzQueue::select_next(Rng& rng) {
  (void)rng;
  if (entries_.empty()) throw EmptyInputError("select_next on an empty fuzz queue");
  if (entries_[cursor_].energy == 0) {
    entries_[cursor_].energy = kBaseEnergy;
    cursor_ = (cursor_ + 1) % entries_.size();
  }
  Entry& entry = entries_[cursor_];
  --entry.energy;
  return entry.test_case;
}

void FuzzQueue::grant_coverage_bonus(std::uint64_t entry_id) {
  for (Entry& entry : entries_) {
    if (entry.test_case->id == entry_id) {
      if (!entry.bonus_granted) {
        entry.bonus_granted = true;
        entry.energy += kCoverageBonus;
      }
      return;
    }
  }
}

std::uint32_t FuzzQueue::energy_of(std::uint64_t entry_id) const {
  for (const Entry& entry : entries_) {
    if (entry.test_case->id == entry_id) return entry.energy;
  }
  return 0;
}

}  // namespace semfuzz::engine
