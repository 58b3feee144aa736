#pragma once

#include <algorithm>

#include "core/types.hpp"

namespace semfuzz::service {

// head ++ tail == original; |head| = min(|original|, threshold). Only the
// head travels to the model; the tail is stored for recombination.
struct SplitBuffer {
  Bytes head;
  Bytes tail;

  bool operator==(const SplitBuffer&) const = default;
};

inline SplitBuffer split_buffer(std::span<const std::uint8_t> payload, std::size_t threshold) {
  const std::size_t head_len = std::min(payload.size(), threshold);
  return SplitBuffer{
      Bytes(payload.begin(), payload.begin() + static_cast<std::ptrdiff_t>(head_len)),
      Bytes(payload.begin() + static_cast<std::ptrdiff_t>(head_len), payload.end()),
  };
}

inline Bytes recombine(const SplitBuffer& split, std::span<const std::uint8_t> mutated_head) {
  Bytes out(mutated_head.begin(), mutated_head.end());
  out.insert(out.end(), split.tail.begin(), split.tail.end());
  return out;
}

}  // namespace semfuzz::service
