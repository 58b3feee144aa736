#pragma once

#include <vector>

#include "core/rng.hpp"
#include "core/types.hpp"

namespace semfuzz::engine {

// Havoc operator set: bit flips, random bytes, +-1..35 arithmetic on 1/2/4
// byte little-endian fields, interesting-value overwrites, block deletes and
// duplicates, and dictionary token splices.
enum class HavocOp : std::uint8_t {
  BitFlip,
  RandByte,
  Arith8,
  Arith16,
  Arith32,
  InterestingValue,
  BlockDelete,
  BlockDuplicate,
  DictOverwrite,
  DictInsert,
};

inline constexpr int kHavocOpCount = 10;
inline constexpr int kArithMax = 35;
inline constexpr std::size_t kMaxHavocStack = 64;
inline constexpr std::size_t kMaxPayloadSize = 1 << 20;

// Deterministic primitives behind the random operators.
void op_bit_flip(Bytes& data, std::size_t bit_index);
void op_set_byte(Bytes& data, std::size_t pos, std::uint8_t value);
// width in {1, 2, 4}; little-endian field at pos; delta may be negative.
void op_arith(Bytes& data, std::size_t pos, int width, int delta);
void op_overwrite(Bytes& data, std::size_t pos, std::span<const std::uint8_t> token);
void op_insert(Bytes& data, std::size_t pos, std::span<const std::uint8_t> token);
void op_block_delete(Bytes& data, std::size_t pos, std::size_t len);
void op_block_duplicate(Bytes& data, std::size_t src, std::size_t len, std::size_t dest);

/// Applies one randomly-parameterized operator in place.
void apply_havoc_op(HavocOp op, Bytes& data, Rng& rng, const std::vector<Bytes>& dictionary);

/// Full havoc pass: a stack of 1..64 uniformly chosen operators applied to a
/// copy of `payload`. Empty payloads are first replaced by one random byte.
Bytes mutate_builtin(std::span<const std::uint8_t> payload, Rng& rng,
                     const std::vector<Bytes>& dictionary);

}  // namespace semfuzz::engine
