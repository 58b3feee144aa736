#include "engine/havoc.hpp"

#include <algorithm>
#include <array>
#include <cstring>

namespace semfuzz::engine {

namespace {

// AFL's interesting value tables.
constexpr std::array<std::int8_t, 9> kInteresting8 = {-128, -1, 0, 1, 16, 32, 64, 100, 127};
constexpr std::array<std::int16_t, 10> kInteresting16 = {-32768, -129, 128,  255,  256,
                                                         512,    1000, 1024, 4096, 32767};
constexpr std::array<std::int32_t, 8> kInteresting32 = {
    INT32_MIN, -100663046, -32769, 32768, 65535, 65536, 100663045, INT32_MAX};

std::uint32_t read_le(const Bytes& data, std::size_t pos, int width) {
  std::uint32_t v = 0;
  for (int i = 0; i < width; ++i) {
    v |= static_cast<std::uint32_t>(data[pos + static_cast<std::size_t>(i)]) << (8 * i);
  }
  return v;
}

void write_le(Bytes& data, std::size_t pos, int width, std::uint32_t v) {
  for (int i = 0; i < width; ++i) {
    data[pos + static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((v >> (8 * i)) & 0xff);
  }
}

}  // namespace

void op_bit_flip(Bytes& data, std::size_t bit_index) {
  data[bit_index / 8] ^= static_cast<std::uint8_t>(1u << (bit_index % 8));
}

void op_set_byte(Bytes& data, std::size_t pos, std::uint8_t value) { data[pos] = value; }

void op_arith(Bytes& data, std::size_t pos, int width, int delta) {
  const std::uint32_t mask = width == 4 ? 0xffffffffu : ((1u << (8 * width)) - 1);
  const std::uint32_t v = read_le(data, pos, width);
  write_le(data, pos, width, (v + static_cast<std::uint32_t>(delta)) & mask);
}

void op_overwrite(Bytes& data, std::size_t pos, std::span<const std::uint8_t> token) {
  const std::size_t n = std::min(token.size(), data.size() - pos);
  std::memcpy(data.data() + pos, token.data(), n);
}

void op_insert(Bytes& data, std::size_t pos, std::span<const std::uint8_t> token) {
  data.insert(data.begin() + static_cast<std::ptrdiff_t>(pos), token.begin(), token.end());
}

void op_block_delete(Bytes& data, std::size_t pos, std::size_t len) {
  data.erase(data.begin() + static_cast<std::ptrdiff_t>(pos),
             data.begin() + static_cast<std::ptrdiff_t>(pos + len));
}

void op_block_duplicate(Bytes& data, std::size_t src, std::size_t len, std::size_t dest) {
  const Bytes block(data.begin() + static_cast<std::ptrdiff_t>(src),
                    data.begin() + static_cast<std::ptrdiff_t>(src + len));
  data.insert(data.begin() + static_cast<std::ptrdiff_t>(dest), block.begin(), block.end());
}

void apply_havoc_op(HavocOp op, Bytes& data, Rng& rng, const std::vector<Bytes>& dictionary) {
  if (data.empty()) return;
  switch (op) {
    case HavocOp::BitFlip:
      op_bit_flip(data, rng.below(data.size() * 8));
      return;
    case HavocOp::RandByte:
      op_set_byte(data, rng.below(data.size()), rng.byte());
      return;
    case HavocOp::Arith8:
    case HavocOp::Arith16:
    case HavocOp::Arith32: {
      const int width = op == HavocOp::Arith8 ? 1 : op == HavocOp::Arith16 ? 2 : 4;
      if (data.size() < static_cast<std::size_t>(width)) return;
      const std::size_t pos = rng.below(data.size() - static_cast<std::size_t>(width) + 1);
      int delta = static_cast<int>(rng.between(1, kArithMax));
      if (rng.coin()) delta = -delta;
      op_arith(data, pos, width, delta);
      return;
    }
    case HavocOp::InterestingValue: {
      const int pick = static_cast<int>(rng.below(3));
      const int width = pick == 0 ? 1 : pick == 1 ? 2 : 4;
      if (data.size() < static_cast<std::size_t>(width)) return;
      const std::size_t pos = rng.below(data.size() - static_cast<std::size_t>(width) + 1);
      std::uint32_t value = 0;
      if (width == 1) value = static_cast<std::uint8_t>(kInteresting8[rng.below(kInteresting8.size())]);
      else if (width == 2) value = static_cast<std::uint16_t>(kInteresting16[rng.below(kInteresting16.size())]);
      else value = static_cast<std::uint32_t>(kInteresting32[rng.below(kInteresting32.size())]);
      write_le(data, pos, width, value);
      return;
    }
    case HavocOp::BlockDelete: {
      if (data.size() < 2) return;
      const std::size_t len = rng.between(1, data.size() - 1);
      const std::size_t pos = rng.below(data.size() - len + 1);
      op_block_delete(data, pos, len);
      return;
    }
    case HavocOp::BlockDuplicate: {
      const std::size_t len = rng.between(1, std::min<std::size_t>(data.size(), 256));
      if (data.size() + len > kMaxPayloadSize) return;
      const std::size_t src = rng.below(data.size() - len + 1);
      const std::size_t dest = rng.below(data.size() + 1);
      op_block_duplicate(data, src, len, dest);
      return;
    }
    case HavocOp::DictOverwrite: {
      if (dictionary.empty()) {
        op_set_byte(data, rng.below(data.size()), rng.byte());
        return;
      }
      const Bytes& token = dictionary[rng.below(dictionary.size())];
      if (token.empty()) return;
      op_overwrite(data, rng.below(data.size()), as_span(token));
      return;
    }
    case HavocOp::DictInsert: {
      if (dictionary.empty()) {
        op_set_byte(data, rng.below(data.size()), rng.byte());
        return;
      }
      const Bytes& token = dictionary[rng.below(dictionary.size())];
      if (token.empty() || data.size() + token.size() > kMaxPayloadSize) return;
      op_insert(data, rng.below(data.size() + 1), as_span(token));
      return;
    }
  }
}

Bytes mutate_builtin(std::span<const std::uint8_t> payload, Rng& rng,
                     const std::vector<Bytes>& dictionary) {
  Bytes data(payload.begin(), payload.end());
  if (data.empty()) data.push_back(rng.byte());
  const std::size_t stack = rng.between(1, kMaxHavocStack);
  for (std::size_t i = 0; i < stack; ++i) {
    const auto op = static_cast<HavocOp>(rng.below(kHavocOpCount));
    apply_havoc_op(op, data, rng, dictionary);
    if (data.empty()) data.push_back(rng.byte());
  }
  return data;
}

}  // namespace semfuzz::engine
