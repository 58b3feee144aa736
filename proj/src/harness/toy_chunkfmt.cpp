#include <cstring>

#include "harness/toy_targets.hpp"

namespace semfuzz::harness {

namespace {

constexpr ProbeClass F = ProbeClass::Function;
constexpr ProbeClass L = ProbeClass::Line;
constexpr ProbeClass B = ProbeClass::Branch;
constexpr ProbeClass R = ProbeClass::Region;

std::uint32_t read_le32(std::span<const std::uint8_t> d, std::size_t off) {
  return static_cast<std::uint32_t>(d[off]) |
         (static_cast<std::uint32_t>(d[off + 1]) << 8) |
         (static_cast<std::uint32_t>(d[off + 2]) << 16) |
         (static_cast<std::uint32_t>(d[off + 3]) << 24);
}

bool type_is(std::span<const std::uint8_t> d, std::size_t off, const char* tag) {
  return std::memcmp(d.data() + off, tag, 4) == 0;
}

void handle_data(std::span<const std::uint8_t> payload, ProbeContext& ctx) {
  ctx.probe(L, 105);
  ctx.probe(R, 302);
  std::uint64_t sum = 0;
  std::size_t high = 0;
  std::size_t zeros = 0;
  for (std::uint8_t b : payload) {
    sum += b;
    if (b >= 0x80) {
      ctx.probe(B, 211);
      ++high;
    }
    if (b == 0) ++zeros;
  }
  if (high > 0 && zeros > 0) ctx.probe(L, 106);
  if (payload.size() >= 16) {
    ctx.probe(B, 212);
    ctx.probe(R, 303);
    if (payload[0] == 'Z' && payload[1] == 'I' && payload[2] == 'P') {
      ctx.probe(B, 213);
      ctx.probe(L, 107);
    }
  }
  if (!payload.empty() && sum % 255 == 0) {
    ctx.probe(B, 214);
    ctx.probe(L, 108);
  }
  if (payload.size() > 1024) {
    ctx.probe(B, 215);
    ctx.probe(R, 304);
    ctx.probe(L, 109);
  }
}

void chunkfmt_run(std::span<const std::uint8_t> data, ProbeContext& ctx) {
  ctx.probe(F, 1);
  ctx.probe(R, 300);
  ctx.probe(L, 100);
  if (data.size() < 4 || !type_is(data, 0, "CHNK")) {
    ctx.probe(B, 200);
    return;
  }
  ctx.probe(B, 201);
  ctx.probe(L, 101);
  std::size_t off = 4;
  std::size_t chunks = 0;
  while (off < data.size()) {
    ctx.probe(L, 102);
    if (data.size() - off < 8) {
      ctx.probe(B, 202);  // truncated chunk header
      return;
    }
    ctx.probe(B, 203);
    ctx.probe(F, 2);
    const std::size_t type_off = off;
    const std::uint32_t declared = read_le32(data, off + 4);
    off += 8;
    const std::size_t avail = std::min<std::size_t>(declared, data.size() - off);
    if (declared > data.size() - off) {
      ctx.probe(B, 204);  // declared length reaches past the buffer
    } else {
      ctx.probe(B, 205);
    }
    const auto payload = data.subspan(off, avail);
    if (type_is(data, type_off, "DATA")) {
      ctx.probe(F, 3);
      handle_data(payload, ctx);
    } else if (type_is(data, type_off, "CMNT")) {
      ctx.probe(F, 4);
      ctx.probe(L, 103);
      if (!payload.empty() && payload[0] == '#') ctx.probe(L, 110);
    } else if (type_is(data, type_off, "END!")) {
      ctx.probe(F, 5);
      ctx.probe(B, 206);
      ctx.probe(R, 305);
      return;
    } else if (type_is(data, type_off, "BUG!")) {
      ctx.probe(F, 6);
      if (declared > 64) {
        ctx.probe(B, 207);
        ctx.crash("oversized BUG! chunk (declared length " + std::to_string(declared) + ")");
      }
      ctx.probe(B, 208);
      ctx.probe(L, 111);
    } else if (type_is(data, type_off, "HNG!")) {
      ctx.probe(F, 7);
      ctx.hang();
    } else {
      ctx.probe(B, 209);  // unknown chunk type: skip payload
    }
    off += avail;
    if (++chunks > 255) {
      ctx.probe(B, 210);
      return;
    }
  }
  ctx.probe(L, 104);
  ctx.probe(R, 301);
}

std::vector<Bytes> chunkfmt_dictionary() {
  auto tok = [](const char* s) { return Bytes(s, s + std::strlen(s)); };
  return {
      tok("CHNK"), tok("DATA"), tok("CMNT"), tok("END!"), tok("BUG!"), tok("HNG!"),
      Bytes{0x41, 0x00, 0x00, 0x00},  // 65 LE
      Bytes{0x00, 0x04, 0x00, 0x00},  // 1024 LE
      tok("ZIP"),
  };
}

}  // namespace

std::unique_ptr<TargetAdapter> make_chunkfmt_target() {
  ProbeTotals totals{
      {ProbeClass::Function, 7},
      {ProbeClass::Line, 12},
      {ProbeClass::Branch, 16},
      {ProbeClass::Region, 6},
  };
  return std::make_unique<InProcessTarget>("chunkfmt", chunkfmt_run, std::move(totals),
                                           chunkfmt_dictionary());
}

}  // namespace semfuzz::harness
