#include <cstring>

#include "harness/toy_targets.hpp"

namespace semfuzz::harness {

namespace {

constexpr ProbeClass F = ProbeClass::Function;
constexpr ProbeClass L = ProbeClass::Line;
constexpr ProbeClass B = ProbeClass::Branch;
constexpr ProbeClass R = ProbeClass::Region;

constexpr int kMaxDepth = 48;

class MiniJsonParser {
public:
  MiniJsonParser(std::span<const std::uint8_t> data, ProbeContext& ctx)
      : data_(data), ctx_(ctx) {}

  void run() {
    ctx_.probe(F, 1);
    ctx_.probe(R, 300);
    ctx_.probe(L, 100);
    skip_ws();
    if (eof()) {
      ctx_.probe(B, 200);
      return;
    }
    ctx_.probe(B, 201);
    const bool ok = parse_value();
    skip_ws();
    if (ok && eof()) {
      ctx_.probe(B, 202);
      ctx_.probe(L, 101);
    } else {
      ctx_.probe(B, 203);
    }
  }

private:
  bool eof() const { return pos_ >= data_.size(); }
  char peek() const { return static_cast<char>(data_[pos_]); }
  char take() { return static_cast<char>(data_[pos_++]); }

  void skip_ws() {
    ctx_.probe(F, 8);
    while (!eof()) {
      const char c = peek();
      if (c != ' ' && c != '\t' && c != '\n' && c != '\r') break;
      ++pos_;
    }
  }

  void enter() {
    if (++depth_ > kMaxDepth) {
      ctx_.crash("nesting depth exceeded " + std::to_string(kMaxDepth));
    }
  }
  void leave() { --depth_; }

  bool parse_value() {
    ctx_.probe(F, 2);
    ctx_.probe(L, 102);
    if (eof()) return false;
    const char c = peek();
    if (c == '{') return parse_object();
    if (c == '[') return parse_array();
    if (c == '"') return parse_string();
    if (c == '-' || (c >= '0' && c <= '9')) return parse_number();
    if (c == 't' || c == 'f' || c == 'n') return parse_literal();
    ctx_.probe(B, 204);
    return false;
  }

  bool parse_object() {
    ctx_.probe(F, 3);
    ctx_.probe(R, 301);
    ctx_.probe(L, 103);
    enter();
    ++pos_;  // '{'
    skip_ws();
    if (!eof() && peek() == '}') {
      ctx_.probe(B, 205);
      ++pos_;
      leave();
      return true;
    }
    ctx_.probe(B, 206);
    while (true) {
      skip_ws();
      if (eof() || peek() != '"') {
        ctx_.probe(B, 207);
        leave();
        return false;
      }
      if (!parse_string()) {
        leave();
        return false;
      }
      skip_ws();
      if (eof() || peek() != ':') {
        ctx_.probe(B, 208);
        leave();
        return false;
      }
      ++pos_;
      skip_ws();
      if (!parse_value()) {
        leave();
        return false;
      }
      skip_ws();
      if (!eof() && peek() == ',') {
        ctx_.probe(B, 209);
        ++pos_;
        continue;
      }
      if (!eof() && peek() == '}') {
        ctx_.probe(L, 104);
        ++pos_;
        leave();
        return true;
      }
      ctx_.probe(B, 210);
      leave();
      return false;
    }
  }

  bool parse_array() {
    ctx_.probe(F, 4);
    ctx_.probe(R, 302);
    ctx_.probe(L, 105);
    enter();
    ++pos_;  // '['
    skip_ws();
    if (!eof() && peek() == ']') {
      ctx_.probe(B, 211);
      ++pos_;
      leave();
      return true;
    }
    ctx_.probe(B, 212);
    while (true) {
      skip_ws();
      if (!parse_value()) {
        leave();
        return false;
      }
      skip_ws();
      if (!eof() && peek() == ',') {
        ctx_.probe(L, 106);
        ++pos_;
        continue;
      }
      if (!eof() && peek() == ']') {
        ++pos_;
        leave();
        return true;
      }
      ctx_.probe(B, 213);
      leave();
      return false;
    }
  }

  bool parse_string() {
    ctx_.probe(F, 5);
    ctx_.probe(L, 107);
    ++pos_;  // '"'
    while (!eof()) {
      const char c = take();
      if (c == '"') {
        ctx_.probe(L, 108);
        return true;
      }
      if (c == '\\') {
        ctx_.probe(B, 214);
        ctx_.probe(R, 303);
        if (eof()) break;
        const char e = take();
        if (e != '"' && e != '\\' && e != '/' && e != 'n' && e != 't' && e != 'r' &&
            e != 'b' && e != 'f') {
          ctx_.probe(B, 215);
          return false;
        }
      } else if (static_cast<unsigned char>(c) < 0x20) {
        ctx_.probe(B, 216);
        return false;
      }
    }
    ctx_.probe(L, 109);  // unterminated
    return false;
  }

  bool parse_number() {
    ctx_.probe(F, 6);
    ctx_.probe(L, 110);
    if (peek() == '-') {
      ctx_.probe(L, 111);
      ++pos_;
    }
    std::size_t digits = 0;
    while (!eof() && peek() >= '0' && peek() <= '9') {
      ++pos_;
      ++digits;
    }
    if (digits == 0) {
      ctx_.probe(B, 217);
      return false;
    }
    if (!eof() && peek() == '.') {
      ctx_.probe(R, 304);
      ++pos_;
      std::size_t fraction = 0;
      while (!eof() && peek() >= '0' && peek() <= '9') {
        ++pos_;
        ++fraction;
      }
      if (fraction == 0) return false;
      ctx_.probe(L, 112);
    }
    return true;
  }

  bool parse_literal() {
    ctx_.probe(F, 7);
    ctx_.probe(L, 113);
    static constexpr const char* kWords[] = {"true", "false", "null"};
    for (const char* word : kWords) {
      const std::size_t n = std::strlen(word);
      if (data_.size() - pos_ >= n &&
          std::memcmp(data_.data() + pos_, word, n) == 0) {
        pos_ += n;
        return true;
      }
    }
    return false;
  }

  std::span<const std::uint8_t> data_;
  ProbeContext& ctx_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

void minijson_run(std::span<const std::uint8_t> data, ProbeContext& ctx) {
  MiniJsonParser(data, ctx).run();
}

std::vector<Bytes> minijson_dictionary() {
  auto tok = [](const char* s) { return Bytes(s, s + std::strlen(s)); };
  return {
      tok("null"), tok("true"), tok("false"), tok("{}"), tok("[]"),
      tok("\"k\":"), tok(",\"v\":1"), tok("[[[[[[[["), tok("]]]]]]]]"),
      tok("\\n"), tok("0.5"),
  };
}

}  // namespace

std::unique_ptr<TargetAdapter> make_minijson_target() {
  ProbeTotals totals{
      {ProbeClass::Function, 8},
      {ProbeClass::Line, 14},
      {ProbeClass::Branch, 18},
      {ProbeClass::Region, 5},
  };
  return std::make_unique<InProcessTarget>("minijson", minijson_run, std::move(totals),
                                           minijson_dictionary());
}

}  // namespace semfuzz::harness
