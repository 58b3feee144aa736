#include "broker/resp.hpp"

#include <charconv>

#include "core/errors.hpp"

namespace semfuzz::broker::resp {

namespace {
// Bulk payloads larger than this are treated as malformed rather than
// buffered; the broker never ships messages this large.
constexpr std::int64_t kMaxBulkLen = 64ll * 1024 * 1024;
constexpr std::int64_t kMaxArrayLen = 1ll * 1024 * 1024;

std::int64_t parse_int(std::string_view s) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ProtocolError("malformed integer in frame: \"" + std::string(s) + "\"");
  }
  return value;
}
}  // namespace

Reply Reply::simple(std::string s) {
  Reply r;
  r.kind = Kind::Simple;
  r.text = std::move(s);
  return r;
}
Reply Reply::error(std::string s) {
  Reply r;
  r.kind = Kind::Error;
  r.text = std::move(s);
  return r;
}
Reply Reply::integer_reply(std::int64_t v) {
  Reply r;
  r.kind = Kind::Integer;
  r.integer = v;
  return r;
}
Reply Reply::bulk_reply(Bytes b) {
  Reply r;
  r.kind = Kind::Bulk;
  r.bulk = std::move(b);
  return r;
}
Reply Reply::null_bulk() {
  Reply r;
  r.kind = Kind::NullBulk;
  return r;
}
Reply Reply::array(std::vector<Reply> elems) {
  Reply r;
  r.kind = Kind::Array;
  r.elements = std::move(elems);
  return r;
}
Reply Reply::null_array() {
  Reply r;
  r.kind = Kind::NullArray;
  return r;
}

std::string encode_command(const std::vector<Bytes>& args) {
  std::string out;
  out += "*" + std::to_string(args.size()) + "\r\n";
  for (const Bytes& arg : args) {
    out += "$" + std::to_string(arg.size()) + "\r\n";
    out.append(reinterpret_cast<const char*>(arg.data()), arg.size());
    out += "\r\n";
  }
  return out;
}

std::string encode_command(const std::vector<std::string>& args) {
  std::vector<Bytes> raw;
  raw.reserve(args.size());
  for (const std::string& a : args) raw.emplace_back(a.begin(), a.end());
  return encode_command(raw);
}

std::string encode_reply(const Reply& reply) {
  switch (reply.kind) {
    case Reply::Kind::Simple:
      return "+" + reply.text + "\r\n";
    case Reply::Kind::Error:
      return "-" + reply.text + "\r\n";
    case Reply::Kind::Integer:
      return ":" + std::to_string(reply.integer) + "\r\n";
    case Reply::Kind::Bulk: {
      std::string out = "$" + std::to_string(reply.bulk.size()) + "\r\n";
      out.append(reinterpret_cast<const char*>(reply.bulk.data()), reply.bulk.size());
      out += "\r\n";
      return out;
    }
    case Reply::Kind::NullBulk:
      return "$-1\r\n";
    case Reply::Kind::Array: {
      std::string out = "*" + std::to_string(reply.elements.size()) + "\r\n";
      for (const Reply& e : reply.elements) out += encode_reply(e);
      return out;
    }
    case Reply::Kind::NullArray:
      return "*-1\r\n";
  }
  throw ProtocolError("unknown reply kind");
}

void Decoder::feed(std::span<const std::uint8_t> bytes) {
  buffer_.append(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

void Decoder::feed(std::string_view text) {
  buffer_.append(text.data(), text.size());
}

std::optional<std::string> Decoder::read_line(std::size_t& pos) {
  auto crlf = buffer_.find("\r\n", pos);
  if (crlf == std::string::npos) return std::nullopt;
  std::string line = buffer_.substr(pos, crlf - pos);
  pos = crlf + 2;
  return line;
}

std::optional<Reply> Decoder::parse_value(std::size_t& pos) {
  if (pos >= buffer_.size()) return std::nullopt;
  const char type = buffer_[pos];
  std::size_t p = pos + 1;
  switch (type) {
    case '+': {
      auto line = read_line(p);
      if (!line) return std::nullopt;
      pos = p;
      return Reply::simple(std::move(*line));
    }
    case '-': {
      auto line = read_line(p);
      if (!line) return std::nullopt;
      pos = p;
      return Reply::error(std::move(*line));
    }
    case ':': {
      auto line = read_line(p);
      if (!line) return std::nullopt;
      const std::int64_t v = parse_int(*line);
      pos = p;
      return Reply::integer_reply(v);
    }
    case '$': {
      auto line = read_line(p);
      if (!line) return std::nullopt;
      const std::int64_t len = parse_int(*line);
      if (len == -1) {
        pos = p;
        return Reply::null_bulk();
      }
      if (len < 0 || len > kMaxBulkLen) {
        throw ProtocolError("bulk length out of range: " + std::to_string(len));
      }
      if (buffer_.size() - p < static_cast<std::size_t>(len) + 2) return std::nullopt;
      Bytes data(buffer_.begin() + static_cast<std::ptrdiff_t>(p),
                 buffer_.begin() + static_cast<std::ptrdiff_t>(p + len));
      if (buffer_[p + len] != '\r' || buffer_[p + len + 1] != '\n') {
        throw ProtocolError("bulk string missing CRLF terminator");
      }
      pos = p + len + 2;
      return Reply::bulk_reply(std::move(data));
    }
    case '*': {
      auto line = read_line(p);
      if (!line) return std::nullopt;
      const std::int64_t count = parse_int(*line);
      if (count == -1) {
        pos = p;
        return Reply::null_array();
      }
      if (count < 0 || count > kMaxArrayLen) {
        throw ProtocolError("array length out of range: " + std::to_string(count));
      }
      std::vector<Reply> elems;
      elems.reserve(static_cast<std::size_t>(count));
      for (std::int64_t i = 0; i < count; ++i) {
        auto elem = parse_value(p);
        if (!elem) return std::nullopt;
        elems.push_back(std::move(*elem));
      }
      pos = p;
      return Reply::array(std::move(elems));
    }
    default: {
      static constexpr char kHex[] = "0123456789abcdef";
      const auto b = static_cast<unsigned char>(type);
      std::string byte_hex{kHex[b >> 4], kHex[b & 0x0f]};
      throw ProtocolError("unexpected frame type byte: 0x" + byte_hex);
    }
  }
}

std::optional<Reply> Decoder::next() {
  std::size_t pos = consumed_;
  auto value = parse_value(pos);
  if (!value) return std::nullopt;
  consumed_ = pos;
  // Compact once the consumed prefix dominates the buffer.
  if (consumed_ > 4096 && consumed_ * 2 > buffer_.size()) {
    buffer_.erase(0, consumed_);
    consumed_ = 0;
  }
  return value;
}

std::optional<std::vector<Bytes>> command_args(const Reply& reply) {
  if (reply.kind != Reply::Kind::Array) return std::nullopt;
  std::vector<Bytes> args;
  args.reserve(reply.elements.size());
  for (const Reply& e : reply.elements) {
    if (e.kind != Reply::Kind::Bulk) return std::nullopt;
    args.push_back(e.bulk);
  }
  return args;
}

}  // namespace semfuzz::broker::resp
