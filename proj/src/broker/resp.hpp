#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace semfuzz::broker::resp {

// RESP value as produced by the decoder: simple strings, errors, integers,
// bulk strings (including null), arrays (including null).
struct Reply {
  enum class Kind { Simple, Error, Integer, Bulk, NullBulk, Array, NullArray };

  Kind kind = Kind::NullBulk;
  std::string text;             // Simple / Error
  std::int64_t integer = 0;     // Integer
  Bytes bulk;                   // Bulk
  std::vector<Reply> elements;  // Array

  static Reply simple(std::string s);
  static Reply error(std::string s);
  static Reply integer_reply(std::int64_t v);
  static Reply bulk_reply(Bytes b);
  static Reply null_bulk();
  static Reply array(std::vector<Reply> elems);
  static Reply null_array();

  bool operator==(const Reply&) const = default;
};

/// Encodes a command as an array of bulk strings: `*N\r\n` then
/// `$len\r\n<bytes>\r\n` per argument.
std::string encode_command(const std::vector<Bytes>& args);
std::string encode_command(const std::vector<std::string>& args);

/// Encodes any reply value back to wire form.
std::string encode_reply(const Reply& reply);

// Incremental decoder. Feed raw bytes; next() yields one complete value at a
// time and throws ProtocolError on malformed frames.
class Decoder {
public:
  void feed(std::span<const std::uint8_t> bytes);
  void feed(std::string_view text);

  /// One complete value, or nullopt if more bytes are needed.
  std::optional<Reply> next();

  std::size_t buffered() const { return buffer_.size() - consumed_; }

private:
  std::optional<Reply> parse_value(std::size_t& pos);
  std::optional<std::string> read_line(std::size_t& pos);

  std::string buffer_;
  std::size_t consumed_ = 0;
};

/// Interprets a decoded client command (array of bulk strings) as an argument
/// vector; nullopt when the value has a different shape.
std::optional<std::vector<Bytes>> command_args(const Reply& reply);

}  // namespace semfuzz::broker::resp
