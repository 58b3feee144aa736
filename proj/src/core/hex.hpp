#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "core/types.hpp"

namespace semfuzz {

/// Lowercase hex, two characters per byte.
std::string hex_encode(std::span<const std::uint8_t> bytes);
inline std::string hex_encode(const Bytes& b) { return hex_encode(as_span(b)); }

/// Strict decode: even length, hex digits only. nullopt otherwise.
std::optional<Bytes> hex_decode(std::string_view text);

/// Decode with the fixups applied to model output: whitespace is stripped,
/// then an odd-length string gets a single trailing "0" appended. nullopt when
/// non-hex characters remain (the caller maps that to HexError).
std::optional<Bytes> hex_decode_lenient(std::string_view text);

}  // namespace semfuzz
