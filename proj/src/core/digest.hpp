#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semfuzz {

/// SHA-256 of the given bytes as 64 lowercase hex characters.
std::string digest_hex(std::span<const std::uint8_t> bytes);

/// Convenience overload for text.
std::string digest_hex(std::string_view text);

}  // namespace semfuzz
