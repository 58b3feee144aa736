#pragma once

#include <optional>
#include <string>

#include "core/query_log.hpp"

namespace semfuzz::service {

// Structured view of one model response. The hex in `final_output_hex` is
// already cleaned (whitespace and code fences stripped).
struct LlmResponse {
  std::string raw_text;
  std::optional<std::string> analysis;
  std::optional<std::string> final_output_hex;
  QueryStatus status = QueryStatus::Empty;

  bool operator==(const LlmResponse&) const = default;
};

// Locates the last "Final Output" heading (case-insensitive, markdown
// tolerated), extracts the block after it, strips fences/whitespace, and
// validates the hex. Failures land in `status`, never in exceptions:
//   - empty text            -> Empty
//   - heading missing       -> FormatMismatch
//   - empty block           -> FormatMismatch
//   - non-hex residue       -> HexError
LlmResponse parse_response(std::string_view raw_text);

}  // namespace semfuzz::service
