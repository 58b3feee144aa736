#include "service/response_parser.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "core/hex.hpp"

namespace semfuzz::service {

namespace {

constexpr std::string_view kFinalHeading = "final output";
constexpr std::string_view kAnalysisHeading = "analysis";

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Markdown decoration that may sit between a heading and its content.
bool is_decoration(char c) {
  switch (c) {
    case ' ': case '\t': case '\r': case '\n':
    case ':': case '*': case '#': case '-': case '_':
    case '=': case '"': case '\'':
      return true;
    default:
      return false;
  }
}

// Block following a heading: code-fence lines dropped, inline backticks
// removed, leading decoration skipped.
std::string clean_block(std::string_view tail) {
  std::string no_fences;
  no_fences.reserve(tail.size());
  std::stringstream ss{std::string(tail)};
  std::string line;
  while (std::getline(ss, line)) {
    const std::string t = trim(line);
    if (t.rfind("```", 0) == 0) continue;
    no_fences += line;
    no_fences += '\n';
  }
  std::erase(no_fences, '`');
  size_t start = 0;
  while (start < no_fences.size() && is_decoration(no_fences[start])) ++start;
  return no_fences.substr(start);
}

// Normalized hex string: whitespace removed, lowercased.
std::string normalize_hex(std::string_view block) {
  std::string out;
  out.reserve(block.size());
  for (char c : block) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

}  // namespace

LlmResponse parse_response(std::string_view raw_text) {
  LlmResponse response;
  response.raw_text = std::string(raw_text);

  if (is_blank(raw_text)) {
    response.status = QueryStatus::Empty;
    return response;
  }

  const std::string lower = lowercase(raw_text);
  const size_t heading = lower.rfind(kFinalHeading);
  if (heading == std::string::npos) {
    response.status = QueryStatus::FormatMismatch;
    return response;
  }

  // Chain-of-thought section, when present, precedes the final heading.
  const size_t analysis_pos = lower.find(kAnalysisHeading);
  if (analysis_pos != std::string::npos && analysis_pos < heading) {
    size_t start = analysis_pos + kAnalysisHeading.size();
    while (start < heading && is_decoration(raw_text[start])) ++start;
    const std::string text = trim(raw_text.substr(start, heading - start));
    if (!text.empty()) response.analysis = text;
  }

  const std::string block = clean_block(raw_text.substr(heading + kFinalHeading.size()));
  const std::string hex = normalize_hex(block);
  if (hex.empty()) {
    response.status = QueryStatus::FormatMismatch;
    return response;
  }
  if (!hex_decode_lenient(hex)) {
    response.status = QueryStatus::HexError;
    return response;
  }
  response.final_output_hex = hex;
  response.status = QueryStatus::Ok;
  return response;
}

}  // namespace semfuzz::service
