#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace semfuzz::service {

// Fully rendered prompt for one query. `examples` holds the k in-context
// (analysis, final_output_hex) pairs embedded in the user text; `input_hex`
// keeps the raw buffer hex so mock backends can act on it directly.
struct PromptBundle {
  std::string system_text;
  std::string user_text;
  int shot = 0;
  std::vector<std::pair<std::string, std::string>> examples;
  std::string input_hex;

  bool operator==(const PromptBundle&) const = default;
};

// Template files on disk:
//   <dir>/system.txt          role, task, step instructions, strict-format section
//   <dir>/user.txt            placeholders {input_buffer} {library_info} {examples}
//   <dir>/examples/*.txt      curated Analysis + Final Output blocks, sorted order
// Loading validates files, placeholders, the strict-format marker in the
// system text, and that every pool example parses cleanly; violations throw
// TemplateError.
class PromptTemplates {
public:
  static PromptTemplates load(const std::filesystem::path& prompt_dir);

  /// Renders a bundle for one query; deterministic for fixed inputs. Examples
  /// are the first k of the pool; k must not exceed the pool size.
  PromptBundle build(const std::string& head_hex, const std::string& library_info,
                     int shot) const;

  const std::vector<std::pair<std::string, std::string>>& example_pool() const { return pool_; }

private:
  std::string system_text_;
  std::string user_template_;
  std::vector<std::pair<std::string, std::string>> pool_;
};

inline constexpr const char* kStrictFormatMarker = "Strict Output Formatting Requirements";

}  // namespace semfuzz::service
