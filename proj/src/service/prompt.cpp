#include "service/prompt.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"
#include "service/response_parser.hpp"

namespace semfuzz::service {

namespace {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TemplateError("prompt template missing: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void replace_all(std::string& text, std::string_view placeholder, std::string_view value) {
  std::size_t pos = 0;
  while ((pos = text.find(placeholder, pos)) != std::string::npos) {
    text.replace(pos, placeholder.size(), value);
    pos += value.size();
  }
}

void require_placeholder(const std::string& text, std::string_view placeholder,
                         const std::string& file) {
  if (text.find(placeholder) == std::string::npos) {
    throw TemplateError(file + ": missing placeholder " + std::string(placeholder));
  }
}

std::string render_examples(int shot,
                            const std::vector<std::pair<std::string, std::string>>& pool) {
  std::ostringstream os;
  if (shot == 0) {
    os << "Example Output (format skeleton only, no concrete mutation):\n"
       << "Analysis:\n"
       << "<your step-by-step reasoning: structure found, fields chosen, mutations applied>\n"
       << "Final Output:\n"
       << "<the mutated hexadecimal string, nothing else>\n";
    return os.str();
  }
  for (int i = 0; i < shot; ++i) {
    os << "Example " << (i + 1) << ":\n"
       << "Analysis:\n"
       << pool[static_cast<std::size_t>(i)].first << "\n"
       << "Final Output:\n"
       << pool[static_cast<std::size_t>(i)].second << "\n";
    if (i + 1 < shot) os << "\n";
  }
  return os.str();
}

}  // namespace

PromptTemplates PromptTemplates::load(const std::filesystem::path& prompt_dir) {
  PromptTemplates t;
  t.system_text_ = read_text_file(prompt_dir / "system.txt");
  t.user_template_ = read_text_file(prompt_dir / "user.txt");

  if (t.system_text_.find(kStrictFormatMarker) == std::string::npos) {
    throw TemplateError("system.txt: missing \"" + std::string(kStrictFormatMarker) +
                        "\" section");
  }
  require_placeholder(t.user_template_, "{input_buffer}", "user.txt");
  require_placeholder(t.user_template_, "{library_info}", "user.txt");
  require_placeholder(t.user_template_, "{examples}", "user.txt");

  const auto examples_dir = prompt_dir / "examples";
  if (std::filesystem::is_directory(examples_dir)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(examples_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      const std::string text = read_text_file(file);
      const LlmResponse parsed = parse_response(text);
      if (parsed.status != QueryStatus::Ok || !parsed.analysis) {
        throw TemplateError(file.string() +
                            ": example must contain an Analysis section and a valid "
                            "hexadecimal Final Output section");
      }
      t.pool_.emplace_back(*parsed.analysis, *parsed.final_output_hex);
    }
  }
  return t;
}

PromptBundle PromptTemplates::build(const std::string& head_hex,
                                    const std::string& library_info, int shot) const {
  if (shot != 0 && shot != 1 && shot != 3) {
    throw TemplateError("shot count must be one of {0, 1, 3}, got " + std::to_string(shot));
  }
  if (static_cast<std::size_t>(shot) > pool_.size()) {
    throw TemplateError("example pool holds " + std::to_string(pool_.size()) +
                        " entries, need " + std::to_string(shot));
  }
  PromptBundle bundle;
  bundle.system_text = system_text_;
  bundle.shot = shot;
  bundle.input_hex = head_hex;
  bundle.examples.assign(pool_.begin(), pool_.begin() + shot);

  std::string user = user_template_;
  replace_all(user, "{input_buffer}", head_hex);
  replace_all(user, "{library_info}",
              library_info.empty() ? "(no library context available)" : library_info);
  replace_all(user, "{examples}", render_examples(shot, pool_));
  bundle.user_text = std::move(user);
  return bundle;
}

}  // namespace semfuzz::service
