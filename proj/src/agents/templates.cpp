#include "agents/templates.hpp"

#include <algorithm>

#include "common/embedded.hpp"
#include "common/error.hpp"
#include "common/text.hpp"

namespace foamagent::agents {

namespace {

bool is_name_char(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }

// Calls on_text for literal runs and on_name for `{name}` references.
template <typename Text, typename Name>
void scan(std::string_view body, Text on_text, Name on_name) {
  std::size_t pos = 0;
  std::size_t literal_start = 0;
  while ((pos = body.find('{', pos)) != std::string_view::npos) {
    std::size_t end = pos + 1;
    while (end < body.size() && is_name_char(body[end])) ++end;
    if (end < body.size() && body[end] == '}' && end > pos + 1) {
      on_text(body.substr(literal_start, pos - literal_start));
      on_name(body.substr(pos + 1, end - pos - 1));
      pos = end + 1;
      literal_start = pos;
    } else {
      ++pos;
    }
  }
  on_text(body.substr(literal_start));
}

}  // namespace

std::string_view to_string(TemplateId id) noexcept {
  switch (id) {
    case TemplateId::CreateArchitecture: return "CreateArchitecture";
    case TemplateId::WriteInputFile: return "WriteInputFile";
    case TemplateId::WriteAllrun: return "WriteAllrun";
    case TemplateId::ReviewArchitecture: return "ReviewArchitecture";
    case TemplateId::ReviewFileContext: return "ReviewFileContext";
    case TemplateId::FindSimilarQuery: return "FindSimilarQuery";
  }
  return "Unknown";
}

std::string template_file_name(TemplateId id) {
  switch (id) {
    case TemplateId::CreateArchitecture: return "create_architecture.txt";
    case TemplateId::WriteInputFile: return "write_input_file.txt";
    case TemplateId::WriteAllrun: return "write_allrun.txt";
    case TemplateId::ReviewArchitecture: return "review_architecture.txt";
    case TemplateId::ReviewFileContext: return "review_file_context.txt";
    case TemplateId::FindSimilarQuery: return "find_similar_query.txt";
  }
  return {};
}

const std::set<std::string, std::less<>>& declared_placeholders() {
  static const std::set<std::string, std::less<>> names = {
      "requirement", "tutorial", "tutorial_file", "file_list", "folder_list",  "commands",
      "runlists",    "error",    "command",       "file_name", "file_folder", "related_files"};
  return names;
}

std::vector<std::string> template_placeholders(std::string_view body) {
  std::vector<std::string> out;
  scan(
      body, [](std::string_view) {},
      [&out](std::string_view name) {
        if (!declared_placeholders().contains(name)) {
          throw Error(ErrorCode::UnknownPlaceholder,
                      "template references unknown placeholder {" + std::string(name) + "}",
                      std::string(name));
        }
        if (std::find(out.begin(), out.end(), name) == out.end()) out.emplace_back(name);
      });
  return out;
}

PromptTemplate load_template(TemplateId id, const std::optional<std::filesystem::path>& override_dir) {
  PromptTemplate tpl;
  tpl.id = id;
  const auto file = template_file_name(id);
  if (override_dir && std::filesystem::is_regular_file(*override_dir / file)) {
    tpl.body = text::read_file(*override_dir / file);
  } else if (auto embedded = embedded_file("templates/" + file)) {
    tpl.body = std::string(*embedded);
  } else {
    throw Error(ErrorCode::ConfigError, "no template " + file, file);
  }
  template_placeholders(tpl.body);
  return tpl;
}

std::string render_prompt(const PromptTemplate& tpl, const Bindings& bindings) {
  std::string out;
  out.reserve(tpl.body.size());
  scan(
      tpl.body, [&out](std::string_view literal) { out += literal; },
      [&](std::string_view name) {
        if (!declared_placeholders().contains(name)) {
          throw Error(ErrorCode::UnknownPlaceholder,
                      "template references unknown placeholder {" + std::string(name) + "}",
                      std::string(name));
        }
        const auto it = bindings.find(name);
        if (it == bindings.end()) {
          throw Error(ErrorCode::MissingBinding, "no binding for placeholder {" + std::string(name) + "}",
                      std::string(name));
        }
        out += it->second;
      });
  return out;
}

}  // namespace foamagent::agents
