#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace foamagent::agents {

enum class TemplateId {
  CreateArchitecture,
  WriteInputFile,
  WriteAllrun,
  ReviewArchitecture,
  ReviewFileContext,
  FindSimilarQuery,
};

std::string_view to_string(TemplateId id) noexcept;

/// Data file name of a template, e.g. "create_architecture.txt".
std::string template_file_name(TemplateId id);

/// Names a template body may reference as `{name}`.
const std::set<std::string, std::less<>>& declared_placeholders();

struct PromptTemplate {
  TemplateId id = TemplateId::CreateArchitecture;
  std::string body;
};

/// Placeholders referenced by `body`, in order of first appearance.
/// Throws UnknownPlaceholder for a `{name}` outside the declared set.
std::vector<std::string> template_placeholders(std::string_view body);

/// Loads a template from `override_dir` when it holds the file, else from the
/// copy compiled into the library. The body is checked for unknown
/// placeholders.
PromptTemplate load_template(TemplateId id,
                             const std::optional<std::filesystem::path>& override_dir = {});

using Bindings = std::map<std::string, std::string, std::less<>>;

/// Single-pass substitution: binding values are inserted verbatim and never
/// rescanned. Throws MissingBinding naming the first unbound placeholder.
std::string render_prompt(const PromptTemplate& tpl, const Bindings& bindings);

}  // namespace foamagent::agents
