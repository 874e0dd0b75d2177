#include "workspace/workspace.hpp"

#include <algorithm>
#include <regex>

#include "common/embedded.hpp"
#include "common/error.hpp"
#include "common/text.hpp"

namespace fs = std::filesystem;

namespace foamagent::workspace {

namespace {

struct LogicalLine {
  std::size_t number = 0;
  std::string text;
};

std::vector<LogicalLine> logical_lines(std::string_view script) {
  std::vector<LogicalLine> out;
  const auto lines = text::split_lines(script);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    LogicalLine l{i + 1, std::string(lines[i])};
    while (!l.text.empty() && l.text.back() == '\r') l.text.pop_back();
    while (!l.text.empty() && l.text.back() == '\\' && i + 1 < lines.size()) {
      l.text.pop_back();
      while (!l.text.empty() && (l.text.back() == ' ' || l.text.back() == '\t')) l.text.pop_back();
      l.text += ' ';
      l.text += text::trim(lines[++i]);
    }
    out.push_back(std::move(l));
  }
  return out;
}

bool is_boilerplate(std::string_view line) {
  if (line.starts_with("#!")) return true;
  if (line.starts_with("cd ${0%/*}") || line.starts_with("cd \"${0%/*}\"")) return true;
  if ((line.starts_with(". ") || line.starts_with("source ")) &&
      line.find("RunFunctions") != std::string_view::npos) {
    return true;
  }
  return line.starts_with("application=");
}

std::string strip_comment(std::string_view line) {
  const auto hash = line.find(" #");
  return std::string(text::trim(hash == std::string_view::npos ? line : line.substr(0, hash)));
}

std::vector<std::string> words(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

bool takes_value(std::string_view option) {
  return option == "-s" || option == "-l" || option == "-np" || option == "-suffix" ||
         option == "-log";
}

}  // namespace

FoamFile* CaseWorkspace::find(std::string_view file_name, std::string_view folder) {
  for (auto& f : files) {
    if (f.file_name == file_name && f.folder == folder) return &f;
  }
  return nullptr;
}

const FoamFile* CaseWorkspace::find(std::string_view file_name, std::string_view folder) const {
  return const_cast<CaseWorkspace*>(this)->find(file_name, folder);
}

void CaseWorkspace::upsert(FoamFile file) {
  if (auto* existing = find(file.file_name, file.folder)) {
    existing->content = std::move(file.content);
  } else {
    files.push_back(std::move(file));
  }
}

std::vector<fs::path> materialize_case(const CaseWorkspace& workspace) {
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& f : workspace.files) {
    if (f.file_name.empty() || f.file_name.find('/') != std::string::npos ||
        f.file_name.find('\\') != std::string::npos || f.file_name == "." || f.file_name == "..") {
      throw Error(ErrorCode::InvalidFoamFile, "invalid file name '" + f.file_name + "'", f.file_name);
    }
    if (f.folder.find("..") != std::string::npos || (!f.folder.empty() && f.folder.front() == '/')) {
      throw Error(ErrorCode::InvalidFoamFile, "invalid folder '" + f.folder + "'", f.folder);
    }
    if (f.content.empty()) {
      throw Error(ErrorCode::InvalidFoamFile, f.folder + "/" + f.file_name + " has no content",
                  f.folder + "/" + f.file_name);
    }
    if (!seen.emplace(f.folder, f.file_name).second) {
      throw Error(ErrorCode::DuplicateFile, f.folder + "/" + f.file_name + " appears twice",
                  f.folder + "/" + f.file_name);
    }
  }
  std::vector<fs::path> written;
  for (const auto& f : workspace.files) {
    const auto path = workspace.root / f.folder / f.file_name;
    text::write_file(path, f.content);
    written.push_back(path);
  }
  if (workspace.allrun) {
    const auto path = workspace.root / "Allrun";
    text::write_file(path, *workspace.allrun);
    std::error_code ec;
    fs::permissions(path,
                    fs::perms::owner_all | fs::perms::group_read | fs::perms::group_exec |
                        fs::perms::others_read | fs::perms::others_exec,
                    ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot chmod " + path.string(), path.string());
    written.push_back(path);
  }
  return written;
}

CaseWorkspace read_case_tree(const fs::path& root) {
  CaseWorkspace ws;
  ws.root = root;
  std::vector<fs::path> paths;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) {
    const auto rel = fs::relative(path, root);
    if (!rel.has_parent_path()) {
      if (rel == "Allrun") ws.allrun = text::read_file(path);
      continue;
    }
    ws.files.push_back({rel.filename().string(), rel.parent_path().generic_string(),
                        text::read_file(path)});
  }
  return ws;
}

std::vector<std::string> validate_foamfile_header(std::string_view content) {
  static const std::regex open_re(R"(\bFoamFile\s*\{)");
  static const std::regex class_re(R"((^|[\s;{])class\s+[^;\s]+\s*;)");
  static const std::regex object_re(R"((^|[\s;{])object\s+[^;\s]+\s*;)");
  const std::string s(content);
  std::smatch m;
  if (!std::regex_search(s, m, open_re)) return {"missing FoamFile header"};
  const auto body_start = static_cast<std::size_t>(m.position(0) + m.length(0));
  const auto close = s.find('}', body_start);
  if (close == std::string::npos) return {"unterminated FoamFile header"};
  const auto block = s.substr(body_start, close - body_start);
  std::vector<std::string> violations;
  if (!std::regex_search(block, class_re)) violations.emplace_back("missing class");
  if (!std::regex_search(block, object_re)) violations.emplace_back("missing object");
  return violations;
}

NameSet parse_whitelist(std::string_view text) {
  NameSet out;
  for (const auto raw : text::split_lines(text)) {
    auto line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (!line.empty()) out.emplace(line);
  }
  return out;
}

const NameSet& default_command_whitelist() {
  static const NameSet set = parse_whitelist(embedded_file("whitelists/commands.txt").value_or(""));
  return set;
}

const NameSet& default_run_whitelist() {
  static const NameSet set =
      parse_whitelist(embedded_file("whitelists/run_applications.txt").value_or(""));
  return set;
}

std::vector<AllrunStep> allrun_steps(std::string_view script) {
  std::vector<AllrunStep> steps;
  for (const auto& l : logical_lines(script)) {
    const auto trimmed = text::trim(l.text);
    if (trimmed.empty() || trimmed.starts_with('#') || is_boilerplate(trimmed)) continue;
    const auto command = strip_comment(trimmed);
    const auto w = words(command);
    if (w.empty()) continue;
    AllrunStep step;
    step.line = l.number;
    step.command = command;
    if (w[0] == "runApplication" || w[0] == "runParallel") {
      step.run_helper = true;
      for (std::size_t i = 1; i < w.size(); ++i) {
        if (w[i].starts_with('-')) {
          if (takes_value(w[i])) ++i;
          continue;
        }
        step.program = w[i];
        break;
      }
    } else {
      step.program = w[0];
    }
    steps.push_back(std::move(step));
  }
  return steps;
}

std::vector<std::string> validate_allrun_script(std::string_view script,
                                                const NameSet& command_whitelist,
                                                const NameSet& run_whitelist) {
  std::vector<std::string> violations;
  bool runs_application = false;
  for (const auto& step : allrun_steps(script)) {
    const auto where = "line " + std::to_string(step.line) + ": ";
    if (step.run_helper) {
      if (step.program.empty()) {
        violations.push_back(where + "'" + step.command + "' names no application");
      } else if (!run_whitelist.contains(step.program)) {
        violations.push_back(where + "'" + step.program + "' is not in the run list: " + step.command);
      } else {
        runs_application = true;
      }
    } else if (!command_whitelist.contains(step.program)) {
      violations.push_back(where + "'" + step.program + "' is not in the command list: " +
                           step.command);
    }
  }
  if (!runs_application) violations.emplace_back("no application invocation");
  return violations;
}

std::optional<std::string> dictionary_entry(std::string_view content, std::string_view key) {
  for (const auto raw : text::split_lines(content)) {
    const auto line = text::trim(raw);
    if (!line.starts_with(key) || line.size() == key.size()) continue;
    const char next = line[key.size()];
    if (next != ' ' && next != '\t') continue;
    auto value = text::trim(line.substr(key.size()));
    const auto semi = value.find(';');
    if (semi == std::string_view::npos) continue;
    value = text::trim(value.substr(0, semi));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (!value.empty()) return std::string(value);
  }
  return std::nullopt;
}

CodeStats collect_code_stats(const CaseWorkspace& workspace) {
  CodeStats stats;
  stats.file_count = workspace.files.size();
  for (const auto& f : workspace.files) stats.total_lines += text::count_lines(f.content);
  if (stats.file_count > 0) {
    stats.lines_per_file = static_cast<double>(stats.total_lines) / static_cast<double>(stats.file_count);
  }
  return stats;
}

}  // namespace foamagent::workspace
