#include "agents/parsers.hpp"

#include <algorithm>
#include <set>

#include "common/error.hpp"
#include "common/text.hpp"

namespace foamagent::agents {

namespace {

constexpr std::string_view kTriple = "```";

bool is_tag_like(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '+' || c == '#' || c == '.' || c == '-';
  });
}

// Removes fence markers hugging a line of an Architect reply.
std::string_view strip_fence_marks(std::string_view line, bool& fence_only) {
  fence_only = false;
  line = text::trim(line);
  if (line.starts_with(kTriple)) {
    line = line.substr(kTriple.size());
    if (is_tag_like(text::trim(line))) {
      fence_only = true;
      return {};
    }
  }
  if (line.ends_with(kTriple)) line = line.substr(0, line.size() - kTriple.size());
  return text::trim(line);
}

struct RawSubtask {
  std::size_t line = 0;
  int index = 0;
  std::string text;
};

std::string trim_names_chars(std::string_view s) {
  constexpr std::string_view kJunk = " \t\r\n`'\"";
  const auto b = s.find_first_not_of(kJunk);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(kJunk);
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_names(std::string_view list) {
  std::vector<std::string> out;
  for (const auto& part : text::split(list, ',')) {
    auto name = trim_names_chars(part);
    if (!name.empty()) out.push_back(std::move(name));
  }
  return out;
}

}  // namespace

const Subtask* CaseArchitecture::find(std::string_view file_name) const {
  for (const auto& s : subtasks) {
    if (s.file_name == file_name) return &s;
  }
  return nullptr;
}

std::vector<std::string> CaseArchitecture::file_names() const {
  std::vector<std::string> out;
  for (const auto& s : subtasks) out.push_back(s.file_name);
  return out;
}

std::vector<std::string> CaseArchitecture::folders() const {
  std::vector<std::string> out;
  for (const auto& s : subtasks) out.push_back(s.folder);
  return out;
}

std::vector<Subtask> parse_subtask_list(std::string_view reply) {
  static const std::regex header_re(R"(splits?\s+into\s+(\d+)\s+subtasks?\s*:?)", std::regex::icase);
  static const std::regex line_re(R"(^subtask\s*(\d+)\s*:\s*(.*)$)", std::regex::icase);
  static const std::regex descriptor_re(R"(^case\s+(name|domain|category|solver)\s*:)",
                                        std::regex::icase);
  static const std::regex body_re(
      R"(^to\s+write\s+an?\s+openfoam\s+(\S+)\s+foam\s*file\s+in\s+(?:the\s+)?(\S+)\s+folder\b\s*(.*)$)",
      std::regex::icase);

  const auto lines = text::split_lines(reply);
  std::optional<std::size_t> declared;
  std::vector<RawSubtask> raw;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    bool fence_only = false;
    const std::string line(strip_fence_marks(lines[i], fence_only));
    if (fence_only || line.empty() || line == "...") continue;
    std::smatch m;
    if (!declared) {
      if (std::regex_search(line, m, header_re)) declared = std::stoul(m[1].str());
      continue;
    }
    if (std::regex_match(line, m, line_re)) {
      raw.push_back({i + 1, std::stoi(m[1].str()), m[2].str()});
    } else if (std::regex_search(line, descriptor_re)) {
      continue;
    } else if (!raw.empty()) {
      raw.back().text += ' ';
      raw.back().text += line;
    }
  }
  if (!declared) {
    throw Error(ErrorCode::NoHeader, "reply has no 'splits into N subtasks:' header");
  }

  std::vector<Subtask> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& r : raw) {
    std::smatch m;
    const std::string body(text::trim(r.text));
    if (!std::regex_match(body, m, body_re)) {
      throw Error(ErrorCode::MalformedSubtaskLine,
                  "line " + std::to_string(r.line) +
                      ": expected 'subtaskK: to Write a OpenFoam <file> foamfile in <folder> folder ...'",
                  std::to_string(r.line));
    }
    Subtask s;
    s.index = r.index;
    s.file_name = m[1].str();
    s.folder = m[2].str();
    std::string rest = m[3].str();
    const auto lowered = text::lower(rest);
    const auto req = lowered.find("requirement:");
    std::string echo(text::trim(req == std::string::npos ? std::string_view(rest)
                                                         : std::string_view(rest).substr(req + 12)));
    if (!echo.empty() && echo.back() == '.') echo.pop_back();
    s.requirement_echo = std::move(echo);
    if (!seen.emplace(s.file_name, s.folder).second) {
      throw Error(ErrorCode::DuplicateSubtask,
                  "line " + std::to_string(r.line) + ": " + s.file_name + " in " + s.folder +
                      " is listed twice",
                  s.folder + "/" + s.file_name);
    }
    out.push_back(std::move(s));
  }
  if (out.size() != *declared) {
    throw Error(ErrorCode::CountMismatch,
                "header declares " + std::to_string(*declared) + " subtasks, found " +
                    std::to_string(out.size()),
                std::to_string(out.size()));
  }
  return out;
}

std::string subtask_text(const Subtask& s) {
  return "to Write a OpenFoam " + s.file_name + " foamfile in " + s.folder +
         " folder that could be used to meet user requirement:" + s.requirement_echo + ".";
}

std::string serialize_subtask_list(const std::vector<Subtask>& subtasks) {
  std::string out = "splits into " + std::to_string(subtasks.size()) + " subtasks:\n";
  for (const auto& s : subtasks) {
    out += "subtask" + std::to_string(s.index) + ": " + subtask_text(s) + "\n";
  }
  return out;
}

CaseDescriptor parse_case_descriptor(std::string_view reply) {
  static const std::regex re(R"(^\s*`*\s*case\s+(name|domain|category|solver)\s*:\s*(.*?)\s*$)",
                             std::regex::icase);
  CaseDescriptor d;
  for (const auto raw : text::split_lines(reply)) {
    const std::string line(raw);
    std::smatch m;
    if (!std::regex_match(line, m, re)) continue;
    auto value = m[2].str();
    while (!value.empty() && value.back() == '`') value.pop_back();
    if (value.empty()) continue;
    const auto key = text::lower(m[1].str());
    auto& slot = key == "name" ? d.name : key == "domain" ? d.domain : key == "category" ? d.category : d.solver;
    if (!slot) slot = value;
  }
  return d;
}

std::string extract_fenced_block(std::string_view reply) {
  std::string_view delim = kTriple;
  auto open = reply.find(kTriple);
  if (open == std::string_view::npos) {
    delim = "``";
    open = reply.find(delim);
    if (open == std::string_view::npos) throw Error(ErrorCode::NoFence, "reply contains no fenced block");
  }
  const auto after = open + delim.size();
  const auto close_any = reply.find(delim, after);
  if (close_any == std::string_view::npos) {
    throw Error(ErrorCode::UnterminatedFence, "fenced block is never closed");
  }
  const auto newline = reply.find('\n', after);
  if (newline == std::string_view::npos || close_any < newline) {
    return std::string(reply.substr(after, close_any - after));
  }
  auto start = after;
  if (is_tag_like(text::trim(reply.substr(after, newline - after)))) start = newline + 1;
  const auto close = reply.find(delim, start);
  std::string content(reply.substr(start, close - start));
  if (content.ends_with('\n')) content.pop_back();
  if (content.ends_with('\r')) content.pop_back();
  return content;
}

ReviewTargets parse_review_targets(std::string_view reply) {
  const auto f_open = reply.find("###");
  const auto f_close = f_open == std::string_view::npos ? f_open : reply.find("###", f_open + 3);
  if (f_close == std::string_view::npos) {
    throw Error(ErrorCode::MissingFileMarkers, "reviewer reply lacks ###file list### markers");
  }
  const auto d_open = reply.find("``", f_close + 3);
  const auto d_close = d_open == std::string_view::npos ? d_open : reply.find("``", d_open + 2);
  if (d_close == std::string_view::npos) {
    throw Error(ErrorCode::MissingFolderMarkers, "reviewer reply lacks ``folder list`` markers");
  }
  ReviewTargets t;
  t.files = split_names(reply.substr(f_open + 3, f_close - f_open - 3));
  t.folders = split_names(reply.substr(d_open + 2, d_close - d_open - 2));
  if (t.files.size() != t.folders.size()) {
    throw Error(ErrorCode::ArityMismatch,
                std::to_string(t.files.size()) + " files but " + std::to_string(t.folders.size()) +
                    " folders in reviewer reply");
  }
  return t;
}

std::string_view to_string(ReviewTarget target) noexcept {
  return target == ReviewTarget::ArchitectureRevision ? "ArchitectureRevision" : "ContentRewrite";
}

std::vector<std::string> default_missing_file_patterns() {
  return {"cannot find file", "No such file", "file .* does not exist"};
}

ReviewDecision decide_review_action(const ReviewTargets& targets,
                                    const CaseArchitecture& architecture,
                                    std::string_view error_text,
                                    const std::vector<std::string>& missing_file_patterns) {
  const std::string error(error_text);
  bool missing_pattern = false;
  for (const auto& p : missing_file_patterns) {
    if (std::regex_search(error, std::regex(p, std::regex::icase))) {
      missing_pattern = true;
      break;
    }
  }

  ReviewDecision d;
  bool absent = false;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < targets.files.size(); ++i) {
    const auto& name = targets.files[i];
    if (!seen.insert(name).second) continue;
    if (name == "Allrun") {
      d.files.emplace_back(name, "");
    } else if (const auto* s = architecture.find(name)) {
      d.files.emplace_back(name, s->folder);
    } else {
      absent = true;
      d.files.emplace_back(name, i < targets.folders.size() ? targets.folders[i] : "");
    }
  }
  if (absent || missing_pattern) {
    d.target = ReviewTarget::ArchitectureRevision;
    return d;
  }
  if (d.files.empty()) {
    throw Error(ErrorCode::EmptyTargets,
                "reviewer named no files and the error does not indicate a missing file");
  }
  d.target = ReviewTarget::ContentRewrite;
  return d;
}

std::string truncate_error(std::string_view error, std::size_t budget) {
  if (error.size() <= budget) return std::string(error);
  auto is_continuation = [&](std::size_t i) {
    return i < error.size() && (static_cast<unsigned char>(error[i]) & 0xC0) == 0x80;
  };
  std::size_t head = budget / 4;
  std::size_t tail_start = error.size() - (budget - head);
  while (head > 0 && is_continuation(head)) --head;
  while (is_continuation(tail_start)) ++tail_start;
  const auto elided = tail_start - head;
  return std::string(error.substr(0, head)) + "\n... [" + std::to_string(elided) +
         " characters elided] ...\n" + std::string(error.substr(tail_start));
}

}  // namespace foamagent::agents
