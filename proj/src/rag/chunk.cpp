#include "rag/chunk.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "common/error.hpp"
#include "common/text.hpp"

namespace foamagent::rag {

namespace {

constexpr std::string_view kCaseFields[] = {"case name:", "case domain:", "case category:",
                                            "case solver:"};

std::string header_tail(const CaseInfo& info) {
  return "of case " + info.name + " (domain: " + info.domain + ", category: " + info.category +
         ", solver:" + info.solver + "):\n";
}

// Extracts the 'key': 'value' pairs of the folder map, in order.
std::vector<std::pair<std::string, std::string>> parse_folder_map(std::string_view body) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto start = body.find("corresponding input folder:");
  if (start == std::string_view::npos) return out;
  const auto open = body.find('{', start);
  const auto close = body.find('}', open == std::string_view::npos ? start : open);
  if (open == std::string_view::npos || close == std::string_view::npos) return out;
  const std::string map(body.substr(open + 1, close - open - 1));
  static const std::regex pair_re(R"('([^']*)'\s*:\s*'([^']*)')");
  for (std::sregex_iterator it(map.begin(), map.end(), pair_re), end; it != end; ++it) {
    out.emplace_back((*it)[1].str(), (*it)[2].str());
  }
  return out;
}

std::vector<std::string> parse_name_list(std::string_view body) {
  std::vector<std::string> out;
  const auto start = body.find("case input name:");
  if (start == std::string_view::npos) return out;
  const auto open = body.find('[', start);
  const auto close = body.find(']', open == std::string_view::npos ? start : open);
  if (open == std::string_view::npos || close == std::string_view::npos) return out;
  const std::string list(body.substr(open + 1, close - open - 1));
  static const std::regex item_re(R"('([^']*)')");
  for (std::sregex_iterator it(list.begin(), list.end(), item_re), end; it != end; ++it) {
    out.push_back((*it)[1].str());
  }
  return out;
}

TutorialChunk parse_architecture_body(std::string_view body) {
  TutorialChunk chunk;
  chunk.kind = ChunkKind::Architecture;
  chunk.body = std::string(body);
  std::string* targets[] = {&chunk.info.name, &chunk.info.domain, &chunk.info.category,
                            &chunk.info.solver};
  bool have_name = false;
  for (const auto raw : text::split_lines(body)) {
    const auto line = text::trim(raw);
    for (std::size_t i = 0; i < std::size(kCaseFields); ++i) {
      if (line.starts_with(kCaseFields[i])) {
        *targets[i] = std::string(text::trim(line.substr(kCaseFields[i].size())));
        if (i == 0) have_name = true;
      }
    }
  }
  if (!have_name || chunk.info.name.empty()) {
    throw Error(ErrorCode::MissingHeaderField, "architecture chunk lacks a 'case name:' line",
                "case name");
  }
  chunk.input_files = parse_folder_map(body);
  if (chunk.input_files.empty()) {
    for (auto& name : parse_name_list(body)) chunk.input_files.emplace_back(std::move(name), "");
  }
  chunk.id = make_chunk_id(ChunkKind::Architecture, chunk.info.name, std::nullopt, std::nullopt);
  return chunk;
}

TutorialChunk parse_file_body(std::string_view body, ChunkKind kind) {
  TutorialChunk chunk;
  chunk.kind = kind;
  chunk.body = std::string(body);

  const auto header_end = body.find("):");
  if (body.find("of case ") == std::string_view::npos || header_end == std::string_view::npos) {
    throw Error(ErrorCode::MissingHeaderField, "file chunk header lacks 'of case <name>'",
                "case name");
  }
  const std::string header(body.substr(0, header_end + 2));
  static const std::regex file_re(
      R"(^\s*input file (\S+) in (\S+) folder of case (\S+)\s*\(domain:\s*([^,]*),\s*category:\s*([^,]*),\s*solver:\s*([^)]*)\):$)");
  static const std::regex allrun_re(
      R"(^\s*linux execution command allrun file of case (\S+)\s*\(domain:\s*([^,]*),\s*category:\s*([^,]*),\s*solver:\s*([^)]*)\):$)");
  std::smatch m;
  if (kind == ChunkKind::FileContext) {
    if (!std::regex_match(header, m, file_re)) {
      throw Error(ErrorCode::MissingHeaderField,
                  "file chunk header must read 'input file <name> in <folder> folder of case ...'",
                  "file name");
    }
    chunk.file_name = m[1].str();
    chunk.folder = m[2].str();
    chunk.info = {m[3].str(), std::string(text::trim(m[4].str())),
                  std::string(text::trim(m[5].str())), std::string(text::trim(m[6].str()))};
  } else {
    if (!std::regex_match(header, m, allrun_re)) {
      throw Error(ErrorCode::MissingHeaderField,
                  "allrun chunk header must read 'linux execution command allrun file of case ...'",
                  "case name");
    }
    chunk.file_name = "Allrun";
    chunk.info = {m[1].str(), std::string(text::trim(m[2].str())),
                  std::string(text::trim(m[3].str())), std::string(text::trim(m[4].str()))};
  }
  chunk.id = make_chunk_id(kind, chunk.info.name, chunk.folder, chunk.file_name);
  return chunk;
}

}  // namespace

std::string_view to_string(ChunkKind kind) noexcept {
  switch (kind) {
    case ChunkKind::Architecture: return "architecture";
    case ChunkKind::FileContext: return "file_context";
    case ChunkKind::Allrun: return "allrun";
  }
  return "unknown";
}

ChunkKind chunk_kind_from_string(std::string_view name) {
  if (name == "architecture") return ChunkKind::Architecture;
  if (name == "file_context") return ChunkKind::FileContext;
  if (name == "allrun") return ChunkKind::Allrun;
  throw Error(ErrorCode::InvalidArgument, "unknown chunk kind '" + std::string(name) + "'");
}

std::string make_chunk_id(ChunkKind kind, std::string_view case_name,
                          const std::optional<std::string>& folder,
                          const std::optional<std::string>& file_name) {
  std::string id(to_string(kind));
  id += '/';
  id += case_name;
  if (kind == ChunkKind::FileContext) {
    id += '/';
    id += folder.value_or("");
    id += '/';
    id += file_name.value_or("");
  }
  return id;
}

std::vector<TutorialChunk> parse_chunk_stream(std::string_view doc, ChunkKind kind) {
  const bool arch = kind == ChunkKind::Architecture;
  const auto begin_marker = arch ? kArchitectureBegin : kFileBegin;
  const auto end_marker = arch ? kArchitectureEnd : kFileEnd;

  std::vector<TutorialChunk> chunks;
  std::set<std::string> ids;
  std::size_t pos = 0;
  while (true) {
    const auto begin = doc.find(begin_marker, pos);
    if (begin == std::string_view::npos) break;
    const auto body_start = begin + begin_marker.size();
    const auto end = doc.find(end_marker, body_start);
    const auto next_begin = doc.find(begin_marker, body_start);
    if (end == std::string_view::npos || (next_begin != std::string_view::npos && next_begin < end)) {
      const auto line = 1 + std::count(doc.begin(), doc.begin() + static_cast<std::ptrdiff_t>(begin), '\n');
      throw Error(ErrorCode::UnterminatedChunk,
                  "chunk starting on line " + std::to_string(line) + " has no '" +
                      std::string(end_marker) + "'",
                  std::to_string(line));
    }
    const auto body = doc.substr(body_start, end - body_start);
    auto chunk = arch ? parse_architecture_body(body) : parse_file_body(body, kind);
    if (!ids.insert(chunk.id).second) {
      throw Error(ErrorCode::DuplicateChunk, "duplicate chunk " + chunk.id, chunk.id);
    }
    chunks.push_back(std::move(chunk));
    pos = end + end_marker.size();
  }
  return chunks;
}

std::string serialize_chunk(const TutorialChunk& chunk) {
  if (chunk.kind == ChunkKind::Architecture) {
    return std::string(kArchitectureBegin) + chunk.body + std::string(kArchitectureEnd);
  }
  return std::string(kFileBegin) + chunk.body + std::string(kFileEnd);
}

std::string serialize_chunk_stream(std::span<const TutorialChunk> chunks) {
  std::string out;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (i) out += "\n\n";
    out += serialize_chunk(chunks[i]);
  }
  if (!chunks.empty()) out += '\n';
  return out;
}

TutorialChunk make_architecture_chunk(const CaseInfo& info,
                                      const std::vector<std::pair<std::string, std::string>>& files) {
  std::vector<std::string> names;
  std::string folders;
  for (std::size_t i = 0; i < files.size(); ++i) {
    names.push_back(files[i].first);
    if (i) folders += ", ";
    folders += "'" + files[i].first + "': '" + files[i].second + "'";
  }
  std::string body = "\n";
  body += "case name: " + info.name + "\n";
  body += "case domain: " + info.domain + "\n";
  body += "case category: " + info.category + "\n";
  body += "case solver: " + info.solver + "\n";
  body += "case input name:" + text::python_list(names) + "\n";
  body += "corresponding input folder: {" + folders + "}\n";
  return parse_architecture_body(body);
}

TutorialChunk make_file_chunk(const CaseInfo& info, std::string_view folder,
                              std::string_view file_name, std::string_view content) {
  std::string body = " input file " + std::string(file_name) + " in " + std::string(folder) +
                     " folder " + header_tail(info);
  body += content;
  if (body.back() != '\n') body += '\n';
  return parse_file_body(body, ChunkKind::FileContext);
}

TutorialChunk make_allrun_chunk(const CaseInfo& info, std::string_view script) {
  std::string body = " linux execution command allrun file " + header_tail(info);
  body += script;
  if (body.back() != '\n') body += '\n';
  return parse_file_body(body, ChunkKind::Allrun);
}

std::string chunk_content(const TutorialChunk& chunk) {
  if (chunk.kind == ChunkKind::Architecture) return chunk.body;
  const auto header_end = chunk.body.find("):");
  if (header_end == std::string::npos) return chunk.body;
  auto start = header_end + 2;
  if (start < chunk.body.size() && chunk.body[start] == '\n') ++start;
  return chunk.body.substr(start);
}

}  // namespace foamagent::rag
