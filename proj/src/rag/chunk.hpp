#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace foamagent::rag {

enum class ChunkKind { Architecture, FileContext, Allrun };

std::string_view to_string(ChunkKind kind) noexcept;
ChunkKind chunk_kind_from_string(std::string_view name);

inline constexpr std::string_view kArchitectureBegin = "###case begin:";
inline constexpr std::string_view kArchitectureEnd = "case end.###";
inline constexpr std::string_view kFileBegin = "``input_file_begin:";
inline constexpr std::string_view kFileEnd = "input_file_end.``";

/// Case-level metadata shared by every chunk of one tutorial case.
struct CaseInfo {
  std::string name;
  std::string domain;
  std::string category;
  std::string solver;

  bool operator==(const CaseInfo&) const = default;
};

/// One retrievable unit of a sub-database. `body` is the verbatim text between
/// the begin and end delimiters; every other field is derived from it.
struct TutorialChunk {
  std::string id;
  ChunkKind kind = ChunkKind::Architecture;
  CaseInfo info;
  std::optional<std::string> file_name;
  std::optional<std::string> folder;
  std::string body;
  std::vector<double> embedding;

  /// Architecture chunks only: (file, folder) pairs of the case layout.
  std::vector<std::pair<std::string, std::string>> input_files;

  bool operator==(const TutorialChunk&) const = default;
};

std::string make_chunk_id(ChunkKind kind, std::string_view case_name,
                          const std::optional<std::string>& folder,
                          const std::optional<std::string>& file_name);

/// Parses a sub-database document. Embeddings are left empty.
/// Throws UnterminatedChunk, MissingHeaderField, DuplicateChunk.
std::vector<TutorialChunk> parse_chunk_stream(std::string_view doc, ChunkKind kind);

/// Delimited text of one chunk, as stored on disk and shown to the LLM.
std::string serialize_chunk(const TutorialChunk& chunk);

/// Chunks separated by a blank line; re-parses to the same list.
std::string serialize_chunk_stream(std::span<const TutorialChunk> chunks);

TutorialChunk make_architecture_chunk(const CaseInfo& info,
                                      const std::vector<std::pair<std::string, std::string>>& files);
TutorialChunk make_file_chunk(const CaseInfo& info, std::string_view folder,
                              std::string_view file_name, std::string_view content);
TutorialChunk make_allrun_chunk(const CaseInfo& info, std::string_view script);

/// Content of a FileContext/Allrun chunk without its header line.
std::string chunk_content(const TutorialChunk& chunk);

}  // namespace foamagent::rag
