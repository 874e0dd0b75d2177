#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rag/chunk.hpp"
#include "rag/embedder.hpp"

namespace foamagent::rag {

struct IndexMetadata {
  std::string embedder;
  std::string source;
  std::string created_at;
};

/// Flat vector index over one sub-database. Immutable once built.
struct RetrievalIndex {
  ChunkKind kind = ChunkKind::Architecture;
  std::size_t dimension = 0;
  std::vector<TutorialChunk> entries;
  IndexMetadata metadata;

  const TutorialChunk* find(std::string_view id) const;
};

struct RetrievalHit {
  const TutorialChunk* chunk = nullptr;
  double score = 0.0;
};

/// Top min(top_k, size) hits by descending cosine score, ties by ascending id.
/// Throws EmptyIndex, InvalidArgument (top_k == 0).
std::vector<RetrievalHit> retrieve_similar(const RetrievalIndex& index, std::string_view query,
                                           std::size_t top_k, const Embedder& embedder);

/// Same ranking for a precomputed query vector.
std::vector<RetrievalHit> retrieve_by_vector(const RetrievalIndex& index,
                                             const std::vector<double>& query,
                                             std::size_t top_k);

/// Embeds every chunk of a parsed sub-database.
RetrievalIndex make_index(ChunkKind kind, std::vector<TutorialChunk> chunks,
                          const Embedder& embedder, std::string source);

/// The three sub-databases used by the pipeline.
struct Database {
  RetrievalIndex architecture;
  RetrievalIndex file_context;
  RetrievalIndex allrun;

  const RetrievalIndex& index(ChunkKind kind) const;
  std::size_t size() const;
};

struct IngestOptions {
  bool skip_malformed = false;
};

struct IngestReport {
  std::vector<std::string> cases;
  std::vector<std::string> skipped;  // "path: reason"
};

/// Walks a tutorials tree (every directory holding system/controlDict is a
/// case), builds the chunk lists, and embeds them.
/// Throws EmptyCorpus, MalformedCorpusFile (fail-fast), IoFailure.
Database build_database(const std::filesystem::path& root, const Embedder& embedder,
                        const IngestOptions& options = {}, IngestReport* report = nullptr);

/// Writes architecture.txt, file_context.txt, allrun.txt and a
/// <kind>.vectors.json sidecar for each.
void save_database(const Database& db, const std::filesystem::path& dir);

/// Throws EmbedderMismatch when a sidecar was produced by another embedder,
/// IndexCorrupt when sidecar and text disagree.
Database load_database(const std::filesystem::path& dir, const Embedder& embedder);

}  // namespace foamagent::rag
