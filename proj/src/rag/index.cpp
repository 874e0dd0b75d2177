#include "rag/index.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <map>
#include <set>
#include <tuple>

#include <json.hpp>

#include "common/error.hpp"
#include "common/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace foamagent::rag {

namespace {

constexpr ChunkKind kKinds[] = {ChunkKind::Architecture, ChunkKind::FileContext,
                                ChunkKind::Allrun};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct CorpusCase {
  fs::path dir;
  CaseInfo info;
  std::vector<std::pair<std::string, std::string>> files;  // (file, folder)
  std::map<std::pair<std::string, std::string>, std::string> contents;
  std::optional<std::string> allrun;
};

int folder_rank(const std::string& folder) {
  if (folder == "system") return 0;
  if (folder == "constant") return 1;
  if (folder == "0") return 2;
  return 3;
}

std::optional<std::string> controldict_application(std::string_view content) {
  for (const auto raw : text::split_lines(content)) {
    const auto line = text::trim(raw);
    if (!line.starts_with("application")) continue;
    auto rest = text::trim(line.substr(std::string_view("application").size()));
    if (rest.empty() || rest.back() != ';') continue;
    rest = text::trim(rest.substr(0, rest.size() - 1));
    if (!rest.empty()) return std::string(rest);
  }
  return std::nullopt;
}

// Returns an empty string when the file is usable, else the reason.
std::string malformed_reason(std::string_view content) {
  if (!text::is_valid_utf8(content)) return "not UTF-8 text";
  for (const auto marker : {kArchitectureBegin, kArchitectureEnd, kFileBegin, kFileEnd}) {
    if (content.find(marker) != std::string_view::npos) {
      return "contains the chunk delimiter '" + std::string(marker) + "'";
    }
  }
  return {};
}

std::vector<fs::path> find_case_dirs(const fs::path& root) {
  std::vector<fs::path> out;
  for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator();
       ++it) {
    if (!it->is_directory()) continue;
    if (fs::is_regular_file(it->path() / "system" / "controlDict")) {
      out.push_back(it->path());
      it.disable_recursion_pending();
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Returns nullopt when the case was skipped.
std::optional<CorpusCase> read_case(const fs::path& root, const fs::path& dir,
                                    const IngestOptions& options, IngestReport* report) {
  CorpusCase c;
  c.dir = dir;
  auto fail = [&](const fs::path& path, const std::string& reason) -> bool {
    if (!options.skip_malformed) {
      throw Error(ErrorCode::MalformedCorpusFile, path.string() + ": " + reason, path.string());
    }
    if (report) report->skipped.push_back(path.string() + ": " + reason);
    return false;
  };

  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), dir);
    if (rel.filename().string().starts_with('.')) continue;
    if (!rel.has_parent_path()) continue;  // Allrun, Allclean, READMEs
    files.push_back(entry.path());
  }

  std::optional<std::string> application;
  for (const auto& path : files) {
    const auto rel = fs::relative(path, dir);
    auto content = text::read_file(path);
    if (auto reason = malformed_reason(content); !reason.empty()) {
      fail(path, reason);
      continue;
    }
    const std::string folder = rel.parent_path().generic_string();
    const std::string name = rel.filename().string();
    if (folder == "system" && name == "controlDict") {
      application = controldict_application(content);
      if (!application) {
        fail(path, "controlDict declares no application");
        return std::nullopt;
      }
    }
    c.files.emplace_back(name, folder);
    c.contents[{name, folder}] = std::move(content);
  }
  if (!application) return std::nullopt;

  const auto allrun_path = dir / "Allrun";
  if (fs::is_regular_file(allrun_path)) {
    auto script = text::read_file(allrun_path);
    if (auto reason = malformed_reason(script); !reason.empty()) {
      fail(allrun_path, reason);
    } else {
      c.allrun = std::move(script);
    }
  }

  std::vector<std::string> parts;
  for (const auto& p : fs::relative(dir, root)) parts.push_back(p.string());
  c.info.name = parts.back();
  c.info.solver = *application;
  c.info.domain = parts.size() >= 2 ? parts.front() : "None";
  if (parts.size() >= 4) {
    c.info.category = text::join({parts.begin() + 2, parts.end() - 1}, "/");
  } else {
    c.info.category = "None";
  }

  std::sort(c.files.begin(), c.files.end(), [](const auto& a, const auto& b) {
    return std::tuple(folder_rank(a.second), a.second, a.first) <
           std::tuple(folder_rank(b.second), b.second, b.first);
  });
  return c;
}

json index_sidecar(const RetrievalIndex& index) {
  json vectors = json::object();
  for (const auto& chunk : index.entries) vectors[chunk.id] = chunk.embedding;
  return json{{"embedder", index.metadata.embedder},
              {"dimension", index.dimension},
              {"kind", std::string(to_string(index.kind))},
              {"source", index.metadata.source},
              {"created_at", index.metadata.created_at},
              {"vectors", std::move(vectors)}};
}

std::string text_file_name(ChunkKind kind) { return std::string(to_string(kind)) + ".txt"; }
std::string sidecar_file_name(ChunkKind kind) {
  return std::string(to_string(kind)) + ".vectors.json";
}

}  // namespace

const TutorialChunk* RetrievalIndex::find(std::string_view id) const {
  for (const auto& chunk : entries) {
    if (chunk.id == id) return &chunk;
  }
  return nullptr;
}

std::vector<RetrievalHit> retrieve_by_vector(const RetrievalIndex& index,
                                             const std::vector<double>& query,
                                             std::size_t top_k) {
  if (index.entries.empty()) throw Error(ErrorCode::EmptyIndex, "retrieval from an empty index");
  if (top_k == 0) throw Error(ErrorCode::InvalidArgument, "top_k must be at least 1");
  std::vector<RetrievalHit> hits;
  hits.reserve(index.entries.size());
  for (const auto& chunk : index.entries) {
    hits.push_back({&chunk, cosine_similarity(query, chunk.embedding)});
  }
  std::sort(hits.begin(), hits.end(), [](const RetrievalHit& a, const RetrievalHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.chunk->id < b.chunk->id;
  });
  hits.resize(std::min(top_k, hits.size()));
  return hits;
}

std::vector<RetrievalHit> retrieve_similar(const RetrievalIndex& index, std::string_view query,
                                           std::size_t top_k, const Embedder& embedder) {
  if (index.entries.empty()) throw Error(ErrorCode::EmptyIndex, "retrieval from an empty index");
  return retrieve_by_vector(index, embed_text(query, embedder), top_k);
}

RetrievalIndex make_index(ChunkKind kind, std::vector<TutorialChunk> chunks,
                          const Embedder& embedder, std::string source) {
  RetrievalIndex index;
  index.kind = kind;
  index.dimension = embedder.dimension();
  index.metadata = {embedder.identity(), std::move(source), utc_timestamp()};
  for (auto& chunk : chunks) {
    try {
      chunk.embedding = embed_text(serialize_chunk(chunk), embedder);
    } catch (const Error& e) {
      throw Error(e.code(), chunk.id + ": " + e.what(), chunk.id);
    }
  }
  index.entries = std::move(chunks);
  return index;
}

const RetrievalIndex& Database::index(ChunkKind kind) const {
  switch (kind) {
    case ChunkKind::Architecture: return architecture;
    case ChunkKind::FileContext: return file_context;
    case ChunkKind::Allrun: return allrun;
  }
  return architecture;
}

std::size_t Database::size() const {
  return architecture.entries.size() + file_context.entries.size() + allrun.entries.size();
}

Database build_database(const fs::path& root, const Embedder& embedder,
                        const IngestOptions& options, IngestReport* report) {
  if (!fs::is_directory(root)) {
    throw Error(ErrorCode::IoFailure, "corpus directory not found: " + root.string(),
                root.string());
  }
  std::vector<CorpusCase> cases;
  for (const auto& dir : find_case_dirs(root)) {
    if (auto c = read_case(root, dir, options, report)) cases.push_back(std::move(*c));
  }
  if (cases.empty()) {
    throw Error(ErrorCode::EmptyCorpus, "no tutorial cases under " + root.string(), root.string());
  }

  std::map<std::string, int> name_count;
  for (const auto& c : cases) ++name_count[c.info.name];
  std::set<std::string> used;
  for (auto& c : cases) {
    if (name_count[c.info.name] > 1) c.info.name += "_" + c.info.solver;
    std::string name = c.info.name;
    for (int i = 2; used.contains(name); ++i) name = c.info.name + "_" + std::to_string(i);
    c.info.name = name;
    used.insert(name);
  }

  std::vector<TutorialChunk> arch, files, allruns;
  for (const auto& c : cases) {
    arch.push_back(make_architecture_chunk(c.info, c.files));
    for (const auto& key : c.files) {
      files.push_back(make_file_chunk(c.info, key.second, key.first, c.contents.at(key)));
    }
    if (c.allrun) allruns.push_back(make_allrun_chunk(c.info, *c.allrun));
    if (report) report->cases.push_back(c.info.name);
  }

  Database db;
  const auto source = root.string();
  db.architecture = make_index(ChunkKind::Architecture, std::move(arch), embedder, source);
  db.file_context = make_index(ChunkKind::FileContext, std::move(files), embedder, source);
  db.allrun = make_index(ChunkKind::Allrun, std::move(allruns), embedder, source);
  return db;
}

void save_database(const Database& db, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string(), dir.string());
  for (const auto kind : kKinds) {
    const auto& index = db.index(kind);
    text::write_file(dir / text_file_name(kind), serialize_chunk_stream(index.entries));
    text::write_file(dir / sidecar_file_name(kind), index_sidecar(index).dump(1) + "\n");
  }
}

Database load_database(const fs::path& dir, const Embedder& embedder) {
  Database db;
  for (const auto kind : kKinds) {
    const auto text_path = dir / text_file_name(kind);
    const auto sidecar_path = dir / sidecar_file_name(kind);
    RetrievalIndex index;
    index.kind = kind;
    index.entries = parse_chunk_stream(text::read_file(text_path), kind);

    json sidecar;
    try {
      sidecar = json::parse(text::read_file(sidecar_path));
      index.metadata = {sidecar.at("embedder").get<std::string>(),
                        sidecar.value("source", std::string()),
                        sidecar.value("created_at", std::string())};
      index.dimension = sidecar.at("dimension").get<std::size_t>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::IndexCorrupt, sidecar_path.string() + ": " + e.what(),
                  sidecar_path.string());
    }
    if (index.metadata.embedder != embedder.identity()) {
      throw Error(ErrorCode::EmbedderMismatch,
                  sidecar_path.string() + " was built with embedder '" + index.metadata.embedder +
                      "', configured embedder is '" + embedder.identity() + "'",
                  sidecar_path.string());
    }
    const auto& vectors = sidecar.at("vectors");
    for (auto& chunk : index.entries) {
      const auto it = vectors.find(chunk.id);
      if (it == vectors.end()) {
        throw Error(ErrorCode::IndexCorrupt, sidecar_path.string() + " has no vector for " + chunk.id,
                    chunk.id);
      }
      chunk.embedding = it->get<std::vector<double>>();
      if (chunk.embedding.size() != index.dimension) {
        throw Error(ErrorCode::DimensionMismatch,
                    "vector for " + chunk.id + " has " + std::to_string(chunk.embedding.size()) +
                        " values, expected " + std::to_string(index.dimension),
                    chunk.id);
      }
    }
    if (vectors.size() != index.entries.size()) {
      throw Error(ErrorCode::IndexCorrupt,
                  sidecar_path.string() + " holds vectors for chunks missing from " +
                      text_path.string(),
                  sidecar_path.string());
    }
    switch (kind) {
      case ChunkKind::Architecture: db.architecture = std::move(index); break;
      case ChunkKind::FileContext: db.file_context = std::move(index); break;
      case ChunkKind::Allrun: db.allrun = std::move(index); break;
    }
  }
  return db;
}

}  // namespace foamagent::rag
