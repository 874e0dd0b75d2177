#include "rag/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "common/digest.hpp"
#include "common/error.hpp"
#include "common/text.hpp"

namespace foamagent::rag {

namespace {

const std::set<std::string, std::less<>> kStopwords = {
    "a",  "an", "and", "are", "as",   "at",   "be",    "by",    "do",   "for", "from", "in",
    "is", "it", "of",  "on",  "or",   "that", "the",   "this",  "to",   "was", "which",
    "while", "with", "using"};

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return is_lower(c) || is_upper(c); }
bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }

// Splits "rhoPimpleFoam2D" into rho, Pimple, Foam, 2, D and "RNGkEpsilon"
// into RN, Gk, Epsilon style parts at case and letter/digit boundaries.
std::vector<std::string_view> split_run(std::string_view run) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 1; i < run.size(); ++i) {
    const char p = run[i - 1];
    const char c = run[i];
    const char next = i + 1 < run.size() ? run[i + 1] : '\0';
    const bool boundary = (is_lower(p) && is_upper(c)) || (is_alpha(p) && is_digit(c)) ||
                          (is_digit(p) && is_alpha(c)) ||
                          (is_upper(p) && is_upper(c) && is_lower(next));
    if (boundary) {
      parts.push_back(run.substr(start, i - start));
      start = i;
    }
  }
  parts.push_back(run.substr(start));
  return parts;
}

void emit_run(std::string_view run, std::vector<std::string>& out) {
  auto keep = [&out](std::string token) {
    if (!kStopwords.contains(token)) out.push_back(std::move(token));
  };
  keep(text::lower(run));
  const auto parts = split_run(run);
  if (parts.size() > 1) {
    for (const auto part : parts) keep(text::lower(part));
  }
}

}  // namespace

std::vector<std::string> hashed_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = std::string_view::npos;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    const bool alnum = i < text.size() && is_alnum(text[i]);
    if (alnum && start == std::string_view::npos) {
      start = i;
    } else if (!alnum && start != std::string_view::npos) {
      emit_run(text.substr(start, i - start), out);
      start = std::string_view::npos;
    }
  }
  return out;
}

HashedEmbedder::HashedEmbedder(std::size_t dimension) : dimension_(dimension) {
  if (dimension_ == 0) throw Error(ErrorCode::InvalidArgument, "embedder dimension must be positive");
}

std::string HashedEmbedder::identity() const {
  return "hashed-bow-v1:" + std::to_string(dimension_);
}

std::vector<double> HashedEmbedder::embed(std::string_view text) const {
  if (text.empty()) throw Error(ErrorCode::EmptyText, "cannot embed empty text");
  std::map<std::string, int> counts;
  for (auto& token : hashed_tokens(text)) ++counts[std::move(token)];

  std::vector<double> v(dimension_, 0.0);
  for (const auto& [token, count] : counts) {
    const auto h = fnv1a64(token);
    const double weight = 1.0 + std::log(static_cast<double>(count));
    v[h % dimension_] += (h >> 63) ? -weight : weight;
  }
  double norm = 0.0;
  for (const double x : v) norm += x * x;
  norm = std::sqrt(norm);
  // Text made only of punctuation or stopwords hashes to nothing; give it a
  // fixed direction so similarity stays defined.
  if (norm == 0.0) {
    v[0] = 1.0;
    return v;
  }
  for (double& x : v) x /= norm;
  return v;
}

std::vector<double> embed_text(std::string_view text, const Embedder& embedder) {
  if (text.empty()) throw Error(ErrorCode::EmptyText, "cannot embed empty text");
  auto v = embedder.embed(text);
  if (v.size() != embedder.dimension()) {
    throw Error(ErrorCode::EmbedderFailure,
                "embedder returned " + std::to_string(v.size()) + " values, expected " +
                    std::to_string(embedder.dimension()));
  }
  return v;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "vector dimensions differ: " +
                                                  std::to_string(a.size()) + " vs " +
                                                  std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::ZeroVector, "cosine of a zero vector");
  const double r = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(r, -1.0, 1.0);
}

std::shared_ptr<Embedder> make_default_embedder() { return std::make_shared<HashedEmbedder>(256); }

}  // namespace foamagent::rag
