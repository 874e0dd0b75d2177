#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace foamagent::rag {

class Embedder {
 public:
  virtual ~Embedder() = default;

  /// Stable name recorded in persisted vector files, e.g. "hashed-bow-v1:256".
  virtual std::string identity() const = 0;
  virtual std::size_t dimension() const = 0;

  /// Throws EmptyText for empty input, EmbedderFailure when the backend fails.
  virtual std::vector<double> embed(std::string_view text) const = 0;
};

/// Deterministic offline embedder: signed feature hashing of word and
/// identifier-part tokens, sublinear term weights, L2-normalised.
class HashedEmbedder final : public Embedder {
 public:
  explicit HashedEmbedder(std::size_t dimension = 256);

  std::string identity() const override;
  std::size_t dimension() const override { return dimension_; }
  std::vector<double> embed(std::string_view text) const override;

 private:
  std::size_t dimension_;
};

/// Tokens fed to the hashed embedder, in text order (exposed for tests).
std::vector<std::string> hashed_tokens(std::string_view text);

std::vector<double> embed_text(std::string_view text, const Embedder& embedder);

/// Throws DimensionMismatch or ZeroVector.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

std::shared_ptr<Embedder> make_default_embedder();

}  // namespace foamagent::rag
