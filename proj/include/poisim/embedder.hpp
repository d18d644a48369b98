#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "poisim/error.hpp"
#include "poisim/rng.hpp"
#include "poisim/text.hpp"

// Hashed bag-of-words embeddings. Deliberately simple: the simulators only
// need a deterministic, platform-stable notion of textual similarity for
// chunk selection and diversity scoring, not semantic quality.

namespace poisim {

inline constexpr int kDefaultEmbeddingDim = 256;

using EmbeddingVector = std::vector<double>;

/// Embed text as L2-normalized token-bucket counts. Tokens are lowercased
/// alphanumeric runs; each token lands in bucket fnv1a64(token) % dim.
/// Text with no tokens embeds as the zero vector.
inline EmbeddingVector embed(std::string_view text, int dim = kDefaultEmbeddingDim) {
  if (dim < 1) throw PreconditionError("embed: dim must be >= 1");
  EmbeddingVector v(static_cast<std::size_t>(dim), 0.0);
  for (const auto& token : alnum_tokens(text)) {
    v[fnv1a64(token) % static_cast<std::uint64_t>(dim)] += 1.0;
  }
  double norm2 = 0.0;
  for (double x : v) norm2 += x * x;
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
  }
  return v;
}

/// Cosine similarity; 0.0 when either vector is all zeros.
inline double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.size() != b.size()) {
    throw PreconditionError("cosine: dimension mismatch (" + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()) + ")");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

/// 1 minus the mean pairwise cosine over all unordered text pairs.
/// Needs at least two texts.
inline double information_diversity(const std::vector<std::string>& texts,
                                    int dim = kDefaultEmbeddingDim) {
  if (texts.size() < 2) {
    throw PreconditionError("information_diversity: need at least two texts");
  }
  std::vector<EmbeddingVector> vs;
  vs.reserve(texts.size());
  for (const auto& t : texts) vs.push_back(embed(t, dim));
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      sum += cosine(vs[i], vs[j]);
      ++pairs;
    }
  }
  return 1.0 - sum / static_cast<double>(pairs);
}

/// Interface for swapping the hashed embedder for a live embedding backend.
class EmbeddingProvider {
public:
  virtual ~EmbeddingProvider() = default;
  virtual int dim() const = 0;
  virtual std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) = 0;
};

/// The stock provider backed by embed().
class HashedEmbedder final : public EmbeddingProvider {
public:
  explicit HashedEmbedder(int dim = kDefaultEmbeddingDim) : dim_(dim) {}
  int dim() const override { return dim_; }
  std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) override {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed(t, dim_));
    return out;
  }

private:
  int dim_;
};

}  // namespace poisim
