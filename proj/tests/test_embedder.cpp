#include "doctest.h"

#include "poisim/embedder.hpp"
#include "poisim/rng.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace poisim;

TEST_CASE("embed buckets token counts and L2-normalizes") {
  // At dim 8 the single-letter tokens land in distinct buckets:
  // a -> 4, b -> 5 (checked below against the hash directly).
  const int dim = 8;
  const std::size_t ba = fnv1a64("a") % 8;
  const std::size_t bb = fnv1a64("b") % 8;
  REQUIRE(ba != bb);

  EmbeddingVector v = embed("a a b", dim);
  REQUIRE(v.size() == 8);
  // Counts 2 and 1, normalized by sqrt(5).
  const double n = std::sqrt(5.0);
  CHECK(v[ba] == doctest::Approx(2.0 / n));
  CHECK(v[bb] == doctest::Approx(1.0 / n));
  double norm2 = 0.0;
  for (double x : v) norm2 += x * x;
  CHECK(norm2 == doctest::Approx(1.0));

  // Case folding and punctuation stripping flow through tokenization.
  CHECK(embed("A, a; B!", dim) == embed("a a b", dim));
}

TEST_CASE("embed of token-free text is the zero vector") {
  EmbeddingVector z = embed("!!! ...", 16);
  for (double x : z) CHECK(x == 0.0);
  CHECK(embed("", 16) == z);
  CHECK(cosine(z, embed("words here", 16)) == 0.0);
  CHECK(cosine(z, z) == 0.0);
}

TEST_CASE("embed rejects non-positive dimensions") {
  CHECK_THROWS_AS(embed("x", 0), PreconditionError);
  CHECK_THROWS_AS(embed("x", -5), PreconditionError);
}

TEST_CASE("cosine matches the hand formula and checks dimensions") {
  EmbeddingVector a{1.0, 0.0, 1.0, 0.0};
  EmbeddingVector b{1.0, 0.0, 0.0, 1.0};
  CHECK(cosine(a, b) == doctest::Approx(0.5));
  CHECK(cosine(a, a) == doctest::Approx(1.0));
  EmbeddingVector short_vec{1.0, 2.0};
  CHECK_THROWS_AS(cosine(a, short_vec), PreconditionError);
}

TEST_CASE("identical texts embed identically") {
  const std::string t = "deterministic hashed embedding of this sentence";
  CHECK(embed(t) == embed(t));
  CHECK(cosine(embed(t), embed(t)) == doctest::Approx(1.0));
}

TEST_CASE("information_diversity is one minus mean pairwise cosine") {
  // At the default dim the tokens a, b, c, d occupy distinct buckets
  // (140, 165, 242, 115), so the pairwise cosines are exactly 1, 0, 0.
  REQUIRE(fnv1a64("a") % 256 != fnv1a64("c") % 256);
  REQUIRE(fnv1a64("b") % 256 != fnv1a64("d") % 256);
  REQUIRE(fnv1a64("a") % 256 != fnv1a64("d") % 256);
  REQUIRE(fnv1a64("b") % 256 != fnv1a64("c") % 256);

  std::vector<std::string> texts{"a b", "a b", "c d"};
  // Pairs: (1,2)=1, (1,3)=0, (2,3)=0  ->  diversity = 1 - 1/3.
  CHECK(information_diversity(texts) == doctest::Approx(2.0 / 3.0));

  CHECK(information_diversity({"same words", "same words"}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(information_diversity({"only one"}), PreconditionError);
}

TEST_CASE("HashedEmbedder batches through embed") {
  HashedEmbedder e(32);
  CHECK(e.dim() == 32);
  auto batch = e.embed_batch({"first text", "second text"});
  REQUIRE(batch.size() == 2);
  CHECK(batch[0] == embed("first text", 32));
  CHECK(batch[1] == embed("second text", 32));
}
