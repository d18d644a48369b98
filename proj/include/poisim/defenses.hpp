#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "poisim/corpus.hpp"
#include "poisim/embedder.hpp"
#include "poisim/error.hpp"
#include "poisim/retriever.hpp"
#include "poisim/text.hpp"
#include "poisim/ugc.hpp"

// Defense-side machinery: provenance blocking at the retrieval layer, and
// content-based detection features (perplexity, log-rank, and a two-model
// cross-perplexity ratio) scored by small order-n token language models, with
// exact-rational AUROC to judge their separation power.

namespace poisim {

// ----- order-n token language model -----------------------------------------

/// Count-based LM over lowercased alphanumeric tokens with fixed context
/// length order-1. Smoothing is applied to per-context relative frequencies,
/// p = (freq + k) / (1 + k|V|), so the model is invariant under scaling all
/// raw counts and every context's probabilities sum to one exactly. Unseen
/// contexts fall back to the uniform distribution.
class TokenLM {
public:
  explicit TokenLM(std::vector<std::string> vocabulary, int order = 3, double smoothing_k = 0.1)
      : order_(order), k_(smoothing_k) {
    if (order_ < 1) throw PreconditionError("TokenLM: order must be >= 1");
    if (k_ < 0.0) throw PreconditionError("TokenLM: smoothing k must be >= 0");
    std::sort(vocabulary.begin(), vocabulary.end());
    vocabulary.erase(std::unique(vocabulary.begin(), vocabulary.end()), vocabulary.end());
    if (vocabulary.empty()) throw PreconditionError("TokenLM: empty vocabulary");
    vocab_ = std::move(vocabulary);
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
      ids_[vocab_[i]] = static_cast<int>(i);
    }
    auto unk = ids_.find(kUnk);
    unk_id_ = unk == ids_.end() ? -1 : unk->second;
  }

  /// Train on reference texts; the vocabulary is their tokens plus "<unk>".
  static TokenLM train(const std::vector<std::string>& texts, int order = 3,
                       double smoothing_k = 0.1) {
    std::vector<std::string> vocab{kUnk};
    for (const auto& t : texts) {
      for (auto& tok : alnum_tokens(t)) vocab.push_back(std::move(tok));
    }
    TokenLM lm(std::move(vocab), order, smoothing_k);
    for (const auto& t : texts) lm.add_text(t);
    return lm;
  }

  /// Accumulate raw context counts from one text.
  void add_text(std::string_view text) {
    const std::vector<int> ids = to_ids(alnum_tokens(text));
    for (std::size_t t = 0; t < ids.size(); ++t) {
      auto& slot = counts_[context_at(ids, t)];
      ++slot.first[ids[t]];
      ++slot.second;
    }
  }

  int vocab_size() const { return static_cast<int>(vocab_.size()); }
  int order() const { return order_; }
  const std::vector<std::string>& vocabulary() const { return vocab_; }

  /// Map a token to its id; out-of-vocabulary tokens become "<unk>" when the
  /// vocabulary carries it and are rejected otherwise.
  int token_id(const std::string& token) const {
    auto it = ids_.find(token);
    if (it != ids_.end()) return it->second;
    if (unk_id_ >= 0) return unk_id_;
    throw PreconditionError("TokenLM: token '" + token + "' is not in the vocabulary");
  }

  std::vector<int> to_ids(const std::vector<std::string>& tokens) const {
    std::vector<int> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(token_id(t));
    return out;
  }

  /// Smoothed P(token | context); context is the previous min(order-1, t) ids.
  double prob(const std::vector<int>& context, int token) const {
    auto it = counts_.find(context);
    const double v = static_cast<double>(vocab_size());
    if (it == counts_.end()) return 1.0 / v;
    const auto& [histogram, total] = it->second;
    auto h = histogram.find(token);
    const double freq =
        static_cast<double>(h == histogram.end() ? 0 : h->second) / static_cast<double>(total);
    return (freq + k_) / (1.0 + k_ * v);
  }

  /// Full next-token distribution for a context, indexed by token id.
  std::vector<double> distribution(const std::vector<int>& context) const {
    std::vector<double> out(vocab_.size());
    auto it = counts_.find(context);
    const double v = static_cast<double>(vocab_size());
    if (it == counts_.end()) {
      std::fill(out.begin(), out.end(), 1.0 / v);
      return out;
    }
    const auto& [histogram, total] = it->second;
    for (std::size_t i = 0; i < out.size(); ++i) {
      auto h = histogram.find(static_cast<int>(i));
      const double freq =
          static_cast<double>(h == histogram.end() ? 0 : h->second) / static_cast<double>(total);
      out[i] = (freq + k_) / (1.0 + k_ * v);
    }
    return out;
  }

  /// Context window preceding position t of an id sequence.
  std::vector<int> context_at(const std::vector<int>& ids, std::size_t t) const {
    const std::size_t len = std::min<std::size_t>(static_cast<std::size_t>(order_ - 1), t);
    return std::vector<int>(ids.begin() + static_cast<long>(t - len),
                            ids.begin() + static_cast<long>(t));
  }

  static constexpr const char* kUnk = "<unk>";

private:
  int order_;
  double k_;
  std::vector<std::string> vocab_;
  std::map<std::string, int> ids_;
  int unk_id_ = -1;
  // context ids -> (token histogram, total count)
  std::map<std::vector<int>, std::pair<std::map<int, long long>, long long>> counts_;
};

// ----- detection features ---------------------------------------------------

/// exp of the mean negative log-probability of the realized tokens.
/// A uniform model over V tokens scores V for any text.
inline double perplexity(const TokenLM& lm, std::string_view text) {
  const auto tokens = alnum_tokens(text);
  if (tokens.empty()) throw PreconditionError("perplexity: text has no tokens");
  const std::vector<int> ids = lm.to_ids(tokens);
  double nll = 0.0;
  for (std::size_t t = 0; t < ids.size(); ++t) {
    nll -= std::log(lm.prob(lm.context_at(ids, t), ids[t]));
  }
  return std::exp(nll / static_cast<double>(ids.size()));
}

/// Mean natural log of the realized token's rank in the model's next-token
/// ordering (rank 1 = most probable; probability ties break by token id).
inline double log_rank(const TokenLM& lm, std::string_view text) {
  const auto tokens = alnum_tokens(text);
  if (tokens.empty()) throw PreconditionError("log_rank: text has no tokens");
  const std::vector<int> ids = lm.to_ids(tokens);
  double sum = 0.0;
  for (std::size_t t = 0; t < ids.size(); ++t) {
    const std::vector<double> dist = lm.distribution(lm.context_at(ids, t));
    const int tok = ids[t];
    long long rank = 1;
    for (std::size_t j = 0; j < dist.size(); ++j) {
      const int jid = static_cast<int>(j);
      if (dist[j] > dist[static_cast<std::size_t>(tok)] ||
          (dist[j] == dist[static_cast<std::size_t>(tok)] && jid < tok)) {
        ++rank;
      }
    }
    sum += std::log(static_cast<double>(rank));
  }
  return sum / static_cast<double>(ids.size());
}

/// Cross-perplexity ratio of two models sharing one vocabulary: the mean
/// entropy of the observer's next-token distribution along the realized
/// context sequence, divided by the mean cross-entropy of the performer's
/// distribution scored under the observer's log-probabilities. Identical
/// models score exactly 1; a degenerate one-token vocabulary scores 1.
inline double binoculars_score(const TokenLM& observer, const TokenLM& performer,
                               std::string_view text) {
  if (observer.vocabulary() != performer.vocabulary()) {
    throw PreconditionError("binoculars_score: vocabulary mismatch between models");
  }
  const auto tokens = alnum_tokens(text);
  if (tokens.empty()) throw PreconditionError("binoculars_score: text has no tokens");
  const std::vector<int> ids = observer.to_ids(tokens);
  double self_entropy = 0.0, cross_entropy = 0.0;
  for (std::size_t t = 0; t < ids.size(); ++t) {
    const std::vector<int> ctx = observer.context_at(ids, t);
    const std::vector<double> obs = observer.distribution(ctx);
    const std::vector<double> perf = performer.distribution(ctx);
    for (std::size_t j = 0; j < obs.size(); ++j) {
      const double log_obs = std::log(obs[j]);
      self_entropy -= obs[j] * log_obs;
      cross_entropy -= perf[j] * log_obs;
    }
  }
  if (cross_entropy == 0.0) return 1.0;  // one-token vocabulary: 0/0 by convention
  return self_entropy / cross_entropy;
}

// ----- AUROC ----------------------------------------------------------------

struct DetectionSample {
  std::string text;
  std::string label;
  std::map<std::string, double> scores;  // detector name -> score
};

/// Exact AUROC numerator/denominator: (doubled rank-sum statistic, 2*P*N).
/// Equals pairwise counting with ties worth one half.
inline std::pair<long long, long long> auroc_fraction(const std::vector<DetectionSample>& samples,
                                                      const std::string& detector,
                                                      const std::string& positive_label) {
  std::vector<std::pair<double, bool>> scored;  // (score, is_positive)
  for (const DetectionSample& s : samples) {
    auto it = s.scores.find(detector);
    if (it == s.scores.end()) {
      throw PreconditionError("auroc: sample lacks a '" + detector + "' score");
    }
    scored.emplace_back(it->second, s.label == positive_label);
  }
  long long pos = 0, neg = 0;
  for (const auto& [score, is_pos] : scored) (is_pos ? pos : neg)++;
  if (pos == 0 || neg == 0) {
    throw PreconditionError("auroc: need at least one sample of each class");
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // Doubled average ranks keep tie handling in integers: a tie group spanning
  // 1-based positions [a, b] assigns doubled rank a+b to each member.
  long long doubled_rank_sum_pos = 0;
  std::size_t i = 0;
  while (i < scored.size()) {
    std::size_t j = i;
    while (j + 1 < scored.size() && scored[j + 1].first == scored[i].first) ++j;
    const long long doubled = static_cast<long long>(i + 1) + static_cast<long long>(j + 1);
    for (std::size_t t = i; t <= j; ++t) {
      if (scored[t].second) doubled_rank_sum_pos += doubled;
    }
    i = j + 1;
  }
  return {doubled_rank_sum_pos - pos * (pos + 1), 2 * pos * neg};
}

/// Probability a random positive outscores a random negative (ties = 1/2).
inline double auroc(const std::vector<DetectionSample>& samples, const std::string& detector,
                    const std::string& positive_label) {
  const auto [num, den] = auroc_fraction(samples, detector, positive_label);
  return static_cast<double>(num) / static_cast<double>(den);
}

/// JSON-lines detection sample file: {text, label} per line.
inline std::vector<DetectionSample> load_detection_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open samples file: " + path);
  std::vector<DetectionSample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (normalize_ws(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("text") || !j.contains("label")) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected {text, label}");
    }
    out.push_back({j.at("text").get<std::string>(), j.at("label").get<std::string>(), {}});
  }
  return out;
}

// ----- provenance blocking --------------------------------------------------

/// Drop results whose URL classifies into a blocked platform. Order of the
/// survivors is untouched and nothing is fetched to compensate; URLs that do
/// not parse cannot be attributed to a platform and pass through.
inline std::vector<SearchResult> domain_block_filter(
    const std::vector<SearchResult>& results, const std::set<Platform>& blocklist,
    const PlatformConfig& config = default_platform_config()) {
  std::vector<SearchResult> out;
  for (const SearchResult& r : results) {
    Platform p = Platform::non_ugc;
    try {
      p = classify_url(r.url, config);
    } catch (const ParseError&) {
    }
    if (!blocklist.count(p)) out.push_back(r);
  }
  return out;
}

inline std::set<Platform> full_ugc_blocklist() {
  return {Platform::reddit,    Platform::youtube, Platform::facebook, Platform::wikipedia,
          Platform::instagram, Platform::tiktok,  Platform::medium,   Platform::quora};
}

/// Retriever wrapper applying the same policy inside a pipeline run.
class BlockingRetriever final : public Retriever {
public:
  BlockingRetriever(std::shared_ptr<Retriever> base, std::set<Platform> blocklist,
                    PlatformConfig config = default_platform_config())
      : base_(std::move(base)), blocklist_(std::move(blocklist)), config_(std::move(config)) {}

  std::vector<RetrievedDoc> retrieve(const std::string& query_text, int k,
                                     std::uint64_t call_seed) override {
    std::vector<RetrievedDoc> out;
    for (RetrievedDoc& doc : base_->retrieve(query_text, k, call_seed)) {
      Platform p = Platform::non_ugc;
      try {
        p = classify_url(doc.url, config_);
      } catch (const ParseError&) {
      }
      if (!blocklist_.count(p)) out.push_back(std::move(doc));
    }
    return out;
  }

  void collect_target_entities(std::vector<std::string>& out) const override {
    base_->collect_target_entities(out);
  }
  void drain_injection_events(std::vector<InjectionEvent>& out) override {
    base_->drain_injection_events(out);
  }

private:
  std::shared_ptr<Retriever> base_;
  std::set<Platform> blocklist_;
  PlatformConfig config_;
};

// ----- output plausibility --------------------------------------------------

/// Pairwise text-similarity scorer. The default token-overlap implementation
/// is deterministic and offline; a contextual-embedding scorer can be slotted
/// in for higher-fidelity comparisons.
class SimilarityScorer {
public:
  virtual ~SimilarityScorer() = default;
  virtual double score(const std::string& a, const std::string& b) = 0;
};

/// Harmonic mean of token-multiset precision and recall between two texts.
inline double token_multiset_f1(std::string_view a, std::string_view b) {
  std::map<std::string, long long> ca, cb;
  for (auto& t : alnum_tokens(a)) ++ca[t];
  for (auto& t : alnum_tokens(b)) ++cb[t];
  long long na = 0, nb = 0, overlap = 0;
  for (const auto& [t, n] : ca) na += n;
  for (const auto& [t, n] : cb) nb += n;
  if (na == 0 && nb == 0) return 1.0;
  if (na == 0 || nb == 0) return 0.0;
  for (const auto& [t, n] : ca) {
    auto it = cb.find(t);
    if (it != cb.end()) overlap += std::min(n, it->second);
  }
  if (overlap == 0) return 0.0;
  const double p = static_cast<double>(overlap) / static_cast<double>(na);
  const double r = static_cast<double>(overlap) / static_cast<double>(nb);
  return 2.0 * p * r / (p + r);
}

class TokenF1Scorer final : public SimilarityScorer {
public:
  double score(const std::string& a, const std::string& b) override {
    return token_multiset_f1(a, b);
  }
};

struct PlausibilityResult {
  double attack_embed_sim = 0.0;    // attacked vs clean report, same query
  double attack_token_f1 = 0.0;
  double baseline_embed_sim = 0.0;  // mean over clean cluster report pairs
  double baseline_token_f1 = 0.0;
};

/// Compare an attacked report against its clean counterpart, with clean
/// same-cluster report pairs as the baseline scale.
inline PlausibilityResult output_plausibility(
    const std::string& attacked_report, const std::string& clean_report,
    const std::vector<std::pair<std::string, std::string>>& baseline_pairs,
    SimilarityScorer* token_scorer = nullptr) {
  if (normalize_ws(attacked_report).empty() || normalize_ws(clean_report).empty()) {
    throw PreconditionError("output_plausibility: empty report text");
  }
  if (baseline_pairs.empty()) {
    throw PreconditionError("output_plausibility: need at least one baseline pair");
  }
  TokenF1Scorer fallback;
  SimilarityScorer& scorer = token_scorer ? *token_scorer : fallback;
  PlausibilityResult r;
  r.attack_embed_sim = cosine(embed(attacked_report), embed(clean_report));
  r.attack_token_f1 = scorer.score(attacked_report, clean_report);
  for (const auto& [a, b] : baseline_pairs) {
    if (normalize_ws(a).empty() || normalize_ws(b).empty()) {
      throw PreconditionError("output_plausibility: empty baseline report text");
    }
    r.baseline_embed_sim += cosine(embed(a), embed(b));
    r.baseline_token_f1 += scorer.score(a, b);
  }
  r.baseline_embed_sim /= static_cast<double>(baseline_pairs.size());
  r.baseline_token_f1 /= static_cast<double>(baseline_pairs.size());
  return r;
}

// ----- screening cost calculator --------------------------------------------

/// Static cost model for judge-based snippet screening: one extra inference
/// call per screened result. No screening is implemented; this only quantifies
/// why (overhead relative to the pipeline's baseline LLM call count).
struct ScreeningCost {
  double baseline_calls = 0.0;
  double added_calls = 0.0;
  double overhead_pct() const { return added_calls / baseline_calls * 100.0; }
};

inline ScreeningCost screening_cost(double baseline_llm_calls, double urls_per_query,
                                    double ugc_fraction, bool ugc_only) {
  if (baseline_llm_calls <= 0.0) {
    throw PreconditionError("screening_cost: baseline call count must be positive");
  }
  if (urls_per_query < 0.0 || ugc_fraction < 0.0 || ugc_fraction > 1.0) {
    throw PreconditionError("screening_cost: urls_per_query >= 0 and ugc_fraction in [0,1]");
  }
  ScreeningCost c;
  c.baseline_calls = baseline_llm_calls;
  c.added_calls = ugc_only ? urls_per_query * ugc_fraction : urls_per_query;
  return c;
}

}  // namespace poisim
