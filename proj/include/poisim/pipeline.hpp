#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
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
#include "poisim/rng.hpp"
#include "poisim/text.hpp"

// Deterministic models of three deep-research agent content pipelines. They
// share one simplification: an LLM's soft choices (sub-query wording, rank
// churn, whether a persuasive passage makes it into prose) are replaced by
// seeded draws, while the structural mechanics that decide which retrieved
// bytes an agent can see at all (per-turn windows, global word budgets,
// chunk-level similarity selection, citation gates) are modeled exactly:
//
//   costorm    turn-based dialogue; one sub-query per turn; content merged
//              per URL and truncated to a per-turn word window; only content
//              inside a window is ever citable; unused entries resurface in
//              later turns by diversity-aware similarity.
//   storm      perspectives x turns sub-queries; all content concatenated per
//              URL, then across URLs in first-retrieval order, under one
//              global corpus word budget.
//   omnithink  mind-map expansion (fan-out 2 per node); all content chunked;
//              each report section keeps the top chunks by cosine similarity
//              to the section's sub-query.

namespace poisim {

enum class PipelineSystem { costorm, storm, omnithink };

inline const char* system_id(PipelineSystem s) {
  switch (s) {
    case PipelineSystem::costorm: return "costorm";
    case PipelineSystem::storm: return "storm";
    case PipelineSystem::omnithink: return "omnithink";
  }
  return "costorm";
}

inline const char* system_display_name(PipelineSystem s) {
  switch (s) {
    case PipelineSystem::costorm: return "Co-STORM";
    case PipelineSystem::storm: return "STORM";
    case PipelineSystem::omnithink: return "OmniThink";
  }
  return "Co-STORM";
}

inline PipelineSystem parse_system(std::string_view name) {
  if (name == "costorm" || name == "Co-STORM" || name == "co-storm") return PipelineSystem::costorm;
  if (name == "storm" || name == "STORM") return PipelineSystem::storm;
  if (name == "omnithink" || name == "OmniThink") return PipelineSystem::omnithink;
  throw ParseError("unknown pipeline system: '" + std::string(name) + "'");
}

struct PipelineConfig {
  PipelineSystem system = PipelineSystem::costorm;
  int results_per_search = 10;
  int turn_word_budget = 1000;    // costorm: words visible per conversation turn
  int corpus_word_budget = 4000;  // storm: global admission budget
  int report_word_budget = 4000;
  int chunk_chars = 1000;         // omnithink: chunk granularity
  int chunks_per_section = 3;     // omnithink: chunks kept per report section
  int perspectives = 3;           // storm: sub-queries per turn
  int turns = 3;
  int mindmap_depth = 2;          // omnithink: expansion rounds
  int min_mention_words = 10;     // shortest payload that can carry a mention
  double persuasion_prob = 1.0;   // chance a carried mention survives drafting
};

inline void validate(const PipelineConfig& cfg) {
  if (cfg.results_per_search < 1) throw PreconditionError("config: results_per_search must be >= 1");
  if (cfg.turn_word_budget < 1) throw PreconditionError("config: turn_word_budget must be >= 1");
  if (cfg.corpus_word_budget < 1) throw PreconditionError("config: corpus_word_budget must be >= 1");
  if (cfg.report_word_budget < 1) throw PreconditionError("config: report_word_budget must be >= 1");
  if (cfg.chunk_chars < 1) throw PreconditionError("config: chunk_chars must be >= 1");
  if (cfg.chunks_per_section < 1) throw PreconditionError("config: chunks_per_section must be >= 1");
  if (cfg.perspectives < 1) throw PreconditionError("config: perspectives must be >= 1");
  if (cfg.turns < 1) throw PreconditionError("config: turns must be >= 1");
  if (cfg.mindmap_depth < 1) throw PreconditionError("config: mindmap_depth must be >= 1");
  if (cfg.min_mention_words < 1) throw PreconditionError("config: min_mention_words must be >= 1");
  if (cfg.persuasion_prob < 0.0 || cfg.persuasion_prob > 1.0) {
    throw PreconditionError("config: persuasion_prob must lie in [0, 1]");
  }
}

/// One piece of retrieved content inside a run's working memory. A given
/// (url, content) pair is stored at most once.
struct KbEntry {
  std::string url;
  std::string content;
  int turn_added = 0;
  bool cited = false;
  int cite_seq = -1;     // order in which the entry first became citable
  bool injected = false;
  int organic_words = 0;
  int payload_words = 0;
  int kept_words = 0;    // words visible through the system's budget gates

  int total_words() const { return organic_words + payload_words; }
};

struct KnowledgeBase {
  std::vector<KbEntry> entries;
  std::vector<std::string> section_queries;  // omnithink report sections

  int find(const std::string& url, const std::string& content) const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].url == url && entries[i].content == content) return static_cast<int>(i);
    }
    return -1;
  }
};

struct Report {
  std::string text;
  std::vector<std::string> cited_urls;  // first-citation order, no duplicates
  std::set<std::string> mentioned_entities;
};

struct RetrievalEvent {
  std::string subquery;
  std::string url;
  Surface surface = Surface::serp_snippet;
  bool injected = false;
  int payload_words = 0;
  int organic_words = 0;
};

struct RunRecord {
  std::string system;
  std::string query_id;
  std::uint64_t seed = 0;
  std::vector<RetrievalEvent> retrievals;
  std::vector<InjectionEvent> injections;
  Report report;
};

// ----- sub-query derivation -------------------------------------------------

namespace detail {

inline constexpr const char* kSuffixBank[] = {
    "reddit",       "forum discussion", "community recommendations",
    "personal experience", "honest review", "step by step",
    "what to know", "comparison",       "latest advice",
    "faq",
};
inline constexpr const char* kPrefixBank[] = {
    "best advice on",
    "real experiences with",
    "community guide to",
    "help with",
};

inline std::string decorate_query(const std::string& text, std::uint64_t pick) {
  constexpr std::size_t kSuffixes = sizeof(kSuffixBank) / sizeof(kSuffixBank[0]);
  constexpr std::size_t kPrefixes = sizeof(kPrefixBank) / sizeof(kPrefixBank[0]);
  if (pick % 4 == 0) {
    return std::string(kPrefixBank[(pick / 4) % kPrefixes]) + " " + text;
  }
  return text + " " + kSuffixBank[(pick / 4) % kSuffixes];
}

/// Sub-queries issued in one round: costorm asks once per turn, storm asks
/// once per perspective, omnithink asks once per mind-map node at the round's
/// depth (fan-out 2, so 2^round nodes).
inline int subquery_count(PipelineSystem system, int round, const PipelineConfig& cfg) {
  switch (system) {
    case PipelineSystem::costorm: return 1;
    case PipelineSystem::storm: return cfg.perspectives;
    case PipelineSystem::omnithink: return 1 << round;
  }
  return 1;
}

}  // namespace detail

/// Deterministic sub-query expansion: the original query text decorated with
/// seeded picks from a fixed phrase bank. The query text always survives
/// verbatim, which is what lets the mock index resolve the derived string.
inline std::vector<std::string> derive_subqueries(PipelineSystem system, const Query& query,
                                                  int round, std::uint64_t seed,
                                                  const PipelineConfig& cfg = {}) {
  if (round < 1) throw PreconditionError("derive_subqueries: round must be >= 1");
  std::vector<std::string> out;
  const std::uint64_t base = mix_seed(seed, fnv1a64(system_id(system)));
  const int n = detail::subquery_count(system, round, cfg);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t pick =
        splitmix64(base ^ (static_cast<std::uint64_t>(round) * 131 + static_cast<std::uint64_t>(i)));
    out.push_back(detail::decorate_query(query.text, pick));
  }
  return out;
}

// ----- chunking -------------------------------------------------------------

struct Chunk {
  std::string source_url;
  std::string text;
  int index = 0;        // position in the selection pool
  int entry_index = -1; // owning knowledge-base entry
  int token_begin = 0;  // word range within the entry's normalized content
  int token_end = 0;
};

/// Greedy whitespace-boundary chunking: words are packed until adding one
/// would push the chunk past `max_chars` (a single oversized word still gets
/// its own chunk). Joining the chunk texts with single spaces reconstructs
/// the whitespace-normalized input.
inline std::vector<Chunk> chunk_text(std::string_view text, int max_chars) {
  if (max_chars < 1) throw PreconditionError("chunk_text: max_chars must be >= 1");
  std::vector<Chunk> out;
  const auto words = split_words(text);
  std::size_t i = 0;
  while (i < words.size()) {
    Chunk c;
    c.token_begin = static_cast<int>(i);
    std::string chunk{words[i]};
    ++i;
    while (i < words.size() &&
           chunk.size() + 1 + words[i].size() <= static_cast<std::size_t>(max_chars)) {
      chunk.push_back(' ');
      chunk.append(words[i]);
      ++i;
    }
    c.token_end = static_cast<int>(i);
    c.text = std::move(chunk);
    c.index = static_cast<int>(out.size());
    out.push_back(std::move(c));
  }
  return out;
}

// ----- budget gates (exposed for oracle comparison) -------------------------

/// STORM admission: entries grouped per URL in first-occurrence order, one
/// running word budget across the groups, word-boundary cut at the edge.
/// Returns words kept per input entry.
inline std::vector<int> storm_admitted_words(
    const std::vector<std::pair<std::string, int>>& entries, int budget) {
  std::map<std::string, std::vector<std::size_t>> groups;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto [it, fresh] = groups.try_emplace(entries[i].first);
    if (fresh) order.push_back(entries[i].first);
    it->second.push_back(i);
  }
  std::vector<int> kept(entries.size(), 0);
  int remaining = budget;
  for (const std::string& url : order) {
    for (std::size_t i : groups.at(url)) {
      const int take = std::min(entries[i].second, remaining);
      kept[i] = take;
      remaining -= take;
    }
  }
  return kept;
}

/// OmniThink section selection: indices of the top-k chunks by cosine to the
/// section query, ties broken by pool index.
inline std::vector<int> select_top_chunks(const std::vector<EmbeddingVector>& chunk_embeddings,
                                          const EmbeddingVector& query_embedding, int k) {
  std::vector<int> idx(chunk_embeddings.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::vector<double> score(chunk_embeddings.size());
  for (std::size_t i = 0; i < chunk_embeddings.size(); ++i) {
    score[i] = cosine(chunk_embeddings[i], query_embedding);
  }
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (score[a] != score[b]) return score[a] > score[b];
    return a < b;
  });
  if (static_cast<int>(idx.size()) > k) idx.resize(static_cast<std::size_t>(k));
  return idx;
}

// ----- report synthesis -----------------------------------------------------

namespace detail {

/// A contiguous stretch of visible payload inside cited content.
struct PayloadView {
  int entry_index = -1;
  std::string text;  // the visible payload words, single-spaced
};

/// Visible payload portion of an entry prefix of `kept` words.
inline std::optional<std::string> visible_payload_prefix(const KbEntry& e, int kept,
                                                         int min_words) {
  if (!e.injected) return std::nullopt;
  const int visible = std::min(kept, e.total_words()) - e.organic_words;
  if (visible < min_words) return std::nullopt;
  const auto words = split_words(e.content);
  return join_words(words, static_cast<std::size_t>(e.organic_words),
                    static_cast<std::size_t>(e.organic_words + visible));
}

/// Visible payload portion of an entry's word range [begin, end).
inline std::optional<std::string> visible_payload_range(const KbEntry& e, int begin, int end,
                                                        int min_words) {
  if (!e.injected) return std::nullopt;
  const int lo = std::max(begin, e.organic_words);
  const int hi = std::min(end, e.total_words());
  if (hi - lo < min_words) return std::nullopt;
  const auto words = split_words(e.content);
  return join_words(words, static_cast<std::size_t>(lo), static_cast<std::size_t>(hi));
}

inline std::string mention_sentence(const std::string& visible_payload,
                                    const std::string& entity) {
  for (const std::string& s : split_sentences(visible_payload)) {
    if (s.find(entity) != std::string::npos) return s;
  }
  return visible_payload;
}

}  // namespace detail

/// Assemble a report from gated working memory. For storm/omnithink this also
/// runs the system's content gate (costorm gates per turn, inside the run
/// loop). An entity is mentioned only when (a) its name occurs inside the
/// visible part of an injected payload in cited content, (b) that visible
/// stretch spans at least min_mention_words words, and (c) the per-entity
/// seeded draw clears persuasion_prob. The report text is one first sentence
/// per cited source up to the report word budget, plus the evidencing payload
/// sentence for each mentioned entity.
inline Report synthesize_report(KnowledgeBase& kb, const PipelineConfig& cfg,
                                const std::vector<std::string>& entities, std::uint64_t seed) {
  std::vector<detail::PayloadView> payload_views;

  if (cfg.system == PipelineSystem::storm) {
    std::vector<std::pair<std::string, int>> sized;
    sized.reserve(kb.entries.size());
    for (const KbEntry& e : kb.entries) sized.emplace_back(e.url, e.total_words());
    const std::vector<int> kept = storm_admitted_words(sized, cfg.corpus_word_budget);
    // Citation order follows the admission walk, i.e. first-URL order.
    std::map<std::string, std::vector<std::size_t>> groups;
    std::vector<std::string> order;
    for (std::size_t i = 0; i < kb.entries.size(); ++i) {
      auto [it, fresh] = groups.try_emplace(kb.entries[i].url);
      if (fresh) order.push_back(kb.entries[i].url);
      it->second.push_back(i);
    }
    int seq = 0;
    for (const std::string& url : order) {
      for (std::size_t i : groups.at(url)) {
        KbEntry& e = kb.entries[i];
        e.kept_words = kept[i];
        if (kept[i] > 0 && !e.cited) {
          e.cited = true;
          e.cite_seq = seq++;
        }
      }
    }
  } else if (cfg.system == PipelineSystem::omnithink) {
    std::vector<Chunk> pool;
    for (std::size_t i = 0; i < kb.entries.size(); ++i) {
      for (Chunk& c : chunk_text(kb.entries[i].content, cfg.chunk_chars)) {
        c.source_url = kb.entries[i].url;
        c.entry_index = static_cast<int>(i);
        c.index = static_cast<int>(pool.size());
        pool.push_back(std::move(c));
      }
    }
    std::vector<EmbeddingVector> chunk_embeddings;
    chunk_embeddings.reserve(pool.size());
    for (const Chunk& c : pool) chunk_embeddings.push_back(embed(c.text));
    int seq = 0;
    std::set<int> chunks_taken;
    for (const std::string& section : kb.section_queries) {
      const EmbeddingVector qv = embed(section);
      for (int ci : select_top_chunks(chunk_embeddings, qv, cfg.chunks_per_section)) {
        const Chunk& c = pool[static_cast<std::size_t>(ci)];
        KbEntry& e = kb.entries[static_cast<std::size_t>(c.entry_index)];
        if (!e.cited) {
          e.cited = true;
          e.cite_seq = seq++;
        }
        e.kept_words = std::max(e.kept_words, c.token_end - c.token_begin);
        if (!chunks_taken.insert(c.index).second) continue;
        if (auto v = detail::visible_payload_range(e, c.token_begin, c.token_end,
                                                   cfg.min_mention_words)) {
          payload_views.push_back({c.entry_index, std::move(*v)});
        }
      }
    }
  }

  if (cfg.system != PipelineSystem::omnithink) {
    for (std::size_t i = 0; i < kb.entries.size(); ++i) {
      const KbEntry& e = kb.entries[i];
      if (!e.cited) continue;
      if (auto v = detail::visible_payload_prefix(e, e.kept_words, cfg.min_mention_words)) {
        payload_views.push_back({static_cast<int>(i), std::move(*v)});
      }
    }
  }

  Report report;

  // Cited URLs in first-citation order.
  std::vector<std::pair<int, std::string>> cited;  // (cite_seq, url)
  std::set<std::string> seen_urls;
  for (const KbEntry& e : kb.entries) {
    if (e.cited && e.cite_seq >= 0) cited.emplace_back(e.cite_seq, e.url);
  }
  std::sort(cited.begin(), cited.end());
  for (const auto& [sq, url] : cited) {
    if (seen_urls.insert(url).second) report.cited_urls.push_back(url);
  }

  // Mentions: one seeded persuasion draw per entity and run.
  std::map<std::string, std::string> mention_evidence;  // entity -> payload sentence
  for (const std::string& entity : entities) {
    const detail::PayloadView* hit = nullptr;
    for (const auto& view : payload_views) {
      if (view.text.find(entity) != std::string::npos) {
        hit = &view;
        break;
      }
    }
    if (hit == nullptr) continue;
    const double draw = seeded_unit_real(mix_seed(seed, fnv1a64("mention") ^ fnv1a64(entity)));
    if (draw < cfg.persuasion_prob) {
      report.mentioned_entities.insert(entity);
      mention_evidence[entity] = detail::mention_sentence(hit->text, entity);
    }
  }

  // Per-source summaries under the report budget, then mention evidence.
  int remaining = cfg.report_word_budget;
  std::string text;
  for (const std::string& url : report.cited_urls) {
    if (remaining <= 0) break;
    const KbEntry* entry = nullptr;
    for (const KbEntry& e : kb.entries) {
      if (e.cited && e.url == url) {
        entry = &e;
        break;
      }
    }
    if (entry == nullptr) continue;
    const std::string sentence = first_sentence(entry->content);
    const auto words = split_words(sentence);
    const std::size_t take = std::min<std::size_t>(words.size(),
                                                   static_cast<std::size_t>(remaining));
    if (take == 0) break;
    if (!text.empty()) text.push_back(' ');
    text += join_words(words, 0, take);
    remaining -= static_cast<int>(take);
  }
  for (const auto& [entity, sentence] : mention_evidence) {
    if (!text.empty()) text.push_back(' ');
    text += sentence;
  }
  report.text = std::move(text);
  return report;
}

// ----- the run loop ---------------------------------------------------------

namespace detail {

inline std::uint64_t call_seed(std::uint64_t run_seed, const std::string& subquery, int round,
                               int slot) {
  return mix_seed(mix_seed(run_seed, fnv1a64(subquery)),
                  (static_cast<std::uint64_t>(round) << 8) | static_cast<std::uint64_t>(slot));
}

/// Add retrieved docs to the record and the knowledge base; returns the KB
/// entry index per doc (deduplicated on the (url, content) pair).
inline std::vector<int> ingest(KnowledgeBase& kb, RunRecord& rec,
                               const std::vector<RetrievedDoc>& docs,
                               const std::string& subquery, int turn) {
  std::vector<int> entry_indices;
  for (const RetrievedDoc& doc : docs) {
    rec.retrievals.push_back({subquery, doc.url, doc.surface, doc.injected, doc.payload_words,
                              doc.organic_words});
    int idx = kb.find(doc.url, doc.content);
    if (idx < 0) {
      KbEntry e;
      e.url = doc.url;
      e.content = doc.content;
      e.turn_added = turn;
      e.injected = doc.injected;
      e.organic_words = doc.organic_words;
      e.payload_words = doc.payload_words;
      idx = static_cast<int>(kb.entries.size());
      kb.entries.push_back(std::move(e));
    }
    entry_indices.push_back(idx);
  }
  return entry_indices;
}

inline constexpr int kResurfaceTop = 3;

/// Diversity-aware resurfacing: uncited entries ranked by similarity to the
/// upcoming sub-query minus their closest similarity to anything already
/// cited. Top candidates get re-exposed in the next turn's window.
inline std::vector<int> resurface_candidates(const KnowledgeBase& kb,
                                             const std::vector<EmbeddingVector>& entry_embs,
                                             const EmbeddingVector& subquery_emb,
                                             const std::set<int>& exclude) {
  std::vector<std::pair<double, int>> scored;
  for (std::size_t i = 0; i < kb.entries.size(); ++i) {
    const int idx = static_cast<int>(i);
    if (kb.entries[i].cited || exclude.count(idx)) continue;
    double redundancy = 0.0;
    for (std::size_t j = 0; j < kb.entries.size(); ++j) {
      if (!kb.entries[j].cited) continue;
      redundancy = std::max(redundancy, cosine(entry_embs[i], entry_embs[j]));
    }
    scored.emplace_back(cosine(entry_embs[i], subquery_emb) - redundancy, idx);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<int> out;
  for (std::size_t i = 0; i < scored.size() && i < kResurfaceTop; ++i) {
    out.push_back(scored[i].second);
  }
  return out;
}

inline void run_costorm(const PipelineConfig& cfg, Retriever& retriever, const Query& query,
                        std::uint64_t seed, KnowledgeBase& kb, RunRecord& rec) {
  std::vector<EmbeddingVector> entry_embs;
  int cite_seq = 0;
  for (int turn = 1; turn <= cfg.turns; ++turn) {
    const std::string subq = derive_subqueries(PipelineSystem::costorm, query, turn, seed, cfg)[0];
    const auto docs = retriever.retrieve(subq, cfg.results_per_search,
                                         call_seed(seed, subq, turn, 0));
    const std::vector<int> fresh = ingest(kb, rec, docs, subq, turn);
    while (entry_embs.size() < kb.entries.size()) {
      entry_embs.push_back(embed(kb.entries[entry_embs.size()].content));
    }

    // The turn window: this turn's results merged per URL in rank order,
    // then resurfaced entries from earlier turns.
    std::vector<int> window;
    std::set<int> in_window;
    std::vector<std::string> url_order;
    std::set<std::string> urls_seen;
    for (int idx : fresh) {
      if (urls_seen.insert(kb.entries[static_cast<std::size_t>(idx)].url).second) {
        url_order.push_back(kb.entries[static_cast<std::size_t>(idx)].url);
      }
    }
    for (const std::string& url : url_order) {
      for (std::size_t i = 0; i < kb.entries.size(); ++i) {
        if (kb.entries[i].url != url) continue;
        if (in_window.insert(static_cast<int>(i)).second) window.push_back(static_cast<int>(i));
      }
    }
    if (turn > 1) {
      for (int idx : resurface_candidates(kb, entry_embs, embed(subq), in_window)) {
        if (in_window.insert(idx).second) window.push_back(idx);
      }
    }

    // Everything inside the word window is seen, and therefore citable.
    int remaining = cfg.turn_word_budget;
    for (int idx : window) {
      if (remaining <= 0) break;
      KbEntry& e = kb.entries[static_cast<std::size_t>(idx)];
      const int take = std::min(e.total_words(), remaining);
      if (take > 0) {
        if (!e.cited) {
          e.cited = true;
          e.cite_seq = cite_seq++;
        }
        e.kept_words = std::max(e.kept_words, take);
        remaining -= take;
      }
    }
  }
}

inline void run_storm(const PipelineConfig& cfg, Retriever& retriever, const Query& query,
                      std::uint64_t seed, KnowledgeBase& kb, RunRecord& rec) {
  for (int turn = 1; turn <= cfg.turns; ++turn) {
    const auto subqs = derive_subqueries(PipelineSystem::storm, query, turn, seed, cfg);
    for (std::size_t p = 0; p < subqs.size(); ++p) {
      const auto docs = retriever.retrieve(subqs[p], cfg.results_per_search,
                                           call_seed(seed, subqs[p], turn, static_cast<int>(p)));
      ingest(kb, rec, docs, subqs[p], turn);
    }
  }
}

inline void run_omnithink(const PipelineConfig& cfg, Retriever& retriever, const Query& query,
                          std::uint64_t seed, KnowledgeBase& kb, RunRecord& rec) {
  for (int round = 1; round <= cfg.mindmap_depth; ++round) {
    const auto subqs = derive_subqueries(PipelineSystem::omnithink, query, round, seed, cfg);
    for (std::size_t i = 0; i < subqs.size(); ++i) {
      const auto docs = retriever.retrieve(subqs[i], cfg.results_per_search,
                                           call_seed(seed, subqs[i], round, static_cast<int>(i)));
      ingest(kb, rec, docs, subqs[i], round);
    }
    if (round == cfg.mindmap_depth) kb.section_queries = subqs;
  }
}

}  // namespace detail

/// Execute one complete run. Entities under attack are discovered from the
/// retriever chain itself, so a clean chain can never report a mention.
/// Everything downstream of (config, corpus content, seed) is deterministic.
inline RunRecord run_pipeline(const PipelineConfig& cfg, Retriever& retriever,
                              const Query& query, std::uint64_t seed) {
  validate(cfg);
  RunRecord rec;
  rec.system = system_id(cfg.system);
  rec.query_id = query.id;
  rec.seed = seed;
  {
    std::vector<InjectionEvent> stale;
    retriever.drain_injection_events(stale);  // discard anything buffered before this run
  }
  KnowledgeBase kb;
  switch (cfg.system) {
    case PipelineSystem::costorm:
      detail::run_costorm(cfg, retriever, query, seed, kb, rec);
      break;
    case PipelineSystem::storm:
      detail::run_storm(cfg, retriever, query, seed, kb, rec);
      break;
    case PipelineSystem::omnithink:
      detail::run_omnithink(cfg, retriever, query, seed, kb, rec);
      break;
  }
  std::vector<std::string> entities;
  retriever.collect_target_entities(entities);
  std::sort(entities.begin(), entities.end());
  entities.erase(std::unique(entities.begin(), entities.end()), entities.end());
  rec.report = synthesize_report(kb, cfg, entities, seed);
  retriever.drain_injection_events(rec.injections);
  for (InjectionEvent& ev : rec.injections) ev.query_id = query.id;
  return rec;
}

// ----- serialization --------------------------------------------------------

inline nlohmann::json to_json(const RunRecord& rec) {
  nlohmann::json retrievals = nlohmann::json::array();
  for (const RetrievalEvent& e : rec.retrievals) {
    retrievals.push_back({{"subquery", e.subquery},
                          {"url", e.url},
                          {"surface", surface_name(e.surface)},
                          {"injected", e.injected},
                          {"payload_words", e.payload_words},
                          {"organic_words", e.organic_words}});
  }
  nlohmann::json injections = nlohmann::json::array();
  for (const InjectionEvent& e : rec.injections) {
    injections.push_back({{"query_id", e.query_id},
                          {"subquery", e.subquery},
                          {"url", e.url},
                          {"payload_words", e.payload_words},
                          {"organic_words", e.organic_words}});
  }
  return nlohmann::json{{"system", rec.system},
                        {"query_id", rec.query_id},
                        {"seed", rec.seed},
                        {"retrievals", retrievals},
                        {"injections", injections},
                        {"report",
                         {{"text", rec.report.text},
                          {"cited_urls", rec.report.cited_urls},
                          {"mentions", rec.report.mentioned_entities}}}};
}

inline RunRecord run_record_from_json(const nlohmann::json& j) {
  RunRecord rec;
  rec.system = j.at("system").get<std::string>();
  rec.query_id = j.at("query_id").get<std::string>();
  rec.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& e : j.at("retrievals")) {
    rec.retrievals.push_back({e.at("subquery").get<std::string>(), e.at("url").get<std::string>(),
                              parse_surface(e.at("surface").get<std::string>()),
                              e.at("injected").get<bool>(), e.at("payload_words").get<int>(),
                              e.at("organic_words").get<int>()});
  }
  for (const auto& e : j.at("injections")) {
    rec.injections.push_back({e.at("query_id").get<std::string>(),
                              e.at("subquery").get<std::string>(), e.at("url").get<std::string>(),
                              e.at("payload_words").get<int>(), e.at("organic_words").get<int>()});
  }
  const auto& r = j.at("report");
  rec.report.text = r.at("text").get<std::string>();
  for (const auto& u : r.at("cited_urls")) rec.report.cited_urls.push_back(u.get<std::string>());
  for (const auto& m : r.at("mentions")) rec.report.mentioned_entities.insert(m.get<std::string>());
  return rec;
}

}  // namespace poisim
