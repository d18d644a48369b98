#pragma once

// Shared fixtures for the test suite: a compact two-cluster corpus with a mix
// of UGC and institutional sources, plus small helpers for building documents
// and fake retrievers.

#include "poisim/corpus.hpp"
#include "poisim/retriever.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace testutil {

inline std::string data_dir() { return POISIM_DATA_DIR; }

/// One document entry for the inline corpus JSON.
inline nlohmann::json doc_json(const std::string& url, const std::string& domain,
                               const std::string& snippet, const std::string& policy,
                               const std::string& full,
                               const std::vector<std::pair<std::string, double>>& rel) {
  nlohmann::json d{{"url", url},
                   {"domain", domain},
                   {"snippet", snippet},
                   {"fetch_policy", policy}};
  if (!full.empty()) d["full_content"] = full;
  auto rels = nlohmann::json::array();
  for (const auto& [qid, score] : rel) {
    rels.push_back({{"query_id", qid}, {"score", score}});
  }
  d["relevance"] = rels;
  return d;
}

/// Two clusters: "cancel_acme" with recurring UGC sources, "brunch" with none.
/// Query q_c2 ("cancel acme internet") nests inside q_c1's text so substring
/// resolution has something to disambiguate.
inline nlohmann::json small_corpus_json() {
  nlohmann::json root;
  root["clusters"] = nlohmann::json::array(
      {{{"id", "cancel_acme"},
        {"category", "customer_service_cancellation"},
        {"seed_queries", {"how to cancel acme internet", "acme internet cancellation fee"}},
        {"queries",
         {{{"id", "q_c1"}, {"text", "how to cancel acme internet"}},
          {{"id", "q_c2"}, {"text", "cancel acme internet"}},
          {{"id", "q_c3"},
           {"text", "acme internet cancellation fee"},
           {"template_slots", {{"provider", "acme"}}}}}}},
       {{"id", "brunch"},
        {"category", "local_business_recommendations"},
        {"queries",
         {{{"id", "q_b1"}, {"text", "best brunch in riverton"}},
          {{"id", "q_b2"}, {"text", "riverton brunch spots"}}}}}});

  const std::string long_page =
      "the full support page explains every cancellation step in order starting with "
      "account verification then retention offers then the final confirmation screen "
      "and it also lists the equipment return windows refund timelines and the exact "
      "phone menu path agents expect customers to follow when they call";

  root["documents"] = nlohmann::json::array({
      doc_json("https://acme.com/support/cancel", "acme.com",
               "official acme support page describing the cancellation workflow step by step "
               "for residential internet customers",
               "full_available", long_page,
               {{"q_c1", 0.97}, {"q_c2", 0.97}, {"q_c3", 0.97}}),
      doc_json("https://reddit.com/r/acme/comments/cancel_guide", "reddit.com",
               "community thread where a former agent lists the retention script and the "
               "fastest path to an actual cancellation",
               "full_available",
               "the long form community guide walks through the retention call script the "
               "exact phrases that skip the offers and the confirmation numbers to demand "
               "before hanging up plus a checklist for returning the rented equipment",
               {{"q_c1", 0.95}, {"q_c2", 0.90}, {"q_c3", 0.85}}),
      doc_json("https://reddit.com/r/cordcutters/comments/acme_exp", "reddit.com",
               "cordcutters thread comparing experiences after leaving acme and which "
               "streaming bundles replaced the old package",
               "snippet_only", "",
               {{"q_c1", 0.90}, {"q_c2", 0.88}}),
      doc_json("https://youtube.com/watch_acme_walkthrough", "youtube.com",
               "video walkthrough of the acme cancellation phone tree recorded by a "
               "consumer advocate with timestamps",
               "snippet_only", "", {{"q_c1", 0.80}}),
      doc_json("https://quora.com/how-do-i-cancel-acme", "quora.com",
               "quora answer describing how the billing cycle affects the final invoice "
               "when cancelling acme mid month",
               "snippet_only", "", {{"q_c2", 0.82}, {"q_c3", 0.80}}),
      doc_json("https://consumerhelp.org/guides/cancel-acme", "consumerhelp.org",
               "consumer rights guide covering early termination fees notice periods and "
               "how to dispute final bills",
               "full_available",
               "the consumer rights guide expands on termination fees state by state the "
               "notice periods contracts may impose and the escalation paths when a final "
               "bill arrives with surprise charges after service ends",
               {{"q_c1", 0.70}, {"q_c2", 0.70}, {"q_c3", 0.70}}),
      doc_json("https://techtips.net/acme-cancellation", "techtips.net",
               "tech blog summarizing reader reports about hold times and callback tricks "
               "when cancelling acme internet",
               "snippet_only", "", {{"q_c1", 0.60}, {"q_c3", 0.60}}),
      doc_json("https://riverton-eats.com/best-brunch", "riverton-eats.com",
               "local magazine ranking the riverton brunch patios by wait time and menu "
               "breadth this season",
               "full_available",
               "the magazine feature visits each riverton brunch spot in turn describing "
               "the signature dishes the average wait on weekends and which patios take "
               "reservations during the busy spring months",
               {{"q_b1", 0.95}, {"q_b2", 0.92}}),
      doc_json("https://riverton.gov/visitors/dining", "riverton.gov",
               "city visitor guide listing licensed downtown restaurants with outdoor "
               "seating and parking notes",
               "snippet_only", "", {{"q_b1", 0.75}, {"q_b2", 0.75}}),
  });
  return root;
}

inline poisim::Corpus make_small_corpus() {
  return poisim::load_corpus_json(small_corpus_json(), "small");
}

/// Three documents with near-tied scores for rank-jitter checks.
inline poisim::Corpus make_jitter_corpus() {
  nlohmann::json root;
  root["clusters"] = nlohmann::json::array(
      {{{"id", "c"},
        {"category", "product_recommendations"},
        {"queries", {{{"id", "q1"}, {"text", "contested ranking"}}}}}});
  root["documents"] = nlohmann::json::array({
      doc_json("https://site.one/a", "site.one", "doc a", "snippet_only", "",
               {{"q1", 0.50}}),
      doc_json("https://site.two/b", "site.two", "doc b", "snippet_only", "",
               {{"q1", 0.49}}),
      doc_json("https://site.three/c", "site.three", "doc c", "snippet_only", "",
               {{"q1", 0.48}}),
  });
  return poisim::load_corpus_json(root, "jitter");
}

/// Retriever returning a fixed result list regardless of the query.
class FixedRetriever : public poisim::Retriever {
public:
  explicit FixedRetriever(std::vector<poisim::RetrievedDoc> docs) : docs_(std::move(docs)) {}

  std::vector<poisim::RetrievedDoc> retrieve(const std::string&, int k,
                                             std::uint64_t) override {
    std::vector<poisim::RetrievedDoc> out = docs_;
    if (static_cast<int>(out.size()) > k) out.resize(static_cast<std::size_t>(k));
    return out;
  }

private:
  std::vector<poisim::RetrievedDoc> docs_;
};

inline poisim::RetrievedDoc plain_doc(const std::string& url, int rank,
                                      const std::string& content,
                                      poisim::Surface surface = poisim::Surface::serp_snippet) {
  poisim::RetrievedDoc d;
  d.url = url;
  d.rank = rank;
  d.surface = surface;
  d.content = content;
  d.injected = false;
  d.organic_words = poisim::word_count(content);
  d.payload_words = 0;
  return d;
}

}  // namespace testutil
