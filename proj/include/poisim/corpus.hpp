#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "poisim/error.hpp"
#include "poisim/rng.hpp"
#include "poisim/ugc.hpp"

// Offline research-query corpus and the deterministic mock search engine over
// it. A corpus file carries topic clusters (with their query variants) and web
// documents (with per-query relevance scores). Ranking adds seeded jitter to
// the relevance scores so that repeated runs see realistic rank churn while
// staying fully reproducible from the seed.

namespace poisim {

enum class Category {
  emergency_urgent_services,
  customer_service_cancellation,
  local_business_recommendations,
  legal_services,
  financial_advice,
  health_wellness,
  account_recovery_tech_support,
  online_dating_social,
  product_recommendations,
};

inline const char* category_name(Category c) {
  switch (c) {
    case Category::emergency_urgent_services: return "emergency_urgent_services";
    case Category::customer_service_cancellation: return "customer_service_cancellation";
    case Category::local_business_recommendations: return "local_business_recommendations";
    case Category::legal_services: return "legal_services";
    case Category::financial_advice: return "financial_advice";
    case Category::health_wellness: return "health_wellness";
    case Category::account_recovery_tech_support: return "account_recovery_tech_support";
    case Category::online_dating_social: return "online_dating_social";
    case Category::product_recommendations: return "product_recommendations";
  }
  return "product_recommendations";
}

inline Category parse_category(std::string_view name) {
  for (Category c : {Category::emergency_urgent_services, Category::customer_service_cancellation,
                     Category::local_business_recommendations, Category::legal_services,
                     Category::financial_advice, Category::health_wellness,
                     Category::account_recovery_tech_support, Category::online_dating_social,
                     Category::product_recommendations}) {
    if (name == category_name(c)) return c;
  }
  throw ParseError("unknown cluster category: '" + std::string(name) + "'");
}

/// Which representation of a document an agent consumes.
enum class Surface { serp_snippet, full_content };

inline const char* surface_name(Surface s) {
  return s == Surface::serp_snippet ? "serp_snippet" : "full_content";
}

inline Surface parse_surface(std::string_view name) {
  if (name == "serp_snippet") return Surface::serp_snippet;
  if (name == "full_content") return Surface::full_content;
  throw ParseError("unknown surface: '" + std::string(name) + "'");
}

struct Query {
  std::string id;
  std::string cluster_id;
  std::string text;
  std::map<std::string, std::string> template_slots;
};

struct TopicCluster {
  std::string id;
  Category category = Category::product_recommendations;
  std::vector<std::string> seed_queries;
  std::vector<std::string> query_ids;
};

enum class FetchPolicy { snippet_only, full_available };

struct WebDocument {
  std::string url;
  std::string domain;        // registrable domain, must agree with the url
  std::string snippet;       // SERP surface (~25 words)
  std::string full_content;  // full-page surface, possibly empty
  FetchPolicy fetch_policy = FetchPolicy::snippet_only;
};

struct SearchResult {
  std::string url;
  std::string snippet;
  int rank = 0;  // 1-based, gap-free within one result list
};

/// In-memory search index: documents by url plus per-query scored url lists.
struct SearchIndex {
  std::map<std::string, WebDocument> documents;
  // query id -> (url, score), url-ascending; only scored pairs are listed.
  std::map<std::string, std::vector<std::pair<std::string, double>>> relevance;
  std::uint64_t rng_seed = 0;
  double jitter_epsilon = 0.05;
  // Query texts sorted longest-first for free-text resolution (see below).
  std::vector<std::pair<std::string, std::string>> query_lookup;  // (text, id)
};

struct Corpus {
  std::vector<TopicCluster> clusters;       // file order
  std::map<std::string, Query> queries;     // by id
  SearchIndex index;

  const TopicCluster* cluster_of(const std::string& query_id) const {
    auto it = queries.find(query_id);
    if (it == queries.end()) return nullptr;
    for (const auto& c : clusters) {
      if (c.id == it->second.cluster_id) return &c;
    }
    return nullptr;
  }
};

namespace detail {

inline const nlohmann::json& jfield(const nlohmann::json& obj, const char* name,
                                    const std::string& path) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw ParseError(path + ": missing field '" + name + "'");
  }
  return obj.at(name);
}

inline std::string jstring(const nlohmann::json& obj, const char* name,
                           const std::string& path) {
  const auto& v = jfield(obj, name, path);
  if (!v.is_string()) throw ParseError(path + "." + name + ": expected a string");
  return v.get<std::string>();
}

inline std::string normalized_domain(std::string d) {
  std::transform(d.begin(), d.end(), d.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (d.rfind("www.", 0) == 0 && d.size() > 4) d.erase(0, 4);
  return d;
}

}  // namespace detail

/// Build a corpus from parsed JSON. `source` names the origin for messages.
inline Corpus load_corpus_json(const nlohmann::json& root, const std::string& source) {
  if (!root.is_object()) throw ParseError(source + ": expected a JSON object");
  Corpus corpus;
  std::set<std::string> cluster_ids;
  std::set<std::string> query_ids;

  const auto& clusters = detail::jfield(root, "clusters", source);
  if (!clusters.is_array()) throw ParseError(source + ".clusters: expected an array");
  for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
    const std::string cpath = source + ".clusters[" + std::to_string(ci) + "]";
    const auto& jc = clusters[ci];
    TopicCluster cluster;
    cluster.id = detail::jstring(jc, "id", cpath);
    if (!cluster_ids.insert(cluster.id).second) {
      throw IntegrityError(cpath + ".id: duplicate cluster id '" + cluster.id + "'");
    }
    cluster.category = parse_category(detail::jstring(jc, "category", cpath));
    if (jc.contains("seed_queries")) {
      for (const auto& s : jc.at("seed_queries")) {
        cluster.seed_queries.push_back(s.get<std::string>());
      }
    }
    const auto& jqueries = detail::jfield(jc, "queries", cpath);
    if (!jqueries.is_array() || jqueries.empty()) {
      throw IntegrityError(cpath + ".queries: every cluster needs at least one query");
    }
    for (std::size_t qi = 0; qi < jqueries.size(); ++qi) {
      const std::string qpath = cpath + ".queries[" + std::to_string(qi) + "]";
      const auto& jq = jqueries[qi];
      Query q;
      q.id = detail::jstring(jq, "id", qpath);
      q.cluster_id = cluster.id;
      q.text = detail::jstring(jq, "text", qpath);
      if (jq.contains("template_slots")) {
        for (const auto& [k, v] : jq.at("template_slots").items()) {
          q.template_slots[k] = v.get<std::string>();
        }
      }
      if (!query_ids.insert(q.id).second) {
        throw IntegrityError(qpath + ".id: duplicate query id '" + q.id + "'");
      }
      cluster.query_ids.push_back(q.id);
      corpus.queries.emplace(q.id, std::move(q));
    }
    corpus.clusters.push_back(std::move(cluster));
  }

  const auto& documents = detail::jfield(root, "documents", source);
  if (!documents.is_array()) throw ParseError(source + ".documents: expected an array");
  for (std::size_t di = 0; di < documents.size(); ++di) {
    const std::string dpath = source + ".documents[" + std::to_string(di) + "]";
    const auto& jd = documents[di];
    WebDocument doc;
    doc.url = detail::jstring(jd, "url", dpath);
    doc.domain = detail::jstring(jd, "domain", dpath);
    doc.snippet = detail::jstring(jd, "snippet", dpath);
    if (jd.contains("full_content")) doc.full_content = jd.at("full_content").get<std::string>();
    const std::string policy = detail::jstring(jd, "fetch_policy", dpath);
    if (policy == "snippet_only") {
      doc.fetch_policy = FetchPolicy::snippet_only;
    } else if (policy == "full_available") {
      doc.fetch_policy = FetchPolicy::full_available;
    } else {
      throw ParseError(dpath + ".fetch_policy: unknown policy '" + policy + "'");
    }
    const std::string host = parse_url(doc.url).host;
    if (detail::normalized_domain(doc.domain) != host) {
      throw IntegrityError(dpath + ".domain: '" + doc.domain + "' does not match url host '" +
                           host + "'");
    }
    if (corpus.index.documents.count(doc.url)) {
      throw IntegrityError(dpath + ".url: duplicate document url '" + doc.url + "'");
    }
    const auto& jrel = detail::jfield(jd, "relevance", dpath);
    if (!jrel.is_array()) throw ParseError(dpath + ".relevance: expected an array");
    for (std::size_t ri = 0; ri < jrel.size(); ++ri) {
      const std::string rpath = dpath + ".relevance[" + std::to_string(ri) + "]";
      const auto& jr = jrel[ri];
      const std::string qid = detail::jstring(jr, "query_id", rpath);
      if (!query_ids.count(qid)) {
        throw IntegrityError(rpath + ".query_id: unknown query '" + qid + "'");
      }
      const auto& jscore = detail::jfield(jr, "score", rpath);
      if (!jscore.is_number()) throw ParseError(rpath + ".score: expected a number");
      const double score = jscore.get<double>();
      if (!std::isfinite(score)) throw IntegrityError(rpath + ".score: must be finite");
      corpus.index.relevance[qid].emplace_back(doc.url, score);
    }
    corpus.index.documents.emplace(doc.url, std::move(doc));
  }

  for (auto& [qid, scored] : corpus.index.relevance) {
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  for (const auto& [qid, q] : corpus.queries) {
    corpus.index.query_lookup.emplace_back(q.text, qid);
  }
  std::sort(corpus.index.query_lookup.begin(), corpus.index.query_lookup.end(),
            [](const auto& a, const auto& b) {
              if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
              return a.second < b.second;
            });
  return corpus;
}

/// Load and validate a corpus file. Parse errors carry the byte position,
/// integrity errors name the offending field.
inline Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open corpus file: " + path);
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return load_corpus_json(root, path);
}

/// Resolve free query text against the corpus: exact match first, otherwise
/// the longest corpus query text contained in it as a substring. Derived
/// sub-queries decorate the original query, so this maps them back to its
/// relevance profile.
inline std::optional<std::string> resolve_query(const SearchIndex& index,
                                                std::string_view query_text) {
  for (const auto& [text, id] : index.query_lookup) {
    if (text == query_text) return id;
  }
  for (const auto& [text, id] : index.query_lookup) {
    if (query_text.find(text) != std::string_view::npos) return id;
  }
  return std::nullopt;
}

/// Rank documents for a query: relevance score plus uniform jitter in
/// [-epsilon, +epsilon] keyed by (index seed, call seed, url), descending.
/// Documents without positive relevance never enter the list; at most k
/// results, ranks 1..n. Deterministic in all arguments.
inline std::vector<SearchResult> search(const SearchIndex& index,
                                        const std::string& query_text, int k,
                                        std::uint64_t perturbation_seed) {
  if (k < 1) throw PreconditionError("search: k must be >= 1");
  std::vector<SearchResult> out;
  const auto qid = resolve_query(index, query_text);
  if (!qid) return out;
  const auto rel = index.relevance.find(*qid);
  if (rel == index.relevance.end()) return out;

  const std::uint64_t call_seed = mix_seed(index.rng_seed, perturbation_seed);
  std::vector<std::pair<double, const std::string*>> scored;  // (perturbed, url)
  for (const auto& [url, score] : rel->second) {
    if (score <= 0.0) continue;
    scored.emplace_back(score + seeded_jitter(call_seed, url, index.jitter_epsilon), &url);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  const std::size_t n = std::min<std::size_t>(scored.size(), static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) {
    const WebDocument& doc = index.documents.at(*scored[i].second);
    out.push_back({doc.url, doc.snippet, static_cast<int>(i) + 1});
  }
  return out;
}

/// Content for the requested surface; the full surface falls back to the
/// snippet when a page only exposes its SERP preview (fetch-blocked hosts).
inline std::string fetch_content(const WebDocument& doc, Surface surface) {
  if (surface == Surface::full_content && doc.fetch_policy == FetchPolicy::full_available &&
      !doc.full_content.empty()) {
    return doc.full_content;
  }
  return doc.snippet;
}

/// Interface for swapping the mock engine for a live search backend.
/// Implementations must keep result order stable for identical requests.
class SearchClient {
public:
  virtual ~SearchClient() = default;
  virtual std::vector<SearchResult> results(const std::string& query_text, int k) = 0;
};

/// Wire format helpers for SearchClient implementations.
inline nlohmann::json search_request_json(const std::string& query_text, int k) {
  return nlohmann::json{{"query", query_text}, {"k", k}};
}

inline std::vector<SearchResult> parse_search_response(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("results") || !j.at("results").is_array()) {
    throw ParseError("search response: expected {results: [...]}");
  }
  std::vector<SearchResult> out;
  int rank = 1;
  for (const auto& r : j.at("results")) {
    out.push_back({detail::jstring(r, "url", "search response"),
                   detail::jstring(r, "snippet", "search response"), rank++});
  }
  return out;
}

}  // namespace poisim
