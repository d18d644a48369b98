#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "poisim/corpus.hpp"
#include "poisim/error.hpp"
#include "poisim/poison.hpp"
#include "poisim/tables.hpp"
#include "poisim/text.hpp"
#include "poisim/ugc.hpp"

// Reconnaissance analytics over retrieval logs: how much UGC a pipeline
// touches, which platforms it comes from, which URLs recur across the queries
// of a topic cluster, and how those recurring sets overlap between systems.
// Target selection for an interposition campaign is driven by the same
// frequency statistics. All of it runs on ingested logs alone, so closed
// systems can be analyzed from whatever traces they expose.

namespace poisim {

enum class Phase { retrieved, cited };

inline const char* phase_name(Phase p) { return p == Phase::retrieved ? "retrieved" : "cited"; }

inline Phase parse_phase(std::string_view name) {
  if (name == "retrieved") return Phase::retrieved;
  if (name == "cited") return Phase::cited;
  throw ParseError("unknown log phase: '" + std::string(name) + "'");
}

struct LogEntry {
  std::string query_id;
  std::string url;
  Phase phase = Phase::retrieved;
};

/// All log entries of one system.
struct RetrievalLog {
  std::string system_name;
  std::vector<LogEntry> entries;
};

/// Load a JSON-lines log file ({system, query_id, url, phase} per line) and
/// group it by system, sorted by system name. Blank lines are skipped.
inline std::vector<RetrievalLog> load_retrieval_logs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open log file: " + path);
  std::map<std::string, RetrievalLog> by_system;
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
    const std::string where = path + ":" + std::to_string(lineno);
    if (!j.is_object() || !j.contains("system") || !j.contains("query_id") ||
        !j.contains("url") || !j.contains("phase")) {
      throw ParseError(where + ": expected {system, query_id, url, phase}");
    }
    const std::string system = j.at("system").get<std::string>();
    auto& log = by_system[system];
    log.system_name = system;
    log.entries.push_back({j.at("query_id").get<std::string>(), j.at("url").get<std::string>(),
                           parse_phase(j.at("phase").get<std::string>())});
  }
  std::vector<RetrievalLog> out;
  for (auto& [name, log] : by_system) out.push_back(std::move(log));
  return out;
}

inline void append_log_jsonl(std::string& out, const RetrievalLog& log) {
  for (const LogEntry& e : log.entries) {
    nlohmann::json j{{"system", log.system_name},
                     {"query_id", e.query_id},
                     {"url", e.url},
                     {"phase", phase_name(e.phase)}};
    out += j.dump();
    out.push_back('\n');
  }
}

namespace detail {

inline Platform classify_lenient(const std::string& url, const PlatformConfig& config) {
  try {
    return classify_url(url, config);
  } catch (const ParseError&) {
    return Platform::non_ugc;  // junk in an ingested log is simply not UGC
  }
}

/// Distinct (query_id, url) pairs of one phase.
inline std::set<std::pair<std::string, std::string>> distinct_pairs(const RetrievalLog& log,
                                                                    Phase phase) {
  std::set<std::pair<std::string, std::string>> out;
  for (const LogEntry& e : log.entries) {
    if (e.phase == phase) out.insert({e.query_id, e.url});
  }
  return out;
}

}  // namespace detail

struct PrevalenceStats {
  long long total_pairs = 0;  // distinct (query, url) pairs
  long long ugc_pairs = 0;
  double ugc_pct() const {
    return total_pairs == 0 ? 0.0 : 100.0 * static_cast<double>(ugc_pairs) /
                                        static_cast<double>(total_pairs);
  }
};

/// Share of distinct (query, url) pairs that point at UGC platforms.
inline PrevalenceStats ugc_prevalence(const RetrievalLog& log, Phase phase,
                                      const PlatformConfig& config = default_platform_config()) {
  PrevalenceStats s;
  for (const auto& [qid, url] : detail::distinct_pairs(log, phase)) {
    ++s.total_pairs;
    if (is_ugc(detail::classify_lenient(url, config))) ++s.ugc_pairs;
  }
  return s;
}

/// Platform shares within the UGC slice, in percent of distinct UGC pairs.
/// Empty map when the log has no UGC pairs for the phase.
inline std::map<Platform, double> platform_composition(
    const RetrievalLog& log, Phase phase,
    const PlatformConfig& config = default_platform_config()) {
  std::map<Platform, long long> counts;
  long long total = 0;
  for (const auto& [qid, url] : detail::distinct_pairs(log, phase)) {
    const Platform p = detail::classify_lenient(url, config);
    if (!is_ugc(p)) continue;
    ++counts[p];
    ++total;
  }
  std::map<Platform, double> out;
  for (const auto& [p, n] : counts) {
    out[p] = 100.0 * static_cast<double>(n) / static_cast<double>(total);
  }
  return out;
}

/// Cross-query URL overlap within topic clusters.
struct OverlapStats {
  // cluster id -> recurring UGC url -> number of distinct queries it served.
  std::map<std::string, std::map<std::string, int>> recurring;
  int max_single_url_freq = 0;
  int clusters_with_recurring = 0;

  /// Recurring (cluster, url) pairs, each counted once and summed.
  long long total_recurring() const {
    long long n = 0;
    for (const auto& [cid, urls] : recurring) n += static_cast<long long>(urls.size());
    return n;
  }
};

/// UGC URLs appearing for at least `min_queries` distinct queries of the same
/// cluster. Entries whose query is not in any supplied cluster are ignored.
inline OverlapStats recurring_urls(const RetrievalLog& log,
                                   const std::vector<TopicCluster>& clusters, Phase phase,
                                   int min_queries = 2,
                                   const PlatformConfig& config = default_platform_config()) {
  if (min_queries < 1) throw PreconditionError("recurring_urls: min_queries must be >= 1");
  std::map<std::string, std::string> cluster_of;  // query id -> cluster id
  for (const TopicCluster& c : clusters) {
    for (const std::string& qid : c.query_ids) cluster_of[qid] = c.id;
  }
  // cluster -> url -> distinct queries.
  std::map<std::string, std::map<std::string, std::set<std::string>>> hits;
  for (const auto& [qid, url] : detail::distinct_pairs(log, phase)) {
    auto it = cluster_of.find(qid);
    if (it == cluster_of.end()) continue;
    if (!is_ugc(detail::classify_lenient(url, config))) continue;
    hits[it->second][url].insert(qid);
  }
  OverlapStats out;
  for (const auto& [cid, urls] : hits) {
    for (const auto& [url, queries] : urls) {
      const int freq = static_cast<int>(queries.size());
      if (freq < min_queries) continue;
      out.recurring[cid][url] = freq;
      out.max_single_url_freq = std::max(out.max_single_url_freq, freq);
    }
  }
  out.clusters_with_recurring = static_cast<int>(out.recurring.size());
  return out;
}

/// Flatten an overlap result to its distinct recurring URLs.
inline std::set<std::string> recurring_url_set(const OverlapStats& stats) {
  std::set<std::string> out;
  for (const auto& [cid, urls] : stats.recurring) {
    for (const auto& [url, freq] : urls) out.insert(url);
  }
  return out;
}

struct JaccardStats {
  long long shared = 0;
  long long union_size = 0;
  // Two systems with no recurring URLs at all overlap vacuously.
  double jaccard() const {
    return union_size == 0 ? 1.0
                           : static_cast<double>(shared) / static_cast<double>(union_size);
  }
};

inline JaccardStats jaccard_urls(const std::set<std::string>& a, const std::set<std::string>& b) {
  JaccardStats s;
  for (const auto& url : a) {
    if (b.count(url)) ++s.shared;
  }
  s.union_size = static_cast<long long>(a.size() + b.size()) - s.shared;
  return s;
}

/// Jaccard overlap of two systems' recurring UGC URL sets.
inline JaccardStats jaccard_recurring(const OverlapStats& a, const OverlapStats& b) {
  return jaccard_urls(recurring_url_set(a), recurring_url_set(b));
}

enum class Strategy { one_url, three_url, domain_prefix };

inline const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::one_url: return "one_url";
    case Strategy::three_url: return "three_url";
    case Strategy::domain_prefix: return "domain_prefix";
  }
  return "one_url";
}

inline Strategy parse_strategy(std::string_view name) {
  if (name == "one_url" || name == "1-url") return Strategy::one_url;
  if (name == "three_url" || name == "3-url") return Strategy::three_url;
  if (name == "domain_prefix") return Strategy::domain_prefix;
  throw ParseError("unknown strategy: '" + std::string(name) + "'");
}

/// Pick attack targets for one cluster from a clean retrieval log. URLs rank
/// by the number of distinct cluster queries they served (ties: lexicographic
/// URL order). domain_prefix requires a recurring URL and targets the
/// community prefix of the top one. Surface on the returned spec defaults to
/// the SERP snippet; the caller aligns it with the run's surface.
inline TargetSpec select_targets(const RetrievalLog& log, const Corpus& corpus,
                                 const std::string& cluster_id, Strategy strategy,
                                 const PlatformConfig& config = default_platform_config()) {
  const TopicCluster* cluster = nullptr;
  for (const auto& c : corpus.clusters) {
    if (c.id == cluster_id) cluster = &c;
  }
  if (cluster == nullptr) throw PreconditionError("select_targets: unknown cluster '" + cluster_id + "'");
  const std::set<std::string> cluster_queries(cluster->query_ids.begin(),
                                              cluster->query_ids.end());
  std::map<std::string, std::set<std::string>> queries_per_url;
  for (const auto& [qid, url] : detail::distinct_pairs(log, Phase::retrieved)) {
    if (!cluster_queries.count(qid)) continue;
    if (!is_ugc(detail::classify_lenient(url, config))) continue;
    queries_per_url[url].insert(qid);
  }
  std::vector<std::pair<std::string, int>> ranked;  // (url, freq)
  for (const auto& [url, queries] : queries_per_url) {
    ranked.emplace_back(url, static_cast<int>(queries.size()));
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  TargetSpec spec;
  switch (strategy) {
    case Strategy::one_url:
    case Strategy::three_url: {
      if (ranked.empty()) {
        throw NoTargetError("cluster '" + cluster_id + "' has no retrieved UGC URLs in the log");
      }
      spec.mode = TargetSpec::Mode::exact_urls;
      const std::size_t take = strategy == Strategy::one_url ? 1 : 3;
      for (std::size_t i = 0; i < ranked.size() && i < take; ++i) {
        spec.urls.insert(ranked[i].first);
      }
      break;
    }
    case Strategy::domain_prefix: {
      std::vector<std::pair<std::string, int>> rec;
      for (const auto& [url, freq] : ranked) {
        if (freq >= 2) rec.emplace_back(url, freq);
      }
      if (rec.empty()) {
        throw NoTargetError("cluster '" + cluster_id + "' has no recurring UGC URLs in the log");
      }
      spec.mode = TargetSpec::Mode::domain_prefix;
      spec.prefix = community_prefix(rec.front().first);
      break;
    }
  }
  return spec;
}

// ----- report layouts -------------------------------------------------------

/// Prevalence per system: totals, UGC counts and share.
inline Table prevalence_table(const std::vector<std::pair<std::string, PrevalenceStats>>& rows,
                              const std::string& title) {
  Table t;
  t.title = title;
  t.header = {"System", "Total URLs", "UGC URLs", "UGC %"};
  for (const auto& [system, s] : rows) {
    t.rows.push_back({system, std::to_string(s.total_pairs), std::to_string(s.ugc_pairs),
                      fmt1(s.ugc_pct())});
  }
  return t;
}

/// Platform shares per system; the named big-three platforms get their own
/// rows, everything else folds into "Other UGC".
inline Table composition_table(
    const std::vector<std::pair<std::string, std::map<Platform, double>>>& columns,
    const std::string& title) {
  Table t;
  t.title = title;
  t.header = {"Platform"};
  for (const auto& [system, comp] : columns) t.header.push_back(system);
  const Platform majors[] = {Platform::reddit, Platform::youtube, Platform::facebook};
  for (Platform p : majors) {
    std::vector<std::string> row{platform_name(p)};
    for (const auto& [system, comp] : columns) {
      auto it = comp.find(p);
      row.push_back(fmt1(it == comp.end() ? 0.0 : it->second));
    }
    t.rows.push_back(std::move(row));
  }
  std::vector<std::string> other{"Other UGC"};
  for (const auto& [system, comp] : columns) {
    double sum = 0.0;
    for (const auto& [p, pct] : comp) {
      if (p != Platform::reddit && p != Platform::youtube && p != Platform::facebook) sum += pct;
    }
    other.push_back(fmt1(sum));
  }
  t.rows.push_back(std::move(other));
  return t;
}

/// Cross-query overlap summary per system.
inline Table overlap_table(const std::vector<std::pair<std::string, OverlapStats>>& rows,
                           std::size_t cluster_count, const std::string& title) {
  Table t;
  t.title = title;
  t.header = {"Statistic"};
  for (const auto& [system, s] : rows) t.header.push_back(system);
  std::vector<std::string> r1{"Recurring UGC URLs"}, r2{"Max single-URL frequency"},
      r3{"Clusters with recurring URLs"};
  for (const auto& [system, s] : rows) {
    r1.push_back(std::to_string(s.total_recurring()));
    r2.push_back(std::to_string(s.max_single_url_freq));
    r3.push_back(std::to_string(s.clusters_with_recurring) + "/" +
                 std::to_string(cluster_count));
  }
  t.rows.push_back(std::move(r1));
  t.rows.push_back(std::move(r2));
  t.rows.push_back(std::move(r3));
  return t;
}

/// Recurring URL counts per cluster and system.
inline Table recurring_per_cluster_table(
    const std::vector<TopicCluster>& clusters,
    const std::vector<std::pair<std::string, OverlapStats>>& columns, const std::string& title) {
  Table t;
  t.title = title;
  t.header = {"Cluster"};
  for (const auto& [system, s] : columns) t.header.push_back(system);
  for (const TopicCluster& c : clusters) {
    std::vector<std::string> row{c.id};
    for (const auto& [system, s] : columns) {
      auto it = s.recurring.find(c.id);
      row.push_back(std::to_string(it == s.recurring.end() ? 0 : it->second.size()));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Pairwise recurring-set overlap between systems.
inline Table jaccard_table(
    const std::vector<std::pair<std::string, JaccardStats>>& pairs, const std::string& title) {
  Table t;
  t.title = title;
  t.header = {"System pair", "Shared", "Union", "Jaccard"};
  for (const auto& [label, s] : pairs) {
    t.rows.push_back({label, std::to_string(s.shared), std::to_string(s.union_size),
                      fmt3(s.jaccard())});
  }
  return t;
}

}  // namespace poisim
