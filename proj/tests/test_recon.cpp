#include "doctest.h"

#include "poisim/recon.hpp"

#include "test_support.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace poisim;

namespace {

RetrievalLog make_log(const std::string& system,
                      const std::vector<LogEntry>& entries) {
  RetrievalLog log;
  log.system_name = system;
  log.entries = entries;
  return log;
}

}  // namespace

TEST_CASE("ugc_prevalence counts distinct pairs per phase") {
  // Six distinct retrieved pairs, one UGC; the duplicate entry and the cited
  // entry must not affect the retrieved-phase numbers.
  RetrievalLog log = make_log(
      "sys", {
                 {"q1", "https://a.com/1", Phase::retrieved},
                 {"q1", "https://a.com/1", Phase::retrieved},  // duplicate pair
                 {"q1", "https://b.com/1", Phase::retrieved},
                 {"q1", "https://reddit.com/r/x/comments/1", Phase::retrieved},
                 {"q2", "https://a.com/1", Phase::retrieved},
                 {"q2", "https://c.com/1", Phase::retrieved},
                 {"q2", "https://d.com/1", Phase::retrieved},
                 {"q1", "https://a.com/1", Phase::cited},
             });
  PrevalenceStats s = ugc_prevalence(log, Phase::retrieved);
  CHECK(s.total_pairs == 6);
  CHECK(s.ugc_pairs == 1);
  CHECK(fmt1(s.ugc_pct()) == "16.7");

  PrevalenceStats cited = ugc_prevalence(log, Phase::cited);
  CHECK(cited.total_pairs == 1);
  CHECK(cited.ugc_pairs == 0);
  CHECK(cited.ugc_pct() == 0.0);

  // The same URL under different queries counts once per query.
  PrevalenceStats again = ugc_prevalence(log, Phase::retrieved);
  CHECK(again.total_pairs == s.total_pairs);

  RetrievalLog empty = make_log("sys", {});
  CHECK(ugc_prevalence(empty, Phase::retrieved).total_pairs == 0);
  CHECK(ugc_prevalence(empty, Phase::retrieved).ugc_pct() == 0.0);
}

TEST_CASE("junk urls in ingested logs count as non-UGC instead of throwing") {
  RetrievalLog log = make_log("sys", {
                                         {"q1", "not a url", Phase::retrieved},
                                         {"q1", "https://reddit.com/r/x", Phase::retrieved},
                                     });
  PrevalenceStats s = ugc_prevalence(log, Phase::retrieved);
  CHECK(s.total_pairs == 2);
  CHECK(s.ugc_pairs == 1);
}

TEST_CASE("platform_composition shares sum over the UGC slice only") {
  RetrievalLog log = make_log(
      "sys", {
                 {"q1", "https://reddit.com/r/a/1", Phase::cited},
                 {"q1", "https://reddit.com/r/a/2", Phase::cited},
                 {"q2", "https://reddit.com/r/a/1", Phase::cited},
                 {"q2", "https://reddit.com/r/b/1", Phase::cited},
                 {"q1", "https://youtube.com/watch_x", Phase::cited},
                 {"q1", "https://nonugc.org/page", Phase::cited},
             });
  auto comp = platform_composition(log, Phase::cited);
  // Five distinct UGC pairs: four reddit, one youtube.
  CHECK(comp.at(Platform::reddit) == doctest::Approx(80.0));
  CHECK(comp.at(Platform::youtube) == doctest::Approx(20.0));
  CHECK(comp.count(Platform::facebook) == 0);

  double total = 0.0;
  for (const auto& [p, pct] : comp) total += pct;
  CHECK(total == doctest::Approx(100.0));

  RetrievalLog no_ugc = make_log("sys", {{"q1", "https://nonugc.org/p", Phase::cited}});
  CHECK(platform_composition(no_ugc, Phase::cited).empty());
}

TEST_CASE("recurring_urls needs distinct queries within one cluster") {
  Corpus c = testutil::make_small_corpus();
  RetrievalLog log = make_log(
      "sys",
      {
          // UGC url under two distinct cancel_acme queries: recurring.
          {"q_c1", "https://reddit.com/r/acme/comments/cancel_guide", Phase::retrieved},
          {"q_c2", "https://reddit.com/r/acme/comments/cancel_guide", Phase::retrieved},
          // Same query twice is one distinct pair: not recurring.
          {"q_c1", "https://quora.com/how-do-i-cancel-acme", Phase::retrieved},
          {"q_c1", "https://quora.com/how-do-i-cancel-acme", Phase::retrieved},
          // Non-UGC url under three queries: ignored entirely.
          {"q_c1", "https://acme.com/support/cancel", Phase::retrieved},
          {"q_c2", "https://acme.com/support/cancel", Phase::retrieved},
          {"q_c3", "https://acme.com/support/cancel", Phase::retrieved},
          // Unknown query id: ignored.
          {"ghost", "https://reddit.com/r/acme/comments/cancel_guide", Phase::retrieved},
      });
  OverlapStats stats = recurring_urls(log, c.clusters, Phase::retrieved);
  REQUIRE(stats.recurring.count("cancel_acme") == 1);
  CHECK(stats.recurring.at("cancel_acme").size() == 1);
  CHECK(stats.recurring.at("cancel_acme").at("https://reddit.com/r/acme/comments/cancel_guide") ==
        2);
  CHECK(stats.max_single_url_freq == 2);
  CHECK(stats.clusters_with_recurring == 1);
  CHECK(stats.total_recurring() == 1);

  CHECK_THROWS_AS(recurring_urls(log, c.clusters, Phase::retrieved, 0), PreconditionError);
}

TEST_CASE("raising min_queries never adds recurring urls") {
  Corpus c = testutil::make_small_corpus();
  // Random log over the corpus queries and a pool of UGC urls.
  std::mt19937_64 rng(11);
  std::vector<std::string> qids;
  for (const auto& [qid, q] : c.queries) qids.push_back(qid);
  std::vector<std::string> urls = {
      "https://reddit.com/r/one/a",  "https://reddit.com/r/one/b",
      "https://reddit.com/r/two/a",  "https://quora.com/x",
      "https://youtube.com/watch_1", "https://plain.org/a",
  };
  RetrievalLog log = make_log("sys", {});
  for (int i = 0; i < 300; ++i) {
    log.entries.push_back({qids[rng() % qids.size()], urls[rng() % urls.size()],
                           Phase::retrieved});
  }
  std::set<std::string> prev;
  bool first = true;
  for (int mq = 1; mq <= 5; ++mq) {
    auto s = recurring_urls(log, c.clusters, Phase::retrieved, mq);
    auto cur = recurring_url_set(s);
    if (!first) {
      for (const auto& url : cur) CHECK(prev.count(url) == 1);  // nested downward
    }
    prev = cur;
    first = false;
  }
}

TEST_CASE("a url recurring in two clusters counts once per cluster") {
  Corpus c = testutil::make_small_corpus();
  RetrievalLog log = make_log(
      "sys", {
                 {"q_c1", "https://reddit.com/r/shared/post", Phase::retrieved},
                 {"q_c2", "https://reddit.com/r/shared/post", Phase::retrieved},
                 {"q_b1", "https://reddit.com/r/shared/post", Phase::retrieved},
                 {"q_b2", "https://reddit.com/r/shared/post", Phase::retrieved},
             });
  OverlapStats stats = recurring_urls(log, c.clusters, Phase::retrieved);
  CHECK(stats.clusters_with_recurring == 2);
  CHECK(stats.total_recurring() == 2);  // one (cluster, url) pair per cluster
  CHECK(recurring_url_set(stats).size() == 1);
}

TEST_CASE("jaccard statistics match the frozen set fixture") {
  // Sets engineered to share 37 urls with a union of 181.
  std::set<std::string> a, b;
  for (int i = 0; i < 37; ++i) a.insert("https://shared.com/" + std::to_string(i));
  for (int i = 0; i < 37; ++i) b.insert("https://shared.com/" + std::to_string(i));
  for (int i = 0; i < 70; ++i) a.insert("https://only-a.com/" + std::to_string(i));
  for (int i = 0; i < 74; ++i) b.insert("https://only-b.com/" + std::to_string(i));

  JaccardStats s = jaccard_urls(a, b);
  CHECK(s.shared == 37);
  CHECK(s.union_size == 181);
  CHECK(fmt3(s.jaccard()) == "0.204");

  // Identities.
  JaccardStats self = jaccard_urls(a, a);
  CHECK(self.jaccard() == doctest::Approx(1.0));
  JaccardStats disjoint = jaccard_urls({"https://x.com/1"}, {"https://y.com/1"});
  CHECK(disjoint.shared == 0);
  CHECK(disjoint.jaccard() == doctest::Approx(0.0));
  JaccardStats both_empty = jaccard_urls({}, {});
  CHECK(both_empty.union_size == 0);
  CHECK(both_empty.jaccard() == doctest::Approx(1.0));

  // Symmetry.
  JaccardStats ba = jaccard_urls(b, a);
  CHECK(ba.shared == s.shared);
  CHECK(ba.union_size == s.union_size);
}

TEST_CASE("select_targets ranks UGC urls by distinct-query frequency") {
  Corpus c = testutil::make_small_corpus();
  RetrievalLog log = make_log(
      "sys",
      {
          {"q_c1", "https://reddit.com/r/acme/comments/cancel_guide", Phase::retrieved},
          {"q_c2", "https://reddit.com/r/acme/comments/cancel_guide", Phase::retrieved},
          {"q_c3", "https://reddit.com/r/acme/comments/cancel_guide", Phase::retrieved},
          {"q_c1", "https://reddit.com/r/cordcutters/comments/acme_exp", Phase::retrieved},
          {"q_c2", "https://reddit.com/r/cordcutters/comments/acme_exp", Phase::retrieved},
          {"q_c2", "https://quora.com/how-do-i-cancel-acme", Phase::retrieved},
          // High-frequency non-UGC url must never be targeted.
          {"q_c1", "https://acme.com/support/cancel", Phase::retrieved},
          {"q_c2", "https://acme.com/support/cancel", Phase::retrieved},
          {"q_c3", "https://acme.com/support/cancel", Phase::retrieved},
      });

  TargetSpec one = select_targets(log, c, "cancel_acme", Strategy::one_url);
  CHECK(one.mode == TargetSpec::Mode::exact_urls);
  REQUIRE(one.urls.size() == 1);
  CHECK(one.urls.count("https://reddit.com/r/acme/comments/cancel_guide") == 1);
  CHECK(one.surface == Surface::serp_snippet);

  TargetSpec three = select_targets(log, c, "cancel_acme", Strategy::three_url);
  REQUIRE(three.urls.size() == 3);
  CHECK(three.urls.count("https://quora.com/how-do-i-cancel-acme") == 1);
  // The single-url pick is always a subset of the three-url pick.
  for (const auto& url : one.urls) CHECK(three.urls.count(url) == 1);

  TargetSpec prefix = select_targets(log, c, "cancel_acme", Strategy::domain_prefix);
  CHECK(prefix.mode == TargetSpec::Mode::domain_prefix);
  CHECK(prefix.prefix == "reddit.com/r/acme");
}

TEST_CASE("select_targets breaks frequency ties lexicographically") {
  Corpus c = testutil::make_small_corpus();
  RetrievalLog log = make_log(
      "sys", {
                 {"q_c1", "https://reddit.com/r/bbb/post", Phase::retrieved},
                 {"q_c2", "https://reddit.com/r/bbb/post", Phase::retrieved},
                 {"q_c1", "https://reddit.com/r/aaa/post", Phase::retrieved},
                 {"q_c2", "https://reddit.com/r/aaa/post", Phase::retrieved},
             });
  TargetSpec one = select_targets(log, c, "cancel_acme", Strategy::one_url);
  CHECK(one.urls.count("https://reddit.com/r/aaa/post") == 1);
  TargetSpec prefix = select_targets(log, c, "cancel_acme", Strategy::domain_prefix);
  CHECK(prefix.prefix == "reddit.com/r/aaa");
}

TEST_CASE("select_targets preconditions and failure modes") {
  Corpus c = testutil::make_small_corpus();

  // Frequency-1 UGC supports exact-url strategies but not the prefix one.
  RetrievalLog once = make_log(
      "sys", {{"q_c1", "https://reddit.com/r/acme/comments/cancel_guide", Phase::retrieved}});
  TargetSpec one = select_targets(once, c, "cancel_acme", Strategy::one_url);
  CHECK(one.urls.size() == 1);
  TargetSpec three = select_targets(once, c, "cancel_acme", Strategy::three_url);
  CHECK(three.urls.size() == 1);  // takes what exists, up to three
  CHECK_THROWS_AS(select_targets(once, c, "cancel_acme", Strategy::domain_prefix),
                  NoTargetError);

  // No UGC at all: nothing to target.
  RetrievalLog none = make_log(
      "sys", {{"q_c1", "https://acme.com/support/cancel", Phase::retrieved}});
  CHECK_THROWS_AS(select_targets(none, c, "cancel_acme", Strategy::one_url), NoTargetError);

  CHECK_THROWS_AS(select_targets(none, c, "ghost_cluster", Strategy::one_url),
                  PreconditionError);
}

TEST_CASE("strategy labels parse including the display aliases") {
  CHECK(parse_strategy("one_url") == Strategy::one_url);
  CHECK(parse_strategy("1-url") == Strategy::one_url);
  CHECK(parse_strategy("three_url") == Strategy::three_url);
  CHECK(parse_strategy("3-url") == Strategy::three_url);
  CHECK(parse_strategy("domain_prefix") == Strategy::domain_prefix);
  CHECK_THROWS_AS(parse_strategy("all_urls"), ParseError);
  for (Strategy s : {Strategy::one_url, Strategy::three_url, Strategy::domain_prefix}) {
    CHECK(parse_strategy(strategy_name(s)) == s);
  }
}

TEST_CASE("retrieval logs round trip through jsonl") {
  RetrievalLog a = make_log("alpha", {
                                         {"q1", "https://a.com/1", Phase::retrieved},
                                         {"q1", "https://a.com/1", Phase::cited},
                                     });
  RetrievalLog b = make_log("beta", {{"q2", "https://b.com/2", Phase::retrieved}});

  std::string text;
  append_log_jsonl(text, b);  // written out of order on purpose
  text += "\n";               // blank line must be skipped
  append_log_jsonl(text, a);

  const std::string path = "recon_roundtrip_test.jsonl";
  {
    std::ofstream out(path, std::ios::binary);
    out << text;
  }
  auto logs = load_retrieval_logs(path);
  std::remove(path.c_str());

  REQUIRE(logs.size() == 2);
  CHECK(logs[0].system_name == "alpha");  // grouped and sorted by system
  CHECK(logs[1].system_name == "beta");
  REQUIRE(logs[0].entries.size() == 2);
  CHECK(logs[0].entries[0].query_id == "q1");
  CHECK(logs[0].entries[1].phase == Phase::cited);
  CHECK(logs[1].entries[0].url == "https://b.com/2");
}

TEST_CASE("malformed log lines report the line number") {
  const std::string path = "recon_badline_test.jsonl";
  {
    std::ofstream out(path, std::ios::binary);
    out << R"({"system":"s","query_id":"q","url":"u","phase":"retrieved"})" << "\n";
    out << "{broken\n";
  }
  try {
    load_retrieval_logs(path);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(contains(e.what(), ":2"));
  }
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_retrieval_logs("/nonexistent/log.jsonl"), ParseError);
}

TEST_CASE("recon tables carry the documented shapes") {
  PrevalenceStats p;
  p.total_pairs = 6;
  p.ugc_pairs = 1;
  Table prev = prevalence_table({{"SysA", p}}, "Prevalence");
  CHECK(prev.header == std::vector<std::string>{"System", "Total URLs", "UGC URLs", "UGC %"});
  REQUIRE(prev.rows.size() == 1);
  CHECK(prev.rows[0] == std::vector<std::string>{"SysA", "6", "1", "16.7"});

  std::map<Platform, double> comp{{Platform::reddit, 80.0}, {Platform::quora, 20.0}};
  Table ct = composition_table({{"SysA", comp}}, "Composition");
  REQUIRE(ct.rows.size() == 4);  // reddit, youtube, facebook, Other UGC
  CHECK(ct.rows[0] == std::vector<std::string>{"reddit", "80.0"});
  CHECK(ct.rows[1] == std::vector<std::string>{"youtube", "0.0"});
  CHECK(ct.rows[3] == std::vector<std::string>{"Other UGC", "20.0"});

  OverlapStats ov;
  ov.recurring["c1"]["https://reddit.com/r/x/1"] = 3;
  ov.recurring["c1"]["https://reddit.com/r/x/2"] = 2;
  ov.max_single_url_freq = 3;
  ov.clusters_with_recurring = 1;
  Table ot = overlap_table({{"SysA", ov}}, 5, "Overlap");
  REQUIRE(ot.rows.size() == 3);
  CHECK(ot.rows[0] == std::vector<std::string>{"Recurring UGC URLs", "2"});
  CHECK(ot.rows[1] == std::vector<std::string>{"Max single-URL frequency", "3"});
  CHECK(ot.rows[2] == std::vector<std::string>{"Clusters with recurring URLs", "1/5"});

  JaccardStats js;
  js.shared = 37;
  js.union_size = 181;
  Table jt = jaccard_table({{"SysA vs SysB", js}}, "Overlap across systems");
  REQUIRE(jt.rows.size() == 1);
  CHECK(jt.rows[0] == std::vector<std::string>{"SysA vs SysB", "37", "181", "0.204"});

  Corpus c = testutil::make_small_corpus();
  Table rt = recurring_per_cluster_table(c.clusters, {{"SysA", ov}}, "Per cluster");
  REQUIRE(rt.rows.size() == c.clusters.size());
  CHECK(rt.rows[0] == std::vector<std::string>{"cancel_acme", "0"});  // ov only has c1
  CHECK(rt.header == std::vector<std::string>{"Cluster", "SysA"});
}
