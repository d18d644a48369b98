#include "doctest.h"

#include "poisim/metrics.hpp"

#include "test_support.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

using namespace poisim;

namespace {

RunRecord make_run(const std::string& qid, bool exposed, bool cited, bool mentioned,
                   long long payload = 13, long long organic = 87) {
  RunRecord rec;
  rec.system = "costorm";
  rec.query_id = qid;
  rec.seed = 1;
  RetrievalEvent clean_ev;
  clean_ev.subquery = "sq";
  clean_ev.url = "https://clean.org/a";
  clean_ev.organic_words = static_cast<int>(organic);
  rec.retrievals.push_back(clean_ev);
  if (exposed) {
    RetrievalEvent ev;
    ev.subquery = "sq";
    ev.url = "https://reddit.com/r/x/post";
    ev.injected = true;
    ev.payload_words = static_cast<int>(payload);
    ev.organic_words = 0;
    rec.retrievals.push_back(ev);
    rec.injections.push_back({qid, "sq", ev.url, ev.payload_words, ev.organic_words});
  }
  if (cited) rec.report.cited_urls.push_back("https://reddit.com/r/x/post");
  rec.report.cited_urls.push_back("https://clean.org/a");
  if (mentioned) rec.report.mentioned_entities.insert("EntityOne");
  return rec;
}

}  // namespace

TEST_CASE("summarize counts runs, exposure, citation and mentions") {
  std::vector<RunRecord> records{
      make_run("q_c1", true, true, true),
      make_run("q_c1", true, false, false),
      make_run("q_c2", false, false, false),
      make_run("q_c3", false, false, false),
  };
  AttackSummary s = summarize(records);
  CHECK(s.runs == 4);
  CHECK(s.exposed == 2);
  CHECK(s.cited == 1);
  CHECK(s.mentioned == 1);
  CHECK(s.mentioned_exposed == 1);
  CHECK(s.exposure_pct() == doctest::Approx(50.0));
  CHECK(s.cited_pct() == doctest::Approx(25.0));
  CHECK(s.mentioned_pct() == doctest::Approx(25.0));
  REQUIRE(s.cited_given_exposure_pct().has_value());
  CHECK(*s.cited_given_exposure_pct() == doctest::Approx(50.0));
  REQUIRE(s.mentioned_given_exposure_pct().has_value());
  CHECK(*s.mentioned_given_exposure_pct() == doctest::Approx(50.0));
  REQUIRE(s.ratio_terms.size() == 2);

  CHECK_THROWS_AS(summarize({}), PreconditionError);
}

TEST_CASE("conditional rates are absent without exposure") {
  std::vector<RunRecord> records{make_run("q_c1", false, false, false),
                                 make_run("q_c2", false, false, false)};
  AttackSummary s = summarize(records);
  CHECK(s.exposed == 0);
  CHECK_FALSE(s.cited_given_exposure_pct().has_value());
  CHECK_FALSE(s.mentioned_given_exposure_pct().has_value());
  CHECK_FALSE(s.poisoned_ratio_pct().has_value());

  Table t = attack_summary_table({{"Cond", s}}, "Summary");
  REQUIRE(t.rows.size() == 6);
  CHECK(t.rows[0][1] == "--");  // poisoned ratio
  CHECK(t.rows[1][1] == "0.0");
  CHECK(t.rows[4][1] == "--");  // cited | exposure
  CHECK(t.rows[5][1] == "--");  // mentioned | exposure
}

TEST_CASE("citation requires the report to cite an injected url of the run") {
  // The report cites a url, but not the injected one.
  RunRecord rec = make_run("q_c1", true, false, false);
  AttackSummary s = summarize({rec});
  CHECK(s.exposed == 1);
  CHECK(s.cited == 0);

  // Citing the injected url flips it.
  RunRecord rec2 = make_run("q_c1", true, true, false);
  AttackSummary s2 = summarize({rec2});
  CHECK(s2.cited == 1);
}

TEST_CASE("poisoned ratio takes the lower median of exact fractions") {
  // Three exposed runs with payload shares 10%, 25%, 50%.
  std::vector<RunRecord> records{
      make_run("q_c1", true, false, false, 1, 9),   // 1/10
      make_run("q_c1", true, false, false, 1, 3),   // 1/4
      make_run("q_c1", true, false, false, 1, 1),   // 1/2
  };
  AttackSummary s = summarize(records);
  REQUIRE(s.poisoned_ratio_pct().has_value());
  CHECK(*s.poisoned_ratio_pct() == doctest::Approx(25.0));

  // With an even count the lower of the middle pair wins.
  records.push_back(make_run("q_c1", true, false, false, 3, 2));  // 3/5
  AttackSummary s2 = summarize(records);
  CHECK(*s2.poisoned_ratio_pct() == doctest::Approx(25.0));

  // Order of the records is irrelevant.
  std::reverse(records.begin(), records.end());
  AttackSummary s3 = summarize(records);
  CHECK(*s3.poisoned_ratio_pct() == doctest::Approx(25.0));
}

TEST_CASE("summaries are invariant under record reordering") {
  std::vector<RunRecord> records;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    const bool exposed = rng() % 2 == 0;
    const bool cited = exposed && rng() % 3 == 0;
    const bool mentioned = cited && rng() % 2 == 0;
    records.push_back(make_run("q_c1", exposed, cited, mentioned,
                               1 + static_cast<long long>(rng() % 20),
                               1 + static_cast<long long>(rng() % 200)));
  }
  AttackSummary before = summarize(records);
  std::shuffle(records.begin(), records.end(), rng);
  AttackSummary after = summarize(records);
  CHECK(before.runs == after.runs);
  CHECK(before.exposed == after.exposed);
  CHECK(before.cited == after.cited);
  CHECK(before.mentioned == after.mentioned);
  CHECK(before.mentioned_exposed == after.mentioned_exposed);
  CHECK(before.poisoned_ratio_pct() == after.poisoned_ratio_pct());
}

TEST_CASE("overall mention rate factors through the conditional identity") {
  // 137 runs, 83 exposed, 42 mentioned (every mention on an exposed run):
  // mentioned/runs must equal (mentioned|exposure) x (exposure) exactly as
  // rationals, and the three formatted rates freeze to known strings.
  std::vector<RunRecord> records;
  for (int i = 0; i < 137; ++i) {
    const bool exposed = i < 83;
    const bool mentioned = i < 42;
    records.push_back(make_run("q_c1", exposed, exposed, mentioned && exposed));
  }
  AttackSummary s = summarize(records);
  CHECK(s.runs == 137);
  CHECK(s.exposed == 83);
  CHECK(s.mentioned == 42);
  CHECK(s.mentioned_exposed == 42);

  // Exact rational identity: mentioned * exposed == mentioned_exposed * exposed
  // and mentioned/runs == (mentioned_exposed/exposed) * (exposed/runs).
  CHECK(s.mentioned == s.mentioned_exposed);
  CHECK(static_cast<long long>(s.mentioned) * s.exposed * s.runs ==
        static_cast<long long>(s.mentioned_exposed) * s.exposed * s.runs);

  CHECK(fmt1(s.exposure_pct()) == "60.6");
  CHECK(fmt1(s.mentioned_pct()) == "30.7");
  REQUIRE(s.mentioned_given_exposure_pct().has_value());
  CHECK(fmt1(*s.mentioned_given_exposure_pct()) == "50.6");

  Table t = attack_summary_table({{"Fixture", s}}, "Attack summary");
  CHECK(t.rows[1][1] == "60.6");
  CHECK(t.rows[3][1] == "30.7");
  CHECK(t.rows[5][1] == "50.6");
}

TEST_CASE("per-cluster summaries group by the corpus clusters") {
  Corpus c = testutil::make_small_corpus();
  std::vector<RunRecord> records{
      make_run("q_c1", true, true, true),
      make_run("q_c2", true, false, false),
      make_run("q_b1", false, false, false),
  };
  auto per = per_cluster_summaries(records, c);
  REQUIRE(per.size() == 2);
  CHECK(per.at("cancel_acme").runs == 2);
  CHECK(per.at("cancel_acme").exposed == 2);
  CHECK(per.at("brunch").runs == 1);
  CHECK(per.at("brunch").exposed == 0);

  std::vector<RunRecord> bad{make_run("ghost", false, false, false)};
  CHECK_THROWS_AS(per_cluster_summaries(bad, c), IntegrityError);
}

TEST_CASE("per-cluster table renders conditional pairs with absent cells") {
  Corpus c = testutil::make_small_corpus();
  std::vector<RunRecord> records{
      make_run("q_c1", true, true, true),
      make_run("q_b1", false, false, false),  // exposure 0: conditionals absent
  };
  auto per = per_cluster_summaries(records, c);
  Table t = per_cluster_table(c.clusters, {{"SysA", per}}, "Per cluster");
  REQUIRE(t.header.size() == 3);
  CHECK(t.header[1] == "SysA C|E");
  CHECK(t.header[2] == "SysA M|E");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][0] == "cancel_acme");
  CHECK(t.rows[0][1] == "100.0");
  CHECK(t.rows[0][2] == "100.0");
  CHECK(t.rows[1][0] == "brunch");
  CHECK(t.rows[1][1] == "--");
  CHECK(t.rows[1][2] == "--");
}

TEST_CASE("ratio terms come from the run's retrieval word totals") {
  RunRecord rec = make_run("q_c1", true, false, false, 13, 87);
  AttackSummary s = summarize({rec});
  REQUIRE(s.ratio_terms.size() == 1);
  CHECK(s.ratio_terms[0].first == 13);
  CHECK(s.ratio_terms[0].second == 100);
  CHECK(*s.poisoned_ratio_pct() == doctest::Approx(13.0));
}
