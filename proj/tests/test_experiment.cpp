#include "doctest.h"

#include "poisim/experiment.hpp"

#include "test_support.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

using namespace poisim;
namespace fs = std::filesystem;

namespace {

// Materialize the shared in-memory corpus fixture for runs that need a path.
std::string write_corpus_file(const std::string& name) {
  std::ofstream out(name, std::ios::binary);
  out << testutil::small_corpus_json();
  return name;
}

ExperimentConfig mini_config(const std::string& corpus_path, const std::string& out_dir) {
  ExperimentConfig cfg;
  cfg.corpus_path = corpus_path;
  cfg.out_dir = out_dir;
  cfg.systems = {PipelineSystem::costorm};
  cfg.strategies = {Strategy::one_url};
  cfg.surfaces = {Surface::serp_snippet};
  cfg.seeds = {1, 2};
  cfg.default_entity = "EntityOne";
  cfg.payload_lengths = {13};
  cfg.workers = 1;
  return cfg;
}

std::string read_bytes(const fs::path& p) { return poisim::detail::read_file_bytes(p); }

// Every manifest entry must name an existing file whose bytes hash back to
// the recorded digest.
void check_manifest(const fs::path& manifest_path) {
  const nlohmann::json manifest = nlohmann::json::parse(read_bytes(manifest_path));
  REQUIRE(manifest.contains("files"));
  REQUIRE(manifest.at("files").is_array());
  CHECK(!manifest.at("files").empty());
  const fs::path root = manifest_path.parent_path();
  std::string previous;
  for (const auto& entry : manifest.at("files")) {
    const std::string rel = entry.at("path").get<std::string>();
    CHECK(previous < rel);  // sorted, so reruns list files in one order
    previous = rel;
    const std::string bytes = read_bytes(root / rel);
    CHECK(bytes.size() == entry.at("bytes").get<std::size_t>());
    CHECK(poisim::detail::hash_hex(fnv1a64(bytes)) == entry.at("fnv1a64").get<std::string>());
  }
}

struct TempTree {
  explicit TempTree(std::string p) : path(std::move(p)) { fs::remove_all(path); }
  ~TempTree() { fs::remove_all(path); }
  std::string path;
};

struct TempFile {
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::remove(path.c_str()); }
  std::string path;
};

}  // namespace

TEST_CASE("experiment config validation") {
  ExperimentConfig cfg;
  CHECK_THROWS_AS(validate(cfg), ValidationError);  // corpus path missing
  cfg.corpus_path = "corpus.json";
  validate(cfg);

  auto rejects = [&](auto mutate) {
    ExperimentConfig bad = cfg;
    mutate(bad);
    CHECK_THROWS_AS(validate(bad), ValidationError);
  };
  rejects([](ExperimentConfig& c) { c.out_dir.clear(); });
  rejects([](ExperimentConfig& c) { c.systems.clear(); });
  rejects([](ExperimentConfig& c) { c.strategies.clear(); });
  rejects([](ExperimentConfig& c) { c.surfaces.clear(); });
  rejects([](ExperimentConfig& c) { c.seeds.clear(); });
  rejects([](ExperimentConfig& c) { c.payload_lengths.clear(); });
  rejects([](ExperimentConfig& c) { c.payload_lengths = {2}; });
  rejects([](ExperimentConfig& c) { c.workers = -1; });

  // Nested pipeline defects surface through the same gate.
  ExperimentConfig bad = cfg;
  bad.pipeline.turns = 0;
  CHECK_THROWS_AS(validate(bad), PreconditionError);
}

TEST_CASE("experiment config json round trips and rejects unknown keys") {
  ExperimentConfig cfg;
  cfg.corpus_path = "corpus.json";
  cfg.cluster_entities = {{"cancel_acme", "EntityOne"}};
  const nlohmann::json j = to_json(cfg);

  ExperimentConfig parsed;
  apply_config_json(parsed, j, "test");
  CHECK(to_json(parsed).dump() == j.dump());

  ExperimentConfig fresh;
  CHECK_THROWS_AS(apply_config_json(fresh, nlohmann::json::array(), "test"), ParseError);
  try {
    apply_config_json(fresh, nlohmann::json{{"corpsu", "typo.json"}}, "test");
    FAIL("expected rejection of the unknown key");
  } catch (const ParseError& e) {
    CHECK(contains(e.what(), "corpsu"));
  }

  // Partial objects override only the keys they carry.
  ExperimentConfig partial;
  apply_config_json(partial, nlohmann::json{{"seeds", {7, 9}}}, "test");
  CHECK(partial.seeds == std::vector<std::uint64_t>{7, 9});
  CHECK(partial.systems.size() == 3);  // untouched default

  apply_config_json(partial, nlohmann::json{{"payload", {{"lengths", {5, 8}}}}}, "test");
  CHECK(partial.payload_lengths == std::vector<int>{5, 8});
  CHECK(partial.default_entity == "Casa Lumina");

  apply_config_json(partial, nlohmann::json{{"pipeline", {{"persuasion_prob", 0.5}}}}, "test");
  CHECK(partial.pipeline.persuasion_prob == 0.5);
  CHECK(partial.pipeline.turns == 3);

  apply_config_json(partial, nlohmann::json{{"defenses", {{"blocking", true}}}}, "test");
  CHECK(partial.defenses.blocking);
  CHECK_FALSE(partial.defenses.detection);

  apply_config_json(partial, nlohmann::json{{"systems", {"storm"}}}, "test");
  REQUIRE(partial.systems.size() == 1);
  CHECK(partial.systems[0] == PipelineSystem::storm);
  CHECK_THROWS_AS(apply_config_json(partial, nlohmann::json{{"systems", {"bingbot"}}}, "test"),
                  ParseError);
}

TEST_CASE("experiment config file loading") {
  ExperimentConfig cfg;
  CHECK_THROWS_AS(load_config_file(cfg, "no_such_config.json"), ParseError);

  TempFile file("exp_test_config.json");
  {
    std::ofstream out(file.path, std::ios::binary);
    out << R"({"workers": 2, "seeds": [5]})";
  }
  load_config_file(cfg, file.path);
  CHECK(cfg.workers == 2);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{5});

  {
    std::ofstream out(file.path, std::ios::binary);
    out << "not json";
  }
  try {
    load_config_file(cfg, file.path);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(contains(e.what(), file.path));
  }
}

TEST_CASE("a small campaign runs end to end") {
  TempFile corpus(write_corpus_file("exp_test_corpus_a.json"));
  TempTree out("exp_test_out_a");
  const ExperimentConfig cfg = mini_config(corpus.path, out.path);
  const ExperimentOutcome outcome = run_experiment(cfg);

  // One system, one surface, five queries, two seeds.
  CHECK(outcome.clean_runs == 10);
  // The cancellation cluster has a target; the brunch cluster has no
  // platform-hosted result, which forfeits 2 queries x 2 seeds x 1 length.
  CHECK(outcome.attacked_runs == 6);
  CHECK(outcome.skipped_no_target == 4);
  REQUIRE(outcome.skip_reasons.size() == 1);
  CHECK(contains(outcome.skip_reasons[0], "brunch"));
  CHECK(outcome.failed_runs == 0);
  CHECK(outcome.errors.empty());
  CHECK(outcome.blocked_runs == 0);

  const fs::path root(out.path);
  CHECK(outcome.manifest_path == root / "manifest.json");
  for (const char* rel :
       {"logs/clean_runs.jsonl", "logs/clean_retrieval.jsonl", "logs/attacked_runs.jsonl",
        "tables/recon_prevalence.csv", "tables/recon_prevalence.md",
        "tables/recon_composition.csv", "tables/recon_overlap.csv",
        "tables/recon_recurring_clusters.csv", "tables/attack_summary_serp_snippet.csv",
        "tables/attack_clusters_serp_snippet_one_url.csv", "experiment_config.json"}) {
    CHECK(fs::exists(root / rel));
  }
  // Cross-system overlap needs a second system; a single payload length gets
  // no file-name suffix.
  CHECK_FALSE(fs::exists(root / "tables" / "recon_jaccard.csv"));
  CHECK_FALSE(fs::exists(root / "tables" / "attack_summary_serp_snippet_w13.csv"));
  CHECK_FALSE(fs::exists(root / "logs" / "blocked_runs.jsonl"));
  check_manifest(outcome.manifest_path);

  const auto clean = load_clean_runs((root / "logs" / "clean_runs.jsonl").string());
  REQUIRE(clean.size() == 10);
  for (const auto& run : clean) {
    CHECK(run.record.system == "costorm");
    CHECK(run.surface == Surface::serp_snippet);
    CHECK(run.record.injections.empty());
  }

  const auto attacked = load_attacked_runs((root / "logs" / "attacked_runs.jsonl").string());
  REQUIRE(attacked.size() == 6);
  for (const auto& run : attacked) {
    CHECK(run.strategy == Strategy::one_url);
    CHECK(run.target_words == 13);
    // The anchor thread ranks in the top ten for every cancellation query,
    // so each attacked run is exposed, and the default pipeline always
    // carries an exposed 13-word payload into the report.
    CHECK(run.record.injections.size() >= 1);
    CHECK(run.record.report.mentioned_entities.count("EntityOne") == 1);
  }
}

TEST_CASE("reruns with one config are byte-identical") {
  TempFile corpus(write_corpus_file("exp_test_corpus_b.json"));
  TempTree out("exp_test_out_b");
  const ExperimentConfig cfg = mini_config(corpus.path, out.path);

  run_experiment(cfg);
  const fs::path root(out.path);
  const std::string manifest_first = read_bytes(root / "manifest.json");
  const std::string clean_first = read_bytes(root / "logs" / "clean_runs.jsonl");

  fs::remove_all(root);
  run_experiment(cfg);
  CHECK(read_bytes(root / "manifest.json") == manifest_first);
  CHECK(read_bytes(root / "logs" / "clean_runs.jsonl") == clean_first);
}

TEST_CASE("worker count does not change the logged runs") {
  TempFile corpus(write_corpus_file("exp_test_corpus_c.json"));
  TempTree out_serial("exp_test_out_c1");
  TempTree out_parallel("exp_test_out_c2");

  ExperimentConfig serial = mini_config(corpus.path, out_serial.path);
  ExperimentConfig parallel = mini_config(corpus.path, out_parallel.path);
  parallel.workers = 3;
  run_experiment(serial);
  run_experiment(parallel);

  for (const char* rel : {"logs/clean_runs.jsonl", "logs/attacked_runs.jsonl",
                          "tables/attack_summary_serp_snippet.csv"}) {
    CHECK(read_bytes(fs::path(out_serial.path) / rel) ==
          read_bytes(fs::path(out_parallel.path) / rel));
  }
}

TEST_CASE("recon-only pass emits analytics without attack artifacts") {
  TempFile corpus(write_corpus_file("exp_test_corpus_d.json"));
  TempTree out("exp_test_out_d");
  ExperimentConfig cfg = mini_config(corpus.path, out.path);
  cfg.strategies.clear();  // tolerated: the recon pass never selects targets
  const ExperimentOutcome outcome = run_recon(cfg);

  CHECK(outcome.clean_runs == 10);
  CHECK(outcome.attacked_runs == 0);
  CHECK(outcome.skipped_no_target == 0);

  const fs::path root(out.path);
  CHECK(fs::exists(root / "logs" / "clean_retrieval.jsonl"));
  CHECK(fs::exists(root / "tables" / "recon_prevalence.csv"));
  CHECK_FALSE(fs::exists(root / "logs" / "attacked_runs.jsonl"));
  CHECK_FALSE(fs::exists(root / "tables" / "attack_summary_serp_snippet.csv"));
  check_manifest(outcome.manifest_path);

  // The emitted retrieval log parses back into per-system entries.
  const auto logs = load_retrieval_logs((root / "logs" / "clean_retrieval.jsonl").string());
  REQUIRE(logs.size() == 1);
  CHECK(logs[0].system_name == "costorm");
  CHECK(!logs[0].entries.empty());
}

TEST_CASE("defense toggles add their artifacts") {
  TempFile corpus(write_corpus_file("exp_test_corpus_e.json"));
  TempTree out("exp_test_out_e");
  ExperimentConfig cfg = mini_config(corpus.path, out.path);
  cfg.strategies = {Strategy::one_url, Strategy::three_url, Strategy::domain_prefix};
  cfg.seeds = {1};
  cfg.defenses.blocking = true;
  cfg.defenses.detection = true;
  cfg.defenses.plausibility = true;
  const ExperimentOutcome outcome = run_experiment(cfg);

  CHECK(outcome.clean_runs == 5);
  CHECK(outcome.blocked_runs == 5);
  // Three strategies over the cancellation cluster, one seed each.
  CHECK(outcome.attacked_runs == 9);

  const fs::path root(out.path);
  for (const char* rel :
       {"logs/blocked_runs.jsonl", "logs/detection_samples.jsonl",
        "tables/defense_blocking_serp_snippet.csv", "tables/defense_detection.csv",
        "tables/defense_screening_cost.csv", "tables/defense_plausibility.csv"}) {
    CHECK(fs::exists(root / rel));
  }
  check_manifest(outcome.manifest_path);

  // Blocked runs never touch platform-hosted sources.
  const auto blocked = load_clean_runs((root / "logs" / "blocked_runs.jsonl").string());
  REQUIRE(blocked.size() == 5);
  for (const auto& run : blocked) {
    for (const auto& ev : run.record.retrievals) {
      CHECK_FALSE(is_ugc(classify_url(ev.url)));
    }
  }

  // The scored sample pool carries both classes.
  const auto samples =
      load_detection_samples((root / "logs" / "detection_samples.jsonl").string());
  std::set<std::string> labels;
  for (const auto& s : samples) labels.insert(s.label);
  CHECK(labels == std::set<std::string>{"injected", "organic"});
}

TEST_CASE("write_tables_with_manifest hashes what it writes") {
  TempTree out("exp_test_tables");
  Table alpha;
  alpha.title = "Alpha";
  alpha.header = {"k", "v"};
  alpha.rows = {{"one", "1"}, {"two", "2"}};
  Table beta;
  beta.title = "Beta";
  beta.header = {"x"};
  beta.rows = {{"y"}};

  const fs::path manifest =
      write_tables_with_manifest(out.path, {{"alpha", alpha}, {"beta", beta}});
  CHECK(manifest == fs::path(out.path) / "manifest.json");
  const nlohmann::json j = nlohmann::json::parse(read_bytes(manifest));
  REQUIRE(j.at("files").size() == 4);  // csv + md per table
  check_manifest(manifest);

  const std::string first = read_bytes(manifest);
  write_tables_with_manifest(out.path, {{"alpha", alpha}, {"beta", beta}});
  CHECK(read_bytes(manifest) == first);
}
