#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "poisim/clients.hpp"
#include "poisim/corpus.hpp"
#include "poisim/defenses.hpp"
#include "poisim/embedder.hpp"
#include "poisim/error.hpp"
#include "poisim/metrics.hpp"
#include "poisim/pipeline.hpp"
#include "poisim/poison.hpp"
#include "poisim/recon.hpp"
#include "poisim/retriever.hpp"
#include "poisim/tables.hpp"

// Campaign runner: executes the clean and attacked run matrices over the
// offline corpus, derives targets from the clean pass, and writes logs,
// analysis tables, and a hashed output manifest. Everything is driven by the
// config seed list; reruns with an identical config are byte-identical.

namespace poisim {

struct DefenseToggles {
  bool blocking = false;
  bool detection = false;
  bool plausibility = false;
};

struct ExperimentConfig {
  std::string corpus_path;
  std::string out_dir = "out";
  std::string platforms_path;  // optional platform rule override file
  std::string prompts_dir;     // required only when a live generator is attached

  std::vector<PipelineSystem> systems = {PipelineSystem::costorm, PipelineSystem::storm,
                                         PipelineSystem::omnithink};
  std::vector<Strategy> strategies = {Strategy::one_url, Strategy::three_url,
                                      Strategy::domain_prefix};
  std::vector<Surface> surfaces = {Surface::serp_snippet};
  std::vector<std::uint64_t> seeds = {1, 2, 3};

  // Payload spec: one fictional entity per cluster (fallback to the default),
  // compressed to each target length.
  std::string default_entity = "Casa Lumina";
  std::map<std::string, std::string> cluster_entities;  // cluster id -> entity
  std::vector<int> payload_lengths = {13};

  PipelineConfig pipeline;  // `system` field is overridden per run

  DefenseToggles defenses;
  // Baseline LLM calls per query, used by the screening cost model.
  std::map<std::string, double> screening_baseline_calls = {
      {"costorm", 32.0}, {"storm", 46.8}, {"omnithink", 18.1}};

  int workers = 0;  // 0 -> logical CPU count
};

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.corpus_path.empty()) throw ValidationError("experiment: corpus path is required");
  if (cfg.out_dir.empty()) throw ValidationError("experiment: output directory is required");
  if (cfg.systems.empty()) throw ValidationError("experiment: need at least one system");
  if (cfg.strategies.empty()) throw ValidationError("experiment: need at least one strategy");
  if (cfg.surfaces.empty()) throw ValidationError("experiment: need at least one surface");
  if (cfg.seeds.empty()) throw ValidationError("experiment: need at least one seed");
  if (cfg.payload_lengths.empty()) {
    throw ValidationError("experiment: need at least one payload length");
  }
  for (int w : cfg.payload_lengths) {
    if (w < 3) throw ValidationError("experiment: payload lengths must be >= 3 words");
  }
  if (cfg.workers < 0) throw ValidationError("experiment: workers must be >= 0");
  validate(cfg.pipeline);
}

// ----- config serialization -------------------------------------------------

inline nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json systems = nlohmann::json::array();
  for (PipelineSystem s : cfg.systems) systems.push_back(system_id(s));
  nlohmann::json strategies = nlohmann::json::array();
  for (Strategy s : cfg.strategies) strategies.push_back(strategy_name(s));
  nlohmann::json surfaces = nlohmann::json::array();
  for (Surface s : cfg.surfaces) surfaces.push_back(surface_name(s));
  return nlohmann::json{
      {"corpus", cfg.corpus_path},
      {"out", cfg.out_dir},
      {"platforms", cfg.platforms_path},
      {"prompts_dir", cfg.prompts_dir},
      {"systems", systems},
      {"strategies", strategies},
      {"surfaces", surfaces},
      {"seeds", cfg.seeds},
      {"payload",
       {{"entity", cfg.default_entity},
        {"entities", cfg.cluster_entities},
        {"lengths", cfg.payload_lengths}}},
      {"pipeline",
       {{"results_per_search", cfg.pipeline.results_per_search},
        {"turn_word_budget", cfg.pipeline.turn_word_budget},
        {"corpus_word_budget", cfg.pipeline.corpus_word_budget},
        {"report_word_budget", cfg.pipeline.report_word_budget},
        {"chunk_chars", cfg.pipeline.chunk_chars},
        {"chunks_per_section", cfg.pipeline.chunks_per_section},
        {"perspectives", cfg.pipeline.perspectives},
        {"turns", cfg.pipeline.turns},
        {"mindmap_depth", cfg.pipeline.mindmap_depth},
        {"min_mention_words", cfg.pipeline.min_mention_words},
        {"persuasion_prob", cfg.pipeline.persuasion_prob}}},
      {"defenses",
       {{"blocking", cfg.defenses.blocking},
        {"detection", cfg.defenses.detection},
        {"plausibility", cfg.defenses.plausibility}}},
      {"screening_baseline_calls", cfg.screening_baseline_calls},
      {"workers", cfg.workers}};
}

/// Apply the keys present in a config JSON object on top of `cfg`. Unknown
/// keys are rejected so typos cannot silently fall back to defaults.
inline void apply_config_json(ExperimentConfig& cfg, const nlohmann::json& j,
                              const std::string& source) {
  if (!j.is_object()) throw ParseError(source + ": config must be a JSON object");
  static const std::set<std::string> known = {
      "corpus",   "out",      "platforms", "prompts_dir",
      "systems",  "strategies", "surfaces", "seeds",
      "payload",  "pipeline", "defenses",  "screening_baseline_calls",
      "workers"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ParseError(source + ": unknown config key '" + key + "'");
  }
  if (j.contains("corpus")) cfg.corpus_path = j.at("corpus").get<std::string>();
  if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
  if (j.contains("platforms")) cfg.platforms_path = j.at("platforms").get<std::string>();
  if (j.contains("prompts_dir")) cfg.prompts_dir = j.at("prompts_dir").get<std::string>();
  if (j.contains("systems")) {
    cfg.systems.clear();
    for (const auto& s : j.at("systems")) cfg.systems.push_back(parse_system(s.get<std::string>()));
  }
  if (j.contains("strategies")) {
    cfg.strategies.clear();
    for (const auto& s : j.at("strategies")) {
      cfg.strategies.push_back(parse_strategy(s.get<std::string>()));
    }
  }
  if (j.contains("surfaces")) {
    cfg.surfaces.clear();
    for (const auto& s : j.at("surfaces")) {
      cfg.surfaces.push_back(parse_surface(s.get<std::string>()));
    }
  }
  if (j.contains("seeds")) {
    cfg.seeds.clear();
    for (const auto& s : j.at("seeds")) cfg.seeds.push_back(s.get<std::uint64_t>());
  }
  if (j.contains("payload")) {
    const auto& p = j.at("payload");
    if (p.contains("entity")) cfg.default_entity = p.at("entity").get<std::string>();
    if (p.contains("entities")) {
      cfg.cluster_entities.clear();
      for (const auto& [cid, name] : p.at("entities").items()) {
        cfg.cluster_entities[cid] = name.get<std::string>();
      }
    }
    if (p.contains("lengths")) {
      cfg.payload_lengths.clear();
      for (const auto& w : p.at("lengths")) cfg.payload_lengths.push_back(w.get<int>());
    }
  }
  if (j.contains("pipeline")) {
    const auto& p = j.at("pipeline");
    auto geti = [&](const char* key, int& slot) {
      if (p.contains(key)) slot = p.at(key).get<int>();
    };
    geti("results_per_search", cfg.pipeline.results_per_search);
    geti("turn_word_budget", cfg.pipeline.turn_word_budget);
    geti("corpus_word_budget", cfg.pipeline.corpus_word_budget);
    geti("report_word_budget", cfg.pipeline.report_word_budget);
    geti("chunk_chars", cfg.pipeline.chunk_chars);
    geti("chunks_per_section", cfg.pipeline.chunks_per_section);
    geti("perspectives", cfg.pipeline.perspectives);
    geti("turns", cfg.pipeline.turns);
    geti("mindmap_depth", cfg.pipeline.mindmap_depth);
    geti("min_mention_words", cfg.pipeline.min_mention_words);
    if (p.contains("persuasion_prob")) {
      cfg.pipeline.persuasion_prob = p.at("persuasion_prob").get<double>();
    }
  }
  if (j.contains("defenses")) {
    const auto& d = j.at("defenses");
    if (d.contains("blocking")) cfg.defenses.blocking = d.at("blocking").get<bool>();
    if (d.contains("detection")) cfg.defenses.detection = d.at("detection").get<bool>();
    if (d.contains("plausibility")) cfg.defenses.plausibility = d.at("plausibility").get<bool>();
  }
  if (j.contains("screening_baseline_calls")) {
    cfg.screening_baseline_calls.clear();
    for (const auto& [sys, calls] : j.at("screening_baseline_calls").items()) {
      cfg.screening_baseline_calls[sys] = calls.get<double>();
    }
  }
  if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
}

inline void load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  apply_config_json(cfg, j, path);
}

// ----- outcome --------------------------------------------------------------

struct ExperimentOutcome {
  int clean_runs = 0;
  int attacked_runs = 0;
  int blocked_runs = 0;
  int failed_runs = 0;
  long long skipped_no_target = 0;  // runs never attempted for lack of a target
  std::vector<std::string> skip_reasons;  // one per (system, cluster, strategy)
  std::vector<std::string> errors;
  std::filesystem::path manifest_path;
};

// ----- run log rows ---------------------------------------------------------

struct LoggedCleanRun {
  Surface surface = Surface::serp_snippet;
  RunRecord record;
};

struct LoggedAttackedRun {
  Strategy strategy = Strategy::one_url;
  Surface surface = Surface::serp_snippet;
  int target_words = 0;
  RunRecord record;
};

namespace detail {

inline nlohmann::json parse_jsonl_line(const std::string& line, const std::string& path,
                                       std::size_t lineno) {
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
  }
}

}  // namespace detail

inline std::vector<LoggedCleanRun> load_clean_runs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open run log: " + path);
  std::vector<LoggedCleanRun> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (normalize_ws(line).empty()) continue;
    const nlohmann::json j = detail::parse_jsonl_line(line, path, lineno);
    if (!j.is_object() || !j.contains("surface") || !j.contains("record")) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected {surface, record}");
    }
    out.push_back({parse_surface(j.at("surface").get<std::string>()),
                   run_record_from_json(j.at("record"))});
  }
  return out;
}

inline std::vector<LoggedAttackedRun> load_attacked_runs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open run log: " + path);
  std::vector<LoggedAttackedRun> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (normalize_ws(line).empty()) continue;
    const nlohmann::json j = detail::parse_jsonl_line(line, path, lineno);
    if (!j.is_object() || !j.contains("strategy") || !j.contains("surface") ||
        !j.contains("target_words") || !j.contains("record")) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected {strategy, surface, target_words, record}");
    }
    out.push_back({parse_strategy(j.at("strategy").get<std::string>()),
                   parse_surface(j.at("surface").get<std::string>()),
                   j.at("target_words").get<int>(), run_record_from_json(j.at("record"))});
  }
  return out;
}

/// Attacked-vs-clean report similarity per system, scaled against clean
/// same-cluster report pairs. Attacked runs pair with the clean run sharing
/// their (surface, query, seed); baselines pair consecutive same-cluster
/// queries. Runs with empty report text are left out.
inline Table plausibility_table(const Corpus& corpus, const std::vector<LoggedCleanRun>& clean,
                                const std::vector<LoggedAttackedRun>& attacked,
                                const std::vector<PipelineSystem>& systems) {
  Table t;
  t.title = "Report plausibility under attack";
  t.header = {"Metric"};
  struct Cell {
    double attack_embed = 0.0, attack_f1 = 0.0;
    double base_embed = 0.0, base_f1 = 0.0;
    int attack_pairs = 0, base_pairs = 0;
  };
  std::vector<Cell> cells;
  for (PipelineSystem system : systems) {
    t.header.push_back(system_display_name(system));
    Cell cell;
    std::map<std::tuple<Surface, std::string, std::uint64_t>, const RunRecord*> clean_by_key;
    for (const LoggedCleanRun& run : clean) {
      if (run.record.system != system_id(system)) continue;
      clean_by_key[{run.surface, run.record.query_id, run.record.seed}] = &run.record;
    }
    for (const LoggedAttackedRun& run : attacked) {
      if (run.record.system != system_id(system)) continue;
      auto it = clean_by_key.find({run.surface, run.record.query_id, run.record.seed});
      if (it == clean_by_key.end()) continue;
      const std::string& attacked_text = run.record.report.text;
      const std::string& clean_text = it->second->report.text;
      if (normalize_ws(attacked_text).empty() || normalize_ws(clean_text).empty()) continue;
      cell.attack_embed += cosine(embed(attacked_text), embed(clean_text));
      cell.attack_f1 += token_multiset_f1(attacked_text, clean_text);
      ++cell.attack_pairs;
    }
    std::map<std::tuple<Surface, std::uint64_t, std::string>, std::vector<const RunRecord*>>
        by_cluster;
    for (const LoggedCleanRun& run : clean) {
      if (run.record.system != system_id(system)) continue;
      const TopicCluster* cluster = corpus.cluster_of(run.record.query_id);
      if (cluster == nullptr) continue;
      by_cluster[{run.surface, run.record.seed, cluster->id}].push_back(&run.record);
    }
    for (auto& [key, records] : by_cluster) {
      std::sort(records.begin(), records.end(),
                [](const RunRecord* a, const RunRecord* b) { return a->query_id < b->query_id; });
      for (std::size_t i = 0; i + 1 < records.size(); i += 2) {
        const std::string& a = records[i]->report.text;
        const std::string& b = records[i + 1]->report.text;
        if (normalize_ws(a).empty() || normalize_ws(b).empty()) continue;
        cell.base_embed += cosine(embed(a), embed(b));
        cell.base_f1 += token_multiset_f1(a, b);
        ++cell.base_pairs;
      }
    }
    if (cell.attack_pairs > 0) {
      cell.attack_embed /= cell.attack_pairs;
      cell.attack_f1 /= cell.attack_pairs;
    }
    if (cell.base_pairs > 0) {
      cell.base_embed /= cell.base_pairs;
      cell.base_f1 /= cell.base_pairs;
    }
    cells.push_back(cell);
  }
  auto row = [&](const std::string& name, auto getter, auto counter) {
    std::vector<std::string> r{name};
    for (const Cell& c : cells) {
      r.push_back(counter(c) > 0 ? fmt3(getter(c)) : std::string(kAbsentCell));
    }
    t.rows.push_back(std::move(r));
  };
  auto attack_n = [](const Cell& c) { return c.attack_pairs; };
  auto base_n = [](const Cell& c) { return c.base_pairs; };
  row("Embed sim, attacked vs clean", [](const Cell& c) { return c.attack_embed; }, attack_n);
  row("Embed sim, clean baseline", [](const Cell& c) { return c.base_embed; }, base_n);
  row("Token F1, attacked vs clean", [](const Cell& c) { return c.attack_f1; }, attack_n);
  row("Token F1, clean baseline", [](const Cell& c) { return c.base_f1; }, base_n);
  {
    std::vector<std::string> r{"Pairs (attack / baseline)"};
    for (const Cell& c : cells) {
      r.push_back(std::to_string(c.attack_pairs) + " / " + std::to_string(c.base_pairs));
    }
    t.rows.push_back(std::move(r));
  }
  return t;
}

/// Scored-sample summary per detector: class means, AUROC, and an annotation
/// of which direction separates the classes (the direction depends on how the
/// injected texts were produced, so it is reported, not asserted).
inline Table detection_table(const std::vector<DetectionSample>& samples,
                             const std::vector<std::string>& detectors) {
  Table t;
  t.title = "Input-filtering detectors";
  t.header = {"Detector", "Mean organic", "Mean injected", "AUROC", "Separation"};
  for (const std::string& name : detectors) {
    double organic_sum = 0.0, injected_sum = 0.0;
    int organic_n = 0, injected_n = 0;
    for (const DetectionSample& s : samples) {
      const double v = s.scores.at(name);
      if (s.label == "injected") {
        injected_sum += v;
        ++injected_n;
      } else {
        organic_sum += v;
        ++organic_n;
      }
    }
    if (organic_n == 0 || injected_n == 0) {
      throw PreconditionError("detection_table: need both organic and injected samples");
    }
    const double mean_org = organic_sum / organic_n;
    const double mean_inj = injected_sum / injected_n;
    std::string direction = "no separation";
    if (mean_inj < mean_org) direction = "injected scores lower";
    if (mean_inj > mean_org) direction = "injected scores higher";
    t.rows.push_back({name, fmt3(mean_org), fmt3(mean_inj),
                      fmt3(auroc(samples, name, "injected")), direction});
  }
  return t;
}

// ----- internals ------------------------------------------------------------

namespace detail {

/// Run `fn(i)` for i in [0, count) on a bounded worker pool. Workers pull
/// indices from a shared counter; `fn` must confine writes to per-index slots
/// and swallow its own exceptions.
template <typename Fn>
inline void parallel_for(std::size_t count, int workers, Fn&& fn) {
  if (count == 0) return;
  unsigned n = workers > 0 ? static_cast<unsigned>(workers) : std::thread::hardware_concurrency();
  if (n < 1) n = 1;
  n = static_cast<unsigned>(std::min<std::size_t>(n, count));
  if (n == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (std::thread& t : pool) t.join();
}

inline const char* strategy_display(Strategy s) {
  switch (s) {
    case Strategy::one_url: return "1-URL";
    case Strategy::three_url: return "3-URL";
    case Strategy::domain_prefix: return "Domain";
  }
  return "1-URL";
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path.string());
  out << content;
  if (!out) throw Error("write failed: " + path.string());
}

inline std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

}  // namespace detail

// ----- runner ---------------------------------------------------------------

class ExperimentRunner {
public:
  explicit ExperimentRunner(ExperimentConfig cfg, TextGenerator* generator = nullptr)
      : cfg_(std::move(cfg)), generator_(generator) {}

  /// Full campaign: clean matrix, reconnaissance, attacked matrix, defenses.
  ExperimentOutcome run() {
    validate(cfg_);
    attacks_attempted_ = true;
    prepare();
    run_clean_matrix();
    build_recon();
    select_all_targets();
    build_payloads();
    run_attacked_matrix();
    if (cfg_.defenses.blocking) run_blocked_matrix();
    emit_logs();
    emit_recon_tables();
    emit_attack_tables();
    if (cfg_.defenses.blocking) emit_blocking_table();
    if (cfg_.defenses.detection) emit_detection();
    if (cfg_.defenses.plausibility) emit_plausibility_table();
    finish();
    return outcome_;
  }

  /// Clean pass only: retrieval logs and reconnaissance analytics, no attack.
  ExperimentOutcome run_recon_only() {
    if (cfg_.strategies.empty()) cfg_.strategies = {Strategy::one_url};  // unused below
    validate(cfg_);
    prepare();
    run_clean_matrix();
    build_recon();
    emit_logs();
    emit_recon_tables();
    finish();
    return outcome_;
  }

private:
  using CleanRun = LoggedCleanRun;
  using AttackedRun = LoggedAttackedRun;

  // --- stage: setup ---------------------------------------------------------

  void prepare() {
    corpus_ = load_corpus(cfg_.corpus_path);
    if (cfg_.platforms_path.empty()) {
      platforms_ = default_platform_config();
    } else {
      std::ifstream in(cfg_.platforms_path);
      if (!in) throw ParseError("cannot open platform config: " + cfg_.platforms_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(cfg_.platforms_path + ": " + e.what());
      }
      platforms_ = load_platform_config(j);
    }
    if (generator_ != nullptr) {
      if (cfg_.prompts_dir.empty()) {
        throw ValidationError("experiment: prompts_dir is required with a live generator");
      }
      prompts_ = load_prompts(cfg_.prompts_dir);
    }
    out_root_ = std::filesystem::path(cfg_.out_dir);
    std::filesystem::create_directories(out_root_ / "logs");
    std::filesystem::create_directories(out_root_ / "tables");
  }

  PipelineConfig pipeline_for(PipelineSystem system) const {
    PipelineConfig p = cfg_.pipeline;
    p.system = system;
    return p;
  }

  const Query& query_of(const std::string& qid) const { return corpus_.queries.at(qid); }

  std::string entity_for(const std::string& cluster_id) const {
    auto it = cfg_.cluster_entities.find(cluster_id);
    return it == cfg_.cluster_entities.end() ? cfg_.default_entity : it->second;
  }

  // --- stage: clean matrix --------------------------------------------------

  struct CleanTask {
    PipelineSystem system;
    Surface surface;
    std::string query_id;
    std::uint64_t seed;
  };

  std::vector<CleanTask> clean_tasks() const {
    std::vector<CleanTask> tasks;
    for (PipelineSystem system : cfg_.systems) {
      for (Surface surface : cfg_.surfaces) {
        for (const TopicCluster& cluster : corpus_.clusters) {
          for (const std::string& qid : cluster.query_ids) {
            for (std::uint64_t seed : cfg_.seeds) {
              tasks.push_back({system, surface, qid, seed});
            }
          }
        }
      }
    }
    return tasks;
  }

  void run_clean_matrix() {
    const std::vector<CleanTask> tasks = clean_tasks();
    std::vector<std::optional<CleanRun>> slots(tasks.size());
    std::vector<std::string> errors(tasks.size());
    detail::parallel_for(tasks.size(), cfg_.workers, [&](std::size_t i) {
      const CleanTask& t = tasks[i];
      try {
        IndexRetriever retriever(corpus_.index, t.surface);
        RunRecord rec = run_pipeline(pipeline_for(t.system), retriever, query_of(t.query_id),
                                     t.seed);
        slots[i] = CleanRun{t.surface, std::move(rec)};
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
    collect(slots, errors, clean_);
    outcome_.clean_runs = static_cast<int>(clean_.size());
    sort_clean(clean_);
  }

  void run_blocked_matrix() {
    const std::vector<CleanTask> tasks = clean_tasks();
    std::vector<std::optional<CleanRun>> slots(tasks.size());
    std::vector<std::string> errors(tasks.size());
    const std::set<Platform> blocklist = full_ugc_blocklist();
    detail::parallel_for(tasks.size(), cfg_.workers, [&](std::size_t i) {
      const CleanTask& t = tasks[i];
      try {
        auto base = std::make_shared<IndexRetriever>(corpus_.index, t.surface);
        BlockingRetriever retriever(base, blocklist, platforms_);
        RunRecord rec = run_pipeline(pipeline_for(t.system), retriever, query_of(t.query_id),
                                     t.seed);
        slots[i] = CleanRun{t.surface, std::move(rec)};
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
    collect(slots, errors, blocked_);
    outcome_.blocked_runs = static_cast<int>(blocked_.size());
    sort_clean(blocked_);
  }

  template <typename Run>
  void collect(std::vector<std::optional<Run>>& slots, const std::vector<std::string>& errors,
               std::vector<Run>& into) {
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i]) {
        into.push_back(std::move(*slots[i]));
      } else {
        ++outcome_.failed_runs;
        outcome_.errors.push_back(errors[i]);
      }
    }
  }

  static void sort_clean(std::vector<CleanRun>& runs) {
    std::stable_sort(runs.begin(), runs.end(), [](const CleanRun& a, const CleanRun& b) {
      return std::tie(a.record.system, a.record.query_id, a.surface, a.record.seed) <
             std::tie(b.record.system, b.record.query_id, b.surface, b.record.seed);
    });
  }

  // --- stage: reconnaissance ------------------------------------------------

  void build_recon() {
    std::map<std::string, RetrievalLog> by_system;
    for (const CleanRun& run : clean_) {
      RetrievalLog& log = by_system[run.record.system];
      log.system_name = run.record.system;
      for (const RetrievalEvent& ev : run.record.retrievals) {
        log.entries.push_back({run.record.query_id, ev.url, Phase::retrieved});
      }
      for (const std::string& url : run.record.report.cited_urls) {
        log.entries.push_back({run.record.query_id, url, Phase::cited});
      }
    }
    recon_logs_.clear();
    // Keep logs in the configured system order for stable table columns.
    for (PipelineSystem system : cfg_.systems) {
      auto it = by_system.find(system_id(system));
      if (it == by_system.end()) continue;
      RetrievalLog& log = it->second;
      auto key = [](const LogEntry& e) {
        return std::tie(e.query_id, e.url, e.phase);
      };
      std::sort(log.entries.begin(), log.entries.end(),
                [&](const LogEntry& a, const LogEntry& b) { return key(a) < key(b); });
      log.entries.erase(std::unique(log.entries.begin(), log.entries.end(),
                                    [&](const LogEntry& a, const LogEntry& b) {
                                      return key(a) == key(b);
                                    }),
                        log.entries.end());
      recon_logs_.push_back(std::move(log));
    }
  }

  const RetrievalLog* log_for(PipelineSystem system) const {
    for (const RetrievalLog& log : recon_logs_) {
      if (log.system_name == system_id(system)) return &log;
    }
    return nullptr;
  }

  // --- stage: target selection ----------------------------------------------

  void select_all_targets() {
    for (PipelineSystem system : cfg_.systems) {
      const RetrievalLog* log = log_for(system);
      for (const TopicCluster& cluster : corpus_.clusters) {
        for (Strategy strategy : cfg_.strategies) {
          const auto key = std::make_tuple(std::string(system_id(system)), cluster.id, strategy);
          if (log == nullptr) {
            note_skip(key, cluster, "no clean retrieval log for this system");
            continue;
          }
          try {
            targets_[key] = select_targets(*log, corpus_, cluster.id, strategy, platforms_);
          } catch (const NoTargetError& e) {
            note_skip(key, cluster, e.what());
          }
        }
      }
    }
  }

  void note_skip(const std::tuple<std::string, std::string, Strategy>& key,
                 const TopicCluster& cluster, const std::string& reason) {
    const long long runs_lost = static_cast<long long>(cluster.query_ids.size()) *
                                static_cast<long long>(cfg_.seeds.size()) *
                                static_cast<long long>(cfg_.surfaces.size()) *
                                static_cast<long long>(cfg_.payload_lengths.size());
    outcome_.skipped_no_target += runs_lost;
    outcome_.skip_reasons.push_back(std::get<0>(key) + "/" + cluster.id + "/" +
                                    strategy_name(std::get<2>(key)) + ": " + reason);
  }

  // --- stage: payloads ------------------------------------------------------

  void build_payloads() {
    // Clusters that actually have a target under some (system, strategy).
    std::set<std::string> needed;
    for (const auto& [key, spec] : targets_) needed.insert(std::get<1>(key));
    for (const TopicCluster& cluster : corpus_.clusters) {
      if (!needed.count(cluster.id)) continue;
      const Payload base =
          generate_payload(corpus_, cluster, entity_for(cluster.id), generator_, prompts_);
      for (int words : cfg_.payload_lengths) {
        payloads_[{cluster.id, words}] = compress_payload(base, words, generator_, prompts_);
      }
    }
  }

  // --- stage: attacked matrix -----------------------------------------------

  struct AttackTask {
    PipelineSystem system;
    Strategy strategy;
    Surface surface;
    int target_words;
    std::string cluster_id;
    std::string query_id;
    std::uint64_t seed;
  };

  void run_attacked_matrix() {
    std::vector<AttackTask> tasks;
    for (PipelineSystem system : cfg_.systems) {
      for (Strategy strategy : cfg_.strategies) {
        for (Surface surface : cfg_.surfaces) {
          for (int words : cfg_.payload_lengths) {
            for (const TopicCluster& cluster : corpus_.clusters) {
              const auto key =
                  std::make_tuple(std::string(system_id(system)), cluster.id, strategy);
              if (!targets_.count(key)) continue;
              for (const std::string& qid : cluster.query_ids) {
                for (std::uint64_t seed : cfg_.seeds) {
                  tasks.push_back({system, strategy, surface, words, cluster.id, qid, seed});
                }
              }
            }
          }
        }
      }
    }
    std::vector<std::optional<AttackedRun>> slots(tasks.size());
    std::vector<std::string> errors(tasks.size());
    detail::parallel_for(tasks.size(), cfg_.workers, [&](std::size_t i) {
      const AttackTask& t = tasks[i];
      try {
        TargetSpec spec =
            targets_.at({std::string(system_id(t.system)), t.cluster_id, t.strategy});
        spec.surface = t.surface;
        auto base = std::make_shared<IndexRetriever>(corpus_.index, t.surface);
        auto poisoned = interpose(base, spec, payloads_.at({t.cluster_id, t.target_words}));
        RunRecord rec =
            run_pipeline(pipeline_for(t.system), *poisoned, query_of(t.query_id), t.seed);
        slots[i] = AttackedRun{t.strategy, t.surface, t.target_words, std::move(rec)};
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
    collect(slots, errors, attacked_);
    outcome_.attacked_runs = static_cast<int>(attacked_.size());
    std::stable_sort(attacked_.begin(), attacked_.end(),
                     [](const AttackedRun& a, const AttackedRun& b) {
                       return std::tie(a.record.system, a.record.query_id, a.strategy, a.surface,
                                       a.target_words, a.record.seed) <
                              std::tie(b.record.system, b.record.query_id, b.strategy, b.surface,
                                       b.target_words, b.record.seed);
                     });
  }

  // --- stage: log emission --------------------------------------------------

  void emit_logs() {
    std::string clean_lines;
    for (const CleanRun& run : clean_) {
      clean_lines += nlohmann::json{{"surface", surface_name(run.surface)},
                                    {"record", to_json(run.record)}}
                         .dump();
      clean_lines.push_back('\n');
    }
    emit_file(out_root_ / "logs" / "clean_runs.jsonl", clean_lines);

    std::string recon_lines;
    for (const RetrievalLog& log : recon_logs_) append_log_jsonl(recon_lines, log);
    emit_file(out_root_ / "logs" / "clean_retrieval.jsonl", recon_lines);

    if (attacks_attempted_) {
      std::string attacked_lines;
      for (const AttackedRun& run : attacked_) {
        attacked_lines += nlohmann::json{{"strategy", strategy_name(run.strategy)},
                                         {"surface", surface_name(run.surface)},
                                         {"target_words", run.target_words},
                                         {"record", to_json(run.record)}}
                              .dump();
        attacked_lines.push_back('\n');
      }
      emit_file(out_root_ / "logs" / "attacked_runs.jsonl", attacked_lines);
    }

    if (cfg_.defenses.blocking && !blocked_.empty()) {
      std::string blocked_lines;
      for (const CleanRun& run : blocked_) {
        blocked_lines += nlohmann::json{{"surface", surface_name(run.surface)},
                                        {"record", to_json(run.record)}}
                             .dump();
        blocked_lines.push_back('\n');
      }
      emit_file(out_root_ / "logs" / "blocked_runs.jsonl", blocked_lines);
    }
  }

  // --- stage: recon tables --------------------------------------------------

  void emit_recon_tables() {
    std::vector<std::pair<std::string, PrevalenceStats>> prevalence;
    std::vector<std::pair<std::string, std::map<Platform, double>>> composition;
    std::vector<std::pair<std::string, OverlapStats>> overlaps;
    for (const RetrievalLog& log : recon_logs_) {
      const std::string label = system_display_name(parse_system(log.system_name));
      prevalence.emplace_back(label, ugc_prevalence(log, Phase::retrieved, platforms_));
      composition.emplace_back(label, platform_composition(log, Phase::retrieved, platforms_));
      overlaps.emplace_back(label,
                            recurring_urls(log, corpus_.clusters, Phase::retrieved, 2, platforms_));
    }
    emit_table("recon_prevalence",
               prevalence_table(prevalence, "Retrieved UGC prevalence per system"));
    emit_table("recon_composition",
               composition_table(composition, "Platform composition of retrieved UGC"));
    emit_table("recon_overlap",
               overlap_table(overlaps, static_cast<int>(corpus_.clusters.size()),
                             "Recurring UGC URLs across queries"));
    emit_table("recon_recurring_clusters",
               recurring_per_cluster_table(corpus_.clusters, overlaps,
                                           "Recurring UGC URLs per cluster"));
    if (overlaps.size() >= 2) {
      std::vector<std::pair<std::string, JaccardStats>> pairs;
      for (std::size_t i = 0; i < overlaps.size(); ++i) {
        for (std::size_t j = i + 1; j < overlaps.size(); ++j) {
          pairs.emplace_back(overlaps[i].first + " vs " + overlaps[j].first,
                             jaccard_recurring(overlaps[i].second, overlaps[j].second));
        }
      }
      emit_table("recon_jaccard",
                 jaccard_table(pairs, "Recurring-URL overlap between systems"));
    }
  }

  // --- stage: attack tables -------------------------------------------------

  std::vector<RunRecord> attacked_subset(PipelineSystem system, Strategy strategy,
                                         Surface surface, int words) const {
    std::vector<RunRecord> out;
    for (const AttackedRun& run : attacked_) {
      if (run.record.system == system_id(system) && run.strategy == strategy &&
          run.surface == surface && run.target_words == words) {
        out.push_back(run.record);
      }
    }
    return out;
  }

  void emit_attack_tables() {
    for (Surface surface : cfg_.surfaces) {
      for (int words : cfg_.payload_lengths) {
        const std::string suffix =
            cfg_.payload_lengths.size() > 1 ? "_w" + std::to_string(words) : "";
        std::vector<std::pair<std::string, AttackSummary>> columns;
        for (PipelineSystem system : cfg_.systems) {
          for (Strategy strategy : cfg_.strategies) {
            const std::vector<RunRecord> recs =
                attacked_subset(system, strategy, surface, words);
            if (recs.empty()) continue;
            columns.emplace_back(std::string(system_display_name(system)) + " " +
                                     detail::strategy_display(strategy),
                                 summarize(recs));
          }
        }
        if (!columns.empty()) {
          emit_table(std::string("attack_summary_") + surface_name(surface) + suffix,
                     attack_summary_table(columns, std::string("Attack success rates (") +
                                                       surface_name(surface) + ")"));
        }
        for (Strategy strategy : cfg_.strategies) {
          std::vector<std::pair<std::string, std::map<std::string, AttackSummary>>> sys_cols;
          for (PipelineSystem system : cfg_.systems) {
            const std::vector<RunRecord> recs =
                attacked_subset(system, strategy, surface, words);
            if (recs.empty()) continue;
            sys_cols.emplace_back(system_display_name(system),
                                  per_cluster_summaries(recs, corpus_));
          }
          if (sys_cols.empty()) continue;
          emit_table(std::string("attack_clusters_") + surface_name(surface) + "_" +
                         strategy_name(strategy) + suffix,
                     per_cluster_table(corpus_.clusters, sys_cols,
                                       std::string("Per-cluster conditional rates (") +
                                           surface_name(surface) + ", " +
                                           detail::strategy_display(strategy) + ")"));
        }
      }
    }
  }

  // --- stage: blocking table ------------------------------------------------

  struct RunAverages {
    double unique_urls = 0.0;
    double ugc_urls = 0.0;
    double cited_urls = 0.0;
    double ugc_cited = 0.0;
    std::optional<double> diversity;
    int runs = 0;
  };

  RunAverages averages_for(const std::vector<CleanRun>& runs, PipelineSystem system,
                           Surface surface) const {
    RunAverages avg;
    double diversity_sum = 0.0;
    int diversity_runs = 0;
    for (const CleanRun& run : runs) {
      if (run.record.system != system_id(system) || run.surface != surface) continue;
      ++avg.runs;
      std::set<std::string> urls;
      for (const RetrievalEvent& ev : run.record.retrievals) urls.insert(ev.url);
      avg.unique_urls += static_cast<double>(urls.size());
      for (const std::string& url : urls) {
        if (is_ugc(recon_detail_classify(url))) avg.ugc_urls += 1.0;
      }
      avg.cited_urls += static_cast<double>(run.record.report.cited_urls.size());
      std::vector<std::string> cited_texts;
      for (const std::string& url : run.record.report.cited_urls) {
        if (is_ugc(recon_detail_classify(url))) avg.ugc_cited += 1.0;
        auto doc = corpus_.index.documents.find(url);
        if (doc != corpus_.index.documents.end()) {
          cited_texts.push_back(fetch_content(doc->second, surface));
        }
      }
      if (cited_texts.size() >= 2) {
        diversity_sum += information_diversity(cited_texts);
        ++diversity_runs;
      }
    }
    if (avg.runs > 0) {
      const double n = static_cast<double>(avg.runs);
      avg.unique_urls /= n;
      avg.ugc_urls /= n;
      avg.cited_urls /= n;
      avg.ugc_cited /= n;
    }
    if (diversity_runs > 0) avg.diversity = diversity_sum / diversity_runs;
    return avg;
  }

  Platform recon_detail_classify(const std::string& url) const {
    try {
      return classify_url(url, platforms_);
    } catch (const ParseError&) {
      return Platform::non_ugc;
    }
  }

  void emit_blocking_table() {
    for (Surface surface : cfg_.surfaces) {
      Table t;
      t.title = std::string("Source blocking impact (") + surface_name(surface) + ")";
      t.header = {"Metric"};
      std::vector<std::pair<RunAverages, RunAverages>> cols;  // (clean, blocked)
      for (PipelineSystem system : cfg_.systems) {
        t.header.push_back(std::string(system_display_name(system)) + " clean");
        t.header.push_back(std::string(system_display_name(system)) + " blocked");
        cols.emplace_back(averages_for(clean_, system, surface),
                          averages_for(blocked_, system, surface));
      }
      auto push_row = [&](const std::string& name, auto getter, auto fmt_fn) {
        std::vector<std::string> row{name};
        for (const auto& [clean, blocked] : cols) {
          row.push_back(fmt_fn(getter(clean)));
          row.push_back(fmt_fn(getter(blocked)));
        }
        t.rows.push_back(std::move(row));
      };
      auto f1 = [](double v) { return fmt1(v); };
      push_row("Unique URLs / query", [](const RunAverages& a) { return a.unique_urls; }, f1);
      push_row("UGC URLs / query", [](const RunAverages& a) { return a.ugc_urls; }, f1);
      push_row("Cited URLs / query", [](const RunAverages& a) { return a.cited_urls; }, f1);
      push_row("UGC cited / query", [](const RunAverages& a) { return a.ugc_cited; }, f1);
      {
        std::vector<std::string> row{"Info. diversity"};
        for (const auto& [clean, blocked] : cols) {
          row.push_back(clean.diversity ? fmt3(*clean.diversity) : std::string(kAbsentCell));
          row.push_back(blocked.diversity ? fmt3(*blocked.diversity) : std::string(kAbsentCell));
        }
        t.rows.push_back(std::move(row));
      }
      emit_table(std::string("defense_blocking_") + surface_name(surface), t);
    }
  }

  // --- stage: detection -----------------------------------------------------

  void emit_detection() {
    // Clean SERP snippets form both the organic sample pool and the detector
    // models' reference corpus; injected samples are every targeted snippet
    // with its payload appended, deduplicated by final text.
    std::vector<std::string> organic_texts;
    for (const auto& [url, doc] : corpus_.index.documents) {
      if (!normalize_ws(doc.snippet).empty()) organic_texts.push_back(doc.snippet);
    }
    std::set<std::string> injected_texts;
    for (const auto& [key, spec] : targets_) {
      const std::string& cluster_id = std::get<1>(key);
      for (int words : cfg_.payload_lengths) {
        const Payload& payload = payloads_.at({cluster_id, words});
        for (const auto& [url, doc] : corpus_.index.documents) {
          if (!target_matches(spec, url)) continue;
          injected_texts.insert(doc.snippet + " " + payload.text);
        }
      }
    }
    if (organic_texts.empty() || injected_texts.empty()) return;

    std::vector<DetectionSample> samples;
    for (const std::string& text : organic_texts) samples.push_back({text, "organic", {}});
    for (const std::string& text : injected_texts) samples.push_back({text, "injected", {}});

    const TokenLM observer = TokenLM::train(organic_texts, 3, 0.1);
    const TokenLM performer = TokenLM::train(organic_texts, 1, 0.1);
    detail::parallel_for(samples.size(), cfg_.workers, [&](std::size_t i) {
      DetectionSample& s = samples[i];
      s.scores["perplexity"] = perplexity(observer, s.text);
      s.scores["log_rank"] = log_rank(observer, s.text);
      s.scores["binoculars"] = binoculars_score(observer, performer, s.text);
    });

    std::string sample_lines;
    for (const DetectionSample& s : samples) {
      sample_lines += nlohmann::json{{"text", s.text}, {"label", s.label}}.dump();
      sample_lines.push_back('\n');
    }
    emit_file(out_root_ / "logs" / "detection_samples.jsonl", sample_lines);

    emit_table("defense_detection",
               detection_table(samples, {"perplexity", "log_rank", "binoculars"}));
    emit_screening_cost_table();
  }

  void emit_screening_cost_table() {
    Table t;
    t.title = "Judge-based screening cost model";
    t.header = {"System", "Scope", "Baseline calls", "Added calls", "Overhead (%)"};
    for (const RetrievalLog& log : recon_logs_) {
      auto baseline = cfg_.screening_baseline_calls.find(log.system_name);
      if (baseline == cfg_.screening_baseline_calls.end()) continue;
      // Per-query unique retrieved URLs and their UGC share, from the clean log.
      std::map<std::string, std::set<std::string>> urls_by_query;
      for (const auto& [qid, url] : recon_detail_pairs(log)) urls_by_query[qid].insert(url);
      if (urls_by_query.empty()) continue;
      double urls = 0.0;
      for (const auto& [qid, set] : urls_by_query) urls += static_cast<double>(set.size());
      urls /= static_cast<double>(urls_by_query.size());
      const PrevalenceStats prev = ugc_prevalence(log, Phase::retrieved, platforms_);
      const double ugc_fraction = prev.total_pairs == 0 ? 0.0 : prev.ugc_pct() / 100.0;
      const std::string label = system_display_name(parse_system(log.system_name));
      const ScreeningCost ugc_only =
          screening_cost(baseline->second, urls, ugc_fraction, true);
      const ScreeningCost all = screening_cost(baseline->second, urls, ugc_fraction, false);
      t.rows.push_back({label, "UGC only", fmt1(ugc_only.baseline_calls),
                        fmt1(ugc_only.added_calls), fmt1(ugc_only.overhead_pct())});
      t.rows.push_back({label, "All URLs", fmt1(all.baseline_calls), fmt1(all.added_calls),
                        fmt1(all.overhead_pct())});
    }
    if (!t.rows.empty()) emit_table("defense_screening_cost", t);
  }

  std::set<std::pair<std::string, std::string>> recon_detail_pairs(
      const RetrievalLog& log) const {
    std::set<std::pair<std::string, std::string>> out;
    for (const LogEntry& e : log.entries) {
      if (e.phase == Phase::retrieved) out.emplace(e.query_id, e.url);
    }
    return out;
  }

  // --- stage: plausibility --------------------------------------------------

  void emit_plausibility_table() {
    emit_table("defense_plausibility",
               plausibility_table(corpus_, clean_, attacked_, cfg_.systems));
  }

  // --- stage: manifest ------------------------------------------------------

  void emit_file(const std::filesystem::path& path, const std::string& content) {
    detail::write_file(path, content);
    emitted_.push_back(path);
  }

  void emit_table(const std::string& name, const Table& table) {
    emit_file(out_root_ / "tables" / (name + ".csv"), to_csv(table));
    emit_file(out_root_ / "tables" / (name + ".md"), to_markdown(table));
  }

  void finish() {
    emit_file(out_root_ / "experiment_config.json", to_json(cfg_).dump(2) + "\n");
    nlohmann::json files = nlohmann::json::array();
    std::vector<std::pair<std::string, std::filesystem::path>> listed;
    for (const std::filesystem::path& p : emitted_) {
      listed.emplace_back(std::filesystem::relative(p, out_root_).generic_string(), p);
    }
    std::sort(listed.begin(), listed.end());
    for (const auto& [rel, p] : listed) {
      const std::string bytes = detail::read_file_bytes(p);
      files.push_back({{"path", rel},
                       {"bytes", bytes.size()},
                       {"fnv1a64", detail::hash_hex(fnv1a64(bytes))}});
    }
    const std::filesystem::path manifest = out_root_ / "manifest.json";
    detail::write_file(manifest, nlohmann::json{{"files", files}}.dump(2) + "\n");
    outcome_.manifest_path = manifest;
  }

  // --- state ----------------------------------------------------------------

  ExperimentConfig cfg_;
  TextGenerator* generator_ = nullptr;
  bool attacks_attempted_ = false;
  Corpus corpus_;
  PlatformConfig platforms_;
  PromptSet prompts_;
  std::filesystem::path out_root_;

  std::vector<CleanRun> clean_;
  std::vector<CleanRun> blocked_;
  std::vector<AttackedRun> attacked_;
  std::vector<RetrievalLog> recon_logs_;
  // (system id, cluster id, strategy) -> spec
  std::map<std::tuple<std::string, std::string, Strategy>, TargetSpec> targets_;
  std::map<std::pair<std::string, int>, Payload> payloads_;  // (cluster, words)

  std::vector<std::filesystem::path> emitted_;
  ExperimentOutcome outcome_;
};

inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg,
                                        TextGenerator* generator = nullptr) {
  return ExperimentRunner(cfg, generator).run();
}

inline ExperimentOutcome run_recon(const ExperimentConfig& cfg) {
  return ExperimentRunner(cfg, nullptr).run_recon_only();
}

/// Write a set of named tables (CSV + Markdown) plus a hashed manifest under
/// `out_dir`, mirroring the full runner's output conventions. Returns the
/// manifest path.
inline std::filesystem::path write_tables_with_manifest(
    const std::string& out_dir, const std::vector<std::pair<std::string, Table>>& tables) {
  const std::filesystem::path root(out_dir);
  std::filesystem::create_directories(root / "tables");
  std::vector<std::pair<std::string, std::filesystem::path>> listed;
  for (const auto& [name, table] : tables) {
    const std::filesystem::path csv = root / "tables" / (name + ".csv");
    const std::filesystem::path md = root / "tables" / (name + ".md");
    detail::write_file(csv, to_csv(table));
    detail::write_file(md, to_markdown(table));
    listed.emplace_back(std::filesystem::relative(csv, root).generic_string(), csv);
    listed.emplace_back(std::filesystem::relative(md, root).generic_string(), md);
  }
  std::sort(listed.begin(), listed.end());
  nlohmann::json files = nlohmann::json::array();
  for (const auto& [rel, p] : listed) {
    const std::string bytes = detail::read_file_bytes(p);
    files.push_back({{"path", rel},
                     {"bytes", bytes.size()},
                     {"fnv1a64", detail::hash_hex(fnv1a64(bytes))}});
  }
  const std::filesystem::path manifest = root / "manifest.json";
  detail::write_file(manifest, nlohmann::json{{"files", files}}.dump(2) + "\n");
  return manifest;
}

}  // namespace poisim
