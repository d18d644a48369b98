// poisim: offline retrieval-poisoning simulator for deep-research pipelines.
//
// Subcommands:
//   run           full campaign matrix (clean pass, recon, attack, defenses)
//   recon         clean pass and reconnaissance analytics only
//   detect        score a detection-sample file and report per-detector AUROC
//   plausibility  compare attacked reports against their clean counterparts
//
// All randomness flows from the configured seed list; reruns with the same
// config are byte-identical. Set POISIM_GENERATOR_URL / POISIM_SCORER_URL to
// attach live endpoints; unset means fully offline.

#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "poisim/experiment.hpp"
#include "poisim/http_clients.hpp"

namespace {

struct CliOptions {
  std::string corpus;
  std::string out = "out";
  std::string config;
  std::string platforms;
  std::string prompts_dir;
  std::string entity;
  std::string samples;       // detect
  std::string attacked_log;  // plausibility
  std::string clean_log;     // plausibility
  std::vector<std::string> systems;
  std::vector<std::string> strategies;
  std::vector<std::string> surfaces;
  std::vector<std::uint64_t> seeds;
  std::vector<int> lengths;
  int workers = -1;
  double persuasion = -1.0;
  bool blocking = false;
  bool detection = false;
  bool plausibility = false;
};

poisim::ExperimentConfig build_config(const CliOptions& o) {
  poisim::ExperimentConfig cfg;
  if (!o.corpus.empty()) cfg.corpus_path = o.corpus;
  cfg.out_dir = o.out;
  if (!o.platforms.empty()) cfg.platforms_path = o.platforms;
  if (!o.prompts_dir.empty()) cfg.prompts_dir = o.prompts_dir;
  if (!o.entity.empty()) cfg.default_entity = o.entity;
  if (!o.systems.empty()) {
    cfg.systems.clear();
    for (const auto& s : o.systems) cfg.systems.push_back(poisim::parse_system(s));
  }
  if (!o.strategies.empty()) {
    cfg.strategies.clear();
    for (const auto& s : o.strategies) cfg.strategies.push_back(poisim::parse_strategy(s));
  }
  if (!o.surfaces.empty()) {
    cfg.surfaces.clear();
    for (const auto& s : o.surfaces) cfg.surfaces.push_back(poisim::parse_surface(s));
  }
  if (!o.seeds.empty()) cfg.seeds = o.seeds;
  if (!o.lengths.empty()) cfg.payload_lengths = o.lengths;
  if (o.workers >= 0) cfg.workers = o.workers;
  if (o.persuasion >= 0.0) cfg.pipeline.persuasion_prob = o.persuasion;
  cfg.defenses.blocking = o.blocking;
  cfg.defenses.detection = o.detection;
  cfg.defenses.plausibility = o.plausibility;
  // The config file has the last word over any flag.
  if (!o.config.empty()) poisim::load_config_file(cfg, o.config);
  return cfg;
}

void print_outcome(const poisim::ExperimentOutcome& outcome) {
  std::cout << "clean runs: " << outcome.clean_runs;
  std::cout << ", attacked runs: " << outcome.attacked_runs;
  if (outcome.blocked_runs > 0) std::cout << ", blocked runs: " << outcome.blocked_runs;
  std::cout << "\n";
  if (outcome.skipped_no_target > 0) {
    std::cout << "skipped " << outcome.skipped_no_target << " runs with no viable target:\n";
    for (const std::string& reason : outcome.skip_reasons) {
      std::cout << "  " << reason << "\n";
    }
  }
  if (outcome.failed_runs > 0) {
    std::cerr << outcome.failed_runs << " runs failed and were skipped:\n";
    const std::size_t shown = std::min<std::size_t>(outcome.errors.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) std::cerr << "  " << outcome.errors[i] << "\n";
    if (outcome.errors.size() > shown) {
      std::cerr << "  ... and " << outcome.errors.size() - shown << " more\n";
    }
  }
  std::cout << "manifest: " << outcome.manifest_path.string() << "\n";
}

int cmd_run(const CliOptions& o, bool recon_only) {
  poisim::ExperimentConfig cfg = build_config(o);
  std::unique_ptr<poisim::HttpTextGenerator> generator;
  if (const char* url = std::getenv(poisim::kGeneratorUrlEnv); url != nullptr && *url != '\0') {
    generator = std::make_unique<poisim::HttpTextGenerator>(url);
  }
  const poisim::ExperimentOutcome outcome =
      recon_only ? poisim::run_recon(cfg)
                 : poisim::run_experiment(cfg, generator.get());
  print_outcome(outcome);
  return 0;
}

int cmd_detect(const CliOptions& o) {
  if (o.corpus.empty()) throw poisim::ValidationError("detect: --corpus is required");
  if (o.samples.empty()) throw poisim::ValidationError("detect: --samples is required");
  const poisim::Corpus corpus = poisim::load_corpus(o.corpus);
  std::vector<std::string> reference;
  for (const auto& [url, doc] : corpus.index.documents) {
    if (!poisim::normalize_ws(doc.snippet).empty()) reference.push_back(doc.snippet);
  }
  if (reference.empty()) {
    throw poisim::ValidationError("detect: corpus has no snippets to train the models on");
  }
  std::vector<poisim::DetectionSample> samples = poisim::load_detection_samples(o.samples);
  const poisim::TokenLM observer = poisim::TokenLM::train(reference, 3, 0.1);
  const poisim::TokenLM performer = poisim::TokenLM::train(reference, 1, 0.1);
  std::unique_ptr<poisim::HttpTokenScorer> scorer;
  if (const char* url = std::getenv(poisim::kScorerUrlEnv); url != nullptr && *url != '\0') {
    scorer = std::make_unique<poisim::HttpTokenScorer>(url);
  }
  for (poisim::DetectionSample& s : samples) {
    s.scores["perplexity"] = poisim::perplexity(observer, s.text);
    s.scores["log_rank"] = poisim::log_rank(observer, s.text);
    s.scores["binoculars"] = poisim::binoculars_score(observer, performer, s.text);
    if (scorer) {
      double nll = 0.0;
      const std::vector<poisim::ScoredToken> tokens = scorer->score(s.text);
      if (tokens.empty()) throw poisim::Error("remote scorer returned no tokens");
      for (const poisim::ScoredToken& t : tokens) nll -= t.logprob;
      s.scores["remote_nll"] = nll / static_cast<double>(tokens.size());
    }
  }
  std::vector<std::string> detectors = {"perplexity", "log_rank", "binoculars"};
  if (scorer) detectors.push_back("remote_nll");
  const auto manifest = poisim::write_tables_with_manifest(
      o.out, {{"defense_detection", poisim::detection_table(samples, detectors)}});
  std::cout << "scored " << samples.size() << " samples\n";
  std::cout << "manifest: " << manifest.string() << "\n";
  return 0;
}

int cmd_plausibility(const CliOptions& o) {
  if (o.corpus.empty()) throw poisim::ValidationError("plausibility: --corpus is required");
  if (o.clean_log.empty() || o.attacked_log.empty()) {
    throw poisim::ValidationError("plausibility: --clean and --attacked are required");
  }
  const poisim::Corpus corpus = poisim::load_corpus(o.corpus);
  const auto clean = poisim::load_clean_runs(o.clean_log);
  const auto attacked = poisim::load_attacked_runs(o.attacked_log);
  std::vector<poisim::PipelineSystem> systems;
  if (o.systems.empty()) {
    systems = {poisim::PipelineSystem::costorm, poisim::PipelineSystem::storm,
               poisim::PipelineSystem::omnithink};
  } else {
    for (const auto& s : o.systems) systems.push_back(poisim::parse_system(s));
  }
  const auto manifest = poisim::write_tables_with_manifest(
      o.out,
      {{"defense_plausibility", poisim::plausibility_table(corpus, clean, attacked, systems)}});
  std::cout << "compared " << attacked.size() << " attacked runs against " << clean.size()
            << " clean runs\n";
  std::cout << "manifest: " << manifest.string() << "\n";
  return 0;
}

void add_matrix_options(CLI::App* cmd, CliOptions& o, bool with_attack) {
  cmd->add_option("--corpus", o.corpus, "Corpus JSON file");
  cmd->add_option("--out", o.out, "Output directory (default: out)");
  cmd->add_option("--config", o.config, "JSON config file; overrides flags");
  cmd->add_option("--platforms", o.platforms, "Platform rule JSON file");
  cmd->add_option("--system", o.systems, "Pipeline system (repeatable)")->delimiter(',');
  cmd->add_option("--surface", o.surfaces, "Retrieval surface (repeatable)")->delimiter(',');
  cmd->add_option("--seed-list", o.seeds, "Run seeds (comma separated)")->delimiter(',');
  cmd->add_option("--workers", o.workers, "Worker threads (default: logical CPUs)");
  if (with_attack) {
    cmd->add_option("--strategy", o.strategies, "Targeting strategy (repeatable)")
        ->delimiter(',');
    cmd->add_option("--entity", o.entity, "Default target entity name");
    cmd->add_option("--payload-length", o.lengths, "Payload word targets (comma separated)")
        ->delimiter(',');
    cmd->add_option("--persuasion", o.persuasion, "Mention persuasion probability in [0,1]");
    cmd->add_option("--prompts-dir", o.prompts_dir,
                    "Prompt template directory (live generator only)");
    cmd->add_flag("--blocking", o.blocking, "Also run the source-blocking defense");
    cmd->add_flag("--detection", o.detection, "Also run the detection defense");
    cmd->add_flag("--plausibility", o.plausibility, "Also run the plausibility comparison");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offline retrieval-poisoning simulator for deep-research pipelines"};
  app.require_subcommand(1);
  CliOptions o;

  CLI::App* run = app.add_subcommand("run", "Execute the full campaign matrix");
  add_matrix_options(run, o, true);

  CLI::App* recon = app.add_subcommand("recon", "Clean pass and reconnaissance analytics only");
  add_matrix_options(recon, o, false);

  CLI::App* detect = app.add_subcommand("detect", "Score detection samples and report AUROC");
  detect->add_option("--corpus", o.corpus, "Corpus JSON file (reference texts)");
  detect->add_option("--samples", o.samples, "Detection samples JSONL ({text, label} lines)");
  detect->add_option("--out", o.out, "Output directory (default: out)");

  CLI::App* plaus =
      app.add_subcommand("plausibility", "Compare attacked reports against clean ones");
  plaus->add_option("--corpus", o.corpus, "Corpus JSON file");
  plaus->add_option("--clean", o.clean_log, "Clean run log (clean_runs.jsonl)");
  plaus->add_option("--attacked", o.attacked_log, "Attacked run log (attacked_runs.jsonl)");
  plaus->add_option("--system", o.systems, "Pipeline system (repeatable)")->delimiter(',');
  plaus->add_option("--out", o.out, "Output directory (default: out)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(o, false);
    if (recon->parsed()) return cmd_run(o, true);
    if (detect->parsed()) return cmd_detect(o);
    if (plaus->parsed()) return cmd_plausibility(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
