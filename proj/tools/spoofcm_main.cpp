// tools/spoofcm_main.cpp

// Copyright 2026  spoofcm authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Command-line surface: synth, extract, train, score, evaluate, experiment,
// manifest validate. Exit codes: 0 success, 1 runtime/data failure,
// 2 usage error.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <set>

#include "spoofcm/error.hpp"
#include "spoofcm/experiment.hpp"
#include "spoofcm/io_util.hpp"
#include "spoofcm/manifest.hpp"
#include "spoofcm/metrics.hpp"
#include "spoofcm/model_io.hpp"
#include "spoofcm/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spoofcm;

namespace {

WindowKind window_from_string(const std::string &s) {
  if (s == "hamming") return WindowKind::kHamming;
  if (s == "hann") return WindowKind::kHann;
  if (s == "rectangular") return WindowKind::kRectangular;
  throw InvalidConfig("unknown window '" + s + "'");
}

// mutable string mirrors of FeatureConfig enums for CLI11 binding; every
// option pointer is kept so set flags can override a JSON config afterwards
struct FeatureFlags {
  std::string kind = "mfcc";
  std::string dynamics = "static+d+dd";
  std::string window = "hamming";
  FeatureConfig cfg;
  std::map<std::string, CLI::Option *> opts;

  void attach(CLI::App *cmd, bool with_kind = true) {
    if (with_kind)
      opts["kind"] = cmd->add_option("--feature", kind, "mfcc|lfcc|cqcc")
                         ->check(CLI::IsMember({"mfcc", "lfcc", "cqcc"}));
    opts["num_ceps"] =
        cmd->add_option("--num_ceps", cfg.num_ceps, "static cepstra per frame");
    opts["include_c0"] = cmd->add_flag("--include_c0", cfg.include_c0,
                                       "keep the c0 term");
    opts["dynamics"] =
        cmd->add_option("--dynamics", dynamics, "static|static+d|static+d+dd")
            ->check(CLI::IsMember({"static", "static+d", "static+d+dd"}));
    opts["num_filters"] =
        cmd->add_option("--num_filters", cfg.num_filters, "mel/linear bands");
    opts["cqt_bins_per_octave"] =
        cmd->add_option("--cqt_bins_per_octave", cfg.cqt_bins_per_octave,
                        "constant-Q bins per octave");
    opts["cqt_octaves"] =
        cmd->add_option("--cqt_octaves", cfg.cqt_octaves, "constant-Q octaves");
    opts["resample_period"] =
        cmd->add_option("--resample_period", cfg.resample_period,
                        "uniform resampling density per octave");
    opts["log_floor"] =
        cmd->add_option("--log_floor", cfg.log_floor, "energy floor before log");
    opts["frame_ms"] = cmd->add_option("--frame_ms", cfg.frame_ms, "frame length (ms)");
    opts["hop_ms"] = cmd->add_option("--hop_ms", cfg.hop_ms, "frame hop (ms)");
    opts["window"] = cmd->add_option("--window", window, "hamming|hann|rectangular")
                         ->check(CLI::IsMember({"hamming", "hann", "rectangular"}));
    opts["preemph"] =
        cmd->add_option("--preemph", cfg.preemph, "pre-emphasis coefficient");
    opts["fft_size"] =
        cmd->add_option("--fft_size", cfg.fft_size, "FFT size (power of two)");
    opts["fmin"] = cmd->add_option("--fmin", cfg.fmin_hz, "filterbank low edge (Hz)");
    opts["fmax"] = cmd->add_option("--fmax", cfg.fmax_hz,
                                   "filterbank high edge (Hz, 0 = Nyquist)");
    opts["cqt_hop_ms"] = cmd->add_option("--cqt_hop_ms", cfg.cqt_hop_ms,
                                         "constant-Q frame hop (ms)");
  }

  bool set(const std::string &name) const {
    const auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }

  FeatureConfig resolve() const {
    FeatureConfig out = cfg;
    out.kind = feature_kind_from_string(kind);
    out.dynamics = dynamics_from_string(dynamics);
    out.window = window_from_string(window);
    return out;
  }

  // overwrite only the fields the user actually passed
  void apply_set_flags(FeatureConfig &out) const {
    if (set("kind")) out.kind = feature_kind_from_string(kind);
    if (set("num_ceps")) out.num_ceps = cfg.num_ceps;
    if (set("include_c0")) out.include_c0 = cfg.include_c0;
    if (set("dynamics")) out.dynamics = dynamics_from_string(dynamics);
    if (set("num_filters")) out.num_filters = cfg.num_filters;
    if (set("cqt_bins_per_octave"))
      out.cqt_bins_per_octave = cfg.cqt_bins_per_octave;
    if (set("cqt_octaves")) out.cqt_octaves = cfg.cqt_octaves;
    if (set("resample_period")) out.resample_period = cfg.resample_period;
    if (set("log_floor")) out.log_floor = cfg.log_floor;
    if (set("frame_ms")) out.frame_ms = cfg.frame_ms;
    if (set("hop_ms")) out.hop_ms = cfg.hop_ms;
    if (set("window")) out.window = window_from_string(window);
    if (set("preemph")) out.preemph = cfg.preemph;
    if (set("fft_size")) out.fft_size = cfg.fft_size;
    if (set("fmin")) out.fmin_hz = cfg.fmin_hz;
    if (set("fmax")) out.fmax_hz = cfg.fmax_hz;
    if (set("cqt_hop_ms")) out.cqt_hop_ms = cfg.cqt_hop_ms;
  }
};

std::set<Domain> parse_domains(const std::string &text) {
  std::set<Domain> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    if (!item.empty()) out.insert(domain_from_string(item));
    pos = comma + 1;
  }
  if (out.empty()) throw InvalidConfig("empty domain list");
  return out;
}

void apply_feature_json(const json &j, FeatureConfig &cfg) {
  if (j.contains("kind")) cfg.kind = feature_kind_from_string(j["kind"]);
  if (j.contains("num_ceps")) cfg.num_ceps = j["num_ceps"];
  if (j.contains("include_c0")) cfg.include_c0 = j["include_c0"];
  if (j.contains("dynamics")) cfg.dynamics = dynamics_from_string(j["dynamics"]);
  if (j.contains("num_filters")) cfg.num_filters = j["num_filters"];
  if (j.contains("cqt_bins_per_octave"))
    cfg.cqt_bins_per_octave = j["cqt_bins_per_octave"];
  if (j.contains("cqt_octaves")) cfg.cqt_octaves = j["cqt_octaves"];
  if (j.contains("resample_period")) cfg.resample_period = j["resample_period"];
  if (j.contains("log_floor")) cfg.log_floor = j["log_floor"];
  if (j.contains("frame_ms")) cfg.frame_ms = j["frame_ms"];
  if (j.contains("hop_ms")) cfg.hop_ms = j["hop_ms"];
  if (j.contains("window")) cfg.window = window_from_string(j["window"]);
  if (j.contains("preemph")) cfg.preemph = j["preemph"];
  if (j.contains("fft_size")) cfg.fft_size = j["fft_size"];
  if (j.contains("fmin")) cfg.fmin_hz = j["fmin"];
  if (j.contains("fmax")) cfg.fmax_hz = j["fmax"];
  if (j.contains("cqt_hop_ms")) cfg.cqt_hop_ms = j["cqt_hop_ms"];
}

void apply_experiment_json(const std::string &path, ExperimentSettings &s) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error &e) {
    throw ParseError(path + ": " + e.what());
  }
  if (j.contains("feature")) s.features = {feature_kind_from_string(j["feature"])};
  if (j.contains("features")) {
    s.features.clear();
    for (const auto &f : j["features"])
      s.features.push_back(feature_kind_from_string(f));
  }
  if (j.contains("classifier"))
    s.classifiers = {classifier_from_string(j["classifier"])};
  if (j.contains("classifiers")) {
    s.classifiers.clear();
    for (const auto &c : j["classifiers"])
      s.classifiers.push_back(classifier_from_string(c));
  }
  if (j.contains("seed")) s.seed = j["seed"];
  if (j.contains("cost_params")) {
    const json &c = j["cost_params"];
    if (c.contains("c_miss")) s.costs.c_miss = c["c_miss"];
    if (c.contains("c_fa")) s.costs.c_fa = c["c_fa"];
    if (c.contains("pi_spf")) s.costs.pi_spf = c["pi_spf"];
  }
  if (j.contains("feature_overrides"))
    apply_feature_json(j["feature_overrides"], s.feature_base);
  if (j.contains("train")) {
    const json &t = j["train"];
    if (t.contains("gmm_components")) s.train_base.gmm_components = t["gmm_components"];
    if (t.contains("gmm_max_iter")) s.train_base.gmm_max_iter = t["gmm_max_iter"];
    if (t.contains("max_frames_per_class"))
      s.train_base.max_frames_per_class = t["max_frames_per_class"];
    if (t.contains("num_trees")) s.train_base.num_trees = t["num_trees"];
    if (t.contains("max_depth")) s.train_base.max_depth = t["max_depth"];
    if (t.contains("learning_rate")) s.train_base.learning_rate = t["learning_rate"];
  }
  if (j.contains("corpus")) {
    const json &c = j["corpus"];
    if (c.contains("speakers_per_domain"))
      s.corpus.speakers_per_domain = c["speakers_per_domain"];
    if (c.contains("utts_per_speaker"))
      s.corpus.utts_per_speaker = c["utts_per_speaker"];
    if (c.contains("min_duration_s")) s.corpus.min_duration_s = c["min_duration_s"];
    if (c.contains("max_duration_s")) s.corpus.max_duration_s = c["max_duration_s"];
    if (c.contains("domain_shift_lo_hz"))
      s.corpus.domain_shift_lo_hz = c["domain_shift_lo_hz"];
    if (c.contains("domain_shift_hi_hz"))
      s.corpus.domain_shift_hi_hz = c["domain_shift_hi_hz"];
    if (c.contains("recipes")) {
      s.corpus.recipes.clear();
      int idx = 1;
      for (const auto &r : c["recipes"]) {
        char attack[16];
        std::snprintf(attack, sizeof(attack), "A%02d", idx++);
        s.corpus.recipes.push_back(parse_recipe(r, attack));
      }
    }
  }
}

std::vector<SpoofRecipe> recipes_from_list(const std::vector<std::string> &items) {
  if (items.empty()) return default_recipes();
  std::vector<SpoofRecipe> out;
  int idx = 1;
  for (const std::string &r : items) {
    char attack[16];
    std::snprintf(attack, sizeof(attack), "A%02d", idx++);
    out.push_back(parse_recipe(r, attack));
  }
  return out;
}

void print_protocol_stats(const ProtocolStats &stats) {
  std::printf("%-10s %-6s %10s %10s %7s %7s %8s\n", "domain", "split",
              "bonafide", "spoof", "male", "female", "attacks");
  for (const auto &[key, cell] : stats.per_cell)
    std::printf("%-10s %-6s %10zu %10zu %7zu %7zu %8zu\n",
                to_string(key.first), to_string(key.second), cell.n_bonafide,
                cell.n_spoof, cell.speakers_male, cell.speakers_female,
                cell.distinct_attacks);
  for (const std::string &w : stats.warnings)
    std::printf("warning: %s\n", w.c_str());
}

int run_cli(int argc, char **argv) {
  CLI::App app{"spoofing-countermeasure toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;

  // ---- synth ----------------------------------------------------------
  auto *synth = app.add_subcommand("synth", "generate a synthetic corpus");
  struct {
    std::string out_dir;
    CorpusConfig cfg;
    std::vector<std::string> recipes;
  } synth_args;
  synth->add_option("--out", synth_args.out_dir, "output directory")->required();
  synth->add_option("--speakers-per-domain", synth_args.cfg.speakers_per_domain,
                    "speakers per domain");
  synth->add_option("--utts-per-speaker", synth_args.cfg.utts_per_speaker,
                    "utterances per speaker");
  synth->add_option("--seed", synth_args.cfg.seed, "corpus seed");
  synth->add_option("--min-duration", synth_args.cfg.min_duration_s,
                    "shortest utterance (s)");
  synth->add_option("--max-duration", synth_args.cfg.max_duration_s,
                    "longest utterance (s)");
  synth->add_option("--recipes", synth_args.recipes,
                    "spoof recipes, e.g. lpc_resynth f0_shift:2 speed_shift:0.88");
  synth->callback([&] {
    synth_args.cfg.recipes = recipes_from_list(synth_args.recipes);
    build_corpus(synth_args.cfg, synth_args.out_dir);
    std::printf("%s\n", (fs::path(synth_args.out_dir) / "manifest.tsv").c_str());
  });

  // ---- extract --------------------------------------------------------
  auto *extract = app.add_subcommand("extract", "compute features into a cache");
  struct {
    std::string manifest, cache_dir;
    bool csv = false;
    FeatureFlags feats;
  } ex_args;
  extract->add_option("--manifest", ex_args.manifest, "manifest TSV")->required();
  extract->add_option("--cache-dir", ex_args.cache_dir, "feature cache directory")
      ->required();
  extract->add_flag("--csv", ex_args.csv, "also write per-utterance CSV");
  ex_args.feats.attach(extract);
  extract->callback([&] {
    const Manifest manifest = load_manifest(ex_args.manifest);
    const std::string base = fs::path(ex_args.manifest).parent_path().string();
    const ExtractReport report = extract_to_cache(
        manifest, base, ex_args.feats.resolve(), ex_args.cache_dir, ex_args.csv);
    std::printf("written %zu, cached %zu, failed %zu\n", report.written,
                report.skipped, report.failures.size());
    for (const auto &[utt, why] : report.failures)
      std::fprintf(stderr, "error: %s: %s\n", utt.c_str(), why.c_str());
    if (!report.failures.empty()) exit_code = 1;
  });

  // ---- train ----------------------------------------------------------
  auto *train = app.add_subcommand("train", "train a countermeasure model");
  struct {
    std::string manifest, cache_dir, model_out;
    std::string classifier = "gmm";
    std::string domains = "native";
    FeatureFlags feats;
    TrainOptions opts;
  } tr_args;
  train->add_option("--manifest", tr_args.manifest, "manifest TSV")->required();
  train->add_option("--cache-dir", tr_args.cache_dir, "feature cache")->required();
  train->add_option("--model-out", tr_args.model_out, "output model file")->required();
  train->add_option("--classifier", tr_args.classifier,
                    "gmm|gbdt_depthwise|gbdt_symmetric")
      ->check(CLI::IsMember({"gmm", "gbdt_depthwise", "gbdt_symmetric"}));
  train->add_option("--train_domains", tr_args.domains,
                    "comma list of native,nonnative");
  train->add_option("--seed", tr_args.opts.seed, "training seed");
  train->add_option("--gmm-components", tr_args.opts.gmm_components,
                    "mixture components per class");
  train->add_option("--gmm-max-iter", tr_args.opts.gmm_max_iter, "EM iterations");
  train->add_option("--max-frames-per-class", tr_args.opts.max_frames_per_class,
                    "EM frame cap per class (0 = all)");
  train->add_option("--num-trees", tr_args.opts.num_trees, "boosting rounds");
  train->add_option("--max-depth", tr_args.opts.max_depth, "tree depth");
  train->add_option("--learning-rate", tr_args.opts.learning_rate, "shrinkage");
  tr_args.feats.attach(train);
  train->callback([&] {
    const Manifest manifest = load_manifest(tr_args.manifest);
    tr_args.opts.classifier = classifier_from_string(tr_args.classifier);
    tr_args.opts.train_domains = parse_domains(tr_args.domains);
    const CmModel model = train_from_cache(manifest, tr_args.cache_dir,
                                           tr_args.feats.resolve(), tr_args.opts);
    save_model(tr_args.model_out, model);
    std::printf("%s\n", tr_args.model_out.c_str());
  });

  // ---- score ----------------------------------------------------------
  auto *score = app.add_subcommand("score", "score an eval split");
  struct {
    std::string model, manifest, cache_dir, scores_out;
    std::string domain = "native";
    std::string split = "eval";
    FeatureFlags feats;
  } sc_args;
  score->add_option("--model", sc_args.model, "model file")->required();
  score->add_option("--manifest", sc_args.manifest, "manifest TSV")->required();
  score->add_option("--cache-dir", sc_args.cache_dir, "feature cache")->required();
  score->add_option("--scores-out", sc_args.scores_out, "output score file")
      ->required();
  score->add_option("--eval-domain", sc_args.domain, "native|nonnative")
      ->check(CLI::IsMember({"native", "nonnative"}));
  score->add_option("--split", sc_args.split, "train|dev|eval")
      ->check(CLI::IsMember({"train", "dev", "eval"}));
  sc_args.feats.attach(score);
  score->callback([&] {
    const Manifest manifest = load_manifest(sc_args.manifest);
    const CmModel model = load_model(sc_args.model);
    const ScoreSet scores = score_from_cache(
        model, manifest, sc_args.cache_dir, sc_args.feats.resolve(),
        domain_from_string(sc_args.domain), split_from_string(sc_args.split));
    save_score_file(sc_args.scores_out, scores);
    std::printf("%s: %zu scores\n", sc_args.scores_out.c_str(),
                scores.entries.size());
  });

  // ---- evaluate -------------------------------------------------------
  auto *evaluate_cmd = app.add_subcommand("evaluate", "minDCF / EER of a score file");
  struct {
    std::string scores, manifest;
    bool per_attack = false;
    CostParams costs;
  } ev_args;
  evaluate_cmd->add_option("--scores", ev_args.scores, "score TSV")->required();
  evaluate_cmd->add_option("--c_miss", ev_args.costs.c_miss, "miss cost");
  evaluate_cmd->add_option("--c_fa", ev_args.costs.c_fa, "false-alarm cost");
  evaluate_cmd->add_option("--pi_spf", ev_args.costs.pi_spf, "spoof prior");
  evaluate_cmd->add_option("--manifest", ev_args.manifest,
                           "manifest for the per-attack breakdown");
  evaluate_cmd->add_flag("--per-attack", ev_args.per_attack,
                         "report per-attack metrics (needs --manifest)");
  evaluate_cmd->callback([&] {
    const ScoreSet scores = load_score_file(ev_args.scores);
    const EvalResult r = evaluate(scores, ev_args.costs);
    std::printf("minDCF: %.3f\n", r.min_dcf);
    std::printf("EER: %.2f%%\n", 100.0 * r.eer);
    std::printf("bonafide: %zu  spoof: %zu\n", r.n_bonafide, r.n_spoof);
    if (ev_args.per_attack) {
      if (ev_args.manifest.empty())
        throw InvalidConfig("--per-attack needs --manifest");
      std::map<std::string, std::string> attack_of;
      for (const ManifestEntry &e : load_manifest(ev_args.manifest))
        attack_of[e.utt_id] = e.attack_id;
      std::set<std::string> attacks;
      for (const ScoreEntry &e : scores.entries) {
        const auto it = attack_of.find(e.utt_id);
        if (it != attack_of.end() && it->second != "-") attacks.insert(it->second);
      }
      for (const std::string &attack : attacks) {
        ScoreSet subset;
        for (const ScoreEntry &e : scores.entries) {
          const auto it = attack_of.find(e.utt_id);
          if (it == attack_of.end()) continue;
          if (e.label == Label::kBonafide || it->second == attack)
            subset.entries.push_back(e);
        }
        const EvalResult ar = evaluate(subset, ev_args.costs);
        std::printf("%s: minDCF %.3f  EER %.2f%%  (%zu spoof)\n", attack.c_str(),
                    ar.min_dcf, 100.0 * ar.eer, ar.n_spoof);
      }
    }
  });

  // ---- experiment -----------------------------------------------------
  auto *exp = app.add_subcommand(
      "experiment", "run the Native-CM / Combined-CM grid over features x classifiers");
  struct {
    std::string corpus, out_dir, config;
    bool synth = false;
    std::vector<std::string> features, classifiers;
    std::uint64_t seed = 0;
    bool seed_set = false;
    FeatureFlags feats;
    CostParams costs;
    ExperimentSettings settings;
  } xp_args;
  exp->add_option("--corpus", xp_args.corpus, "existing corpus directory");
  exp->add_flag("--synth", xp_args.synth, "synthesize the corpus first");
  exp->add_option("--out", xp_args.out_dir, "output directory")->required();
  exp->add_option("--config", xp_args.config, "JSON config file");
  exp->add_option("--features", xp_args.features, "subset of mfcc lfcc cqcc");
  exp->add_option("--classifiers", xp_args.classifiers,
                  "subset of gmm gbdt_depthwise gbdt_symmetric");
  auto *seed_opt = exp->add_option("--seed", xp_args.seed, "experiment seed");
  auto *spd_opt = exp->add_option("--speakers-per-domain",
                                  xp_args.settings.corpus.speakers_per_domain,
                                  "corpus speakers per domain (with --synth)");
  auto *ups_opt =
      exp->add_option("--utts-per-speaker", xp_args.settings.corpus.utts_per_speaker,
                      "corpus utterances per speaker (with --synth)");
  auto *cm_opt = exp->add_option("--c_miss", xp_args.costs.c_miss, "miss cost");
  auto *cf_opt = exp->add_option("--c_fa", xp_args.costs.c_fa, "false-alarm cost");
  auto *ps_opt = exp->add_option("--pi_spf", xp_args.costs.pi_spf, "spoof prior");
  // feature overrides share the experiment template
  xp_args.feats.cfg = xp_args.settings.feature_base;
  xp_args.feats.attach(exp, /*with_kind=*/false);
  exp->callback([&] {
    ExperimentSettings &s = xp_args.settings;
    const int corpus_spd = s.corpus.speakers_per_domain;
    const int corpus_ups = s.corpus.utts_per_speaker;
    if (!xp_args.config.empty()) apply_experiment_json(xp_args.config, s);
    // flags set on the command line override the config file
    if (spd_opt->count() > 0) s.corpus.speakers_per_domain = corpus_spd;
    if (ups_opt->count() > 0) s.corpus.utts_per_speaker = corpus_ups;
    if (!xp_args.features.empty()) {
      s.features.clear();
      for (const auto &f : xp_args.features)
        s.features.push_back(feature_kind_from_string(f));
    }
    if (!xp_args.classifiers.empty()) {
      s.classifiers.clear();
      for (const auto &c : xp_args.classifiers)
        s.classifiers.push_back(classifier_from_string(c));
    }
    if (seed_opt->count() > 0) s.seed = xp_args.seed;
    xp_args.feats.apply_set_flags(s.feature_base);
    if (cm_opt->count() > 0) s.costs.c_miss = xp_args.costs.c_miss;
    if (cf_opt->count() > 0) s.costs.c_fa = xp_args.costs.c_fa;
    if (ps_opt->count() > 0) s.costs.pi_spf = xp_args.costs.pi_spf;
    s.synthesize = xp_args.synth;
    if (!xp_args.synth && xp_args.corpus.empty())
      throw CLI::ValidationError("experiment", "need --corpus or --synth");

    const ExperimentGrid grid =
        run_experiment(s, xp_args.corpus, xp_args.out_dir);
    std::printf("%s", render_results_text(grid).c_str());
    std::printf("results: %s\n",
                (fs::path(xp_args.out_dir) / "results.csv").c_str());
    for (const CellResult &c : grid.cells)
      if (!c.ok)
        std::fprintf(stderr, "cell exp%d/%s/%s failed: %s\n", c.experiment,
                     to_string(c.feature), to_string(c.classifier),
                     c.error.c_str());
  });

  // ---- manifest validate ----------------------------------------------
  auto *manifest_cmd = app.add_subcommand("manifest", "manifest utilities");
  manifest_cmd->require_subcommand(1);
  auto *validate_cmd =
      manifest_cmd->add_subcommand("validate", "check protocol invariants");
  struct {
    std::string path;
  } mv_args;
  validate_cmd->add_option("path", mv_args.path, "manifest TSV")->required();
  validate_cmd->callback([&] {
    const Manifest manifest = load_manifest(mv_args.path);
    print_protocol_stats(validate_protocol(manifest));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors are exit code 2
  }
  return exit_code;
}

}  // namespace

int main(int argc, char **argv) {
  try {
    return run_cli(argc, argv);
  } catch (const Error &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
}
