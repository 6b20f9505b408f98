// core/src/experiment.cpp

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

#include "spoofcm/experiment.hpp"

#include <cstdio>
#include <filesystem>

#include "spoofcm/error.hpp"
#include "spoofcm/gbdt.hpp"
#include "spoofcm/gmm.hpp"
#include "spoofcm/io_util.hpp"

namespace spoofcm {

namespace fs = std::filesystem;

const char *to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kGmm: return "gmm";
    case ClassifierKind::kGbdtDepthwise: return "gbdt_depthwise";
    case ClassifierKind::kGbdtSymmetric: return "gbdt_symmetric";
  }
  return "?";
}

ClassifierKind classifier_from_string(const std::string &s) {
  if (s == "gmm") return ClassifierKind::kGmm;
  if (s == "gbdt_depthwise") return ClassifierKind::kGbdtDepthwise;
  if (s == "gbdt_symmetric") return ClassifierKind::kGbdtSymmetric;
  throw InvalidConfig("unknown classifier '" + s + "'");
}

ExtractReport extract_to_cache(const Manifest &manifest,
                               const std::string &manifest_dir,
                               const FeatureConfig &cfg,
                               const std::string &cache_dir, bool also_csv) {
  cfg.validate();
  fs::create_directories(cache_dir);
  const std::uint64_t hash = feature_config_hash(cfg);
  ExtractReport report;
  for (const ManifestEntry &e : manifest) {
    const std::string record_path =
        (fs::path(cache_dir) / (e.utt_id + ".feat")).string();
    if (peek_feature_record_hash(record_path) == hash) {
      ++report.skipped;
      continue;
    }
    try {
      AudioClip clip = read_wav((fs::path(manifest_dir) / e.path).string());
      clip.utt_id = e.utt_id;
      FeatureMatrix fm = extract_features(clip, cfg);
      write_feature_record(record_path, fm);
      if (also_csv)
        write_feature_csv(
            (fs::path(cache_dir) / (e.utt_id + ".csv")).string(), fm);
      ++report.written;
    } catch (const std::exception &ex) {
      report.failures.push_back({e.utt_id, ex.what()});
    }
  }
  return report;
}

namespace {

std::string cache_record(const std::string &cache_dir, const std::string &utt) {
  return (fs::path(cache_dir) / (utt + ".feat")).string();
}

// Even deterministic thinning down to at most cap frames.
void append_frames_capped(const FeatureMatrix &fm, std::size_t cap,
                          FrameSet &dst) {
  dst.dim = fm.dim;
  if (cap == 0 || fm.num_frames <= cap) {
    for (std::size_t t = 0; t < fm.num_frames; ++t)
      dst.append({fm.frame(t), fm.dim});
    return;
  }
  const double stride = static_cast<double>(fm.num_frames) / cap;
  for (std::size_t i = 0; i < cap; ++i) {
    const std::size_t t = static_cast<std::size_t>(i * stride);
    dst.append({fm.frame(t), fm.dim});
  }
}

void thin_frame_set(FrameSet &set, std::size_t cap) {
  if (cap == 0 || set.rows <= cap) return;
  FrameSet thinned;
  thinned.dim = set.dim;
  const double stride = static_cast<double>(set.rows) / cap;
  for (std::size_t i = 0; i < cap; ++i) {
    const std::size_t r = static_cast<std::size_t>(i * stride);
    thinned.append({set.row(r), set.dim});
  }
  set = std::move(thinned);
}

}  // namespace

CmModel train_from_cache(const Manifest &manifest, const std::string &cache_dir,
                         const FeatureConfig &cfg, const TrainOptions &opts) {
  cfg.validate();
  if (opts.train_domains.empty())
    throw InvalidConfig("train_domains must be non-empty");
  const std::uint64_t hash = feature_config_hash(cfg);

  if (opts.classifier == ClassifierKind::kGmm) {
    FrameSet bona, spoof;
    for (const ManifestEntry &e : manifest) {
      if (e.split != Split::kTrain || !opts.train_domains.count(e.domain))
        continue;
      const FeatureMatrix fm =
          read_feature_record(cache_record(cache_dir, e.utt_id), hash);
      // per-utterance thinning keeps memory bounded before the global cap
      append_frames_capped(fm, 0, e.label == Label::kBonafide ? bona : spoof);
    }
    if (bona.rows == 0 || spoof.rows == 0)
      throw SingleClass("train split lacks a class");
    thin_frame_set(bona, opts.max_frames_per_class);
    thin_frame_set(spoof, opts.max_frames_per_class);

    GmmFitOptions fit;
    fit.num_components = opts.gmm_components;
    fit.max_iter = opts.gmm_max_iter;
    fit.seed = opts.seed;
    GmmPairCm cm;
    cm.bonafide = gmm_fit_em(bona, fit).model;
    cm.spoof = gmm_fit_em(spoof, fit).model;
    cm.feature_config_hash = hash;
    return cm;
  }

  std::vector<PooledVector> pooled;
  std::vector<int> labels;
  for (const ManifestEntry &e : manifest) {
    if (e.split != Split::kTrain || !opts.train_domains.count(e.domain))
      continue;
    const FeatureMatrix fm =
        read_feature_record(cache_record(cache_dir, e.utt_id), hash);
    pooled.push_back(pool_features(fm));
    labels.push_back(e.label == Label::kBonafide ? 1 : 0);
  }
  GbdtParams params;
  params.num_trees = opts.num_trees;
  params.max_depth = opts.max_depth;
  params.learning_rate = opts.learning_rate;
  params.seed = opts.seed;
  params.preset = opts.classifier == ClassifierKind::kGbdtSymmetric
                      ? GbdtPreset::kSymmetric
                      : GbdtPreset::kDepthwise;
  GbdtFitResult fit = gbdt_fit(pooled, labels, params);
  fit.model.feature_config_hash = hash;
  return fit.model;
}

ScoreSet score_from_cache(const CmModel &model, const Manifest &manifest,
                          const std::string &cache_dir, const FeatureConfig &cfg,
                          Domain domain, Split split) {
  const std::uint64_t hash = feature_config_hash(cfg);
  if (model_feature_hash(model) != hash)
    throw HashMismatch("model was trained with a different feature config");

  ScoreSet scores;
  for (const ManifestEntry &e : manifest) {
    if (e.domain != domain || e.split != split) continue;
    const FeatureMatrix fm =
        read_feature_record(cache_record(cache_dir, e.utt_id), hash);
    double score = 0.0;
    if (const GmmPairCm *gmm = std::get_if<GmmPairCm>(&model)) {
      score = gmm_score_utterance(*gmm, fm);
    } else {
      score = gbdt_score(std::get<GbdtModel>(model), pool_features(fm));
    }
    scores.entries.push_back({e.utt_id, score, e.label});
  }
  return scores;
}

namespace {

std::string cell_stem(const CellResult &cell) {
  return "exp" + std::to_string(cell.experiment) + "_" +
         to_string(cell.feature) + "_" + to_string(cell.classifier);
}

// reproducibility record: which front-end/back-end knobs produced the grid
std::string render_settings_json(const ExperimentSettings &s) {
  const FeatureConfig &f = s.feature_base;
  std::string out = "{\n";
  out += "  \"seed\": " + std::to_string(s.seed) + ",\n";
  out += "  \"features\": [";
  for (std::size_t i = 0; i < s.features.size(); ++i)
    out += std::string(i ? "," : "") + "\"" + to_string(s.features[i]) + "\"";
  out += "],\n  \"classifiers\": [";
  for (std::size_t i = 0; i < s.classifiers.size(); ++i)
    out += std::string(i ? "," : "") + "\"" + to_string(s.classifiers[i]) + "\"";
  out += "],\n";
  out += "  \"cost_params\": {\"c_miss\": " + format_double(s.costs.c_miss) +
         ", \"c_fa\": " + format_double(s.costs.c_fa) +
         ", \"pi_spf\": " + format_double(s.costs.pi_spf) + "},\n";
  out += "  \"front_end\": {\"num_ceps\": " + std::to_string(f.num_ceps) +
         ", \"include_c0\": " + (f.include_c0 ? "true" : "false") +
         ", \"dynamics\": \"" + to_string(f.dynamics) + "\"" +
         ", \"num_filters\": " + std::to_string(f.num_filters) +
         ", \"fft_size\": " + std::to_string(f.fft_size) +
         ", \"frame_ms\": " + format_double(f.frame_ms) +
         ", \"hop_ms\": " + format_double(f.hop_ms) +
         ", \"preemph\": " + format_double(f.preemph) +
         ", \"cqt_bins_per_octave\": " + std::to_string(f.cqt_bins_per_octave) +
         ", \"cqt_octaves\": " + std::to_string(f.cqt_octaves) +
         ", \"cqt_hop_ms\": " + format_double(f.cqt_hop_ms) +
         ", \"resample_period\": " + std::to_string(f.resample_period) + "},\n";
  out += "  \"back_end\": {\"gmm_components\": " +
         std::to_string(s.train_base.gmm_components) +
         ", \"gmm_max_iter\": " + std::to_string(s.train_base.gmm_max_iter) +
         ", \"max_frames_per_class\": " +
         std::to_string(s.train_base.max_frames_per_class) +
         ", \"num_trees\": " + std::to_string(s.train_base.num_trees) +
         ", \"max_depth\": " + std::to_string(s.train_base.max_depth) +
         ", \"learning_rate\": " + format_double(s.train_base.learning_rate) +
         ", \"gmm_utterance_score\": \"mean-frame-llr\"" +
         ", \"tree_input\": \"pooled-mean-std\"},\n";
  out += "  \"corpus\": {\"synthesized\": " + std::string(s.synthesize ? "true" : "false") +
         ", \"speakers_per_domain\": " + std::to_string(s.corpus.speakers_per_domain) +
         ", \"utts_per_speaker\": " + std::to_string(s.corpus.utts_per_speaker) +
         ", \"recipes\": " + std::to_string(s.corpus.recipes.size()) + "}\n";
  out += "}\n";
  return out;
}

}  // namespace

ExperimentGrid run_experiment(const ExperimentSettings &settings,
                              const std::string &corpus_dir,
                              const std::string &out_dir) {
  fs::create_directories(out_dir);
  std::string corpus = corpus_dir;
  Manifest manifest;
  if (settings.synthesize) {
    corpus = (fs::path(out_dir) / "corpus").string();
    CorpusConfig corpus_cfg = settings.corpus;
    corpus_cfg.seed = settings.seed;
    manifest = build_corpus(corpus_cfg, corpus);
  } else {
    manifest = load_manifest((fs::path(corpus) / "manifest.tsv").string());
  }

  ExperimentGrid grid;
  for (FeatureKind feature : settings.features) {
    FeatureConfig cfg = settings.feature_base;
    cfg.kind = feature;
    const std::string cache_dir =
        (fs::path(out_dir) / "cache" / to_string(feature)).string();
    std::optional<std::string> extract_error;
    try {
      const ExtractReport report =
          extract_to_cache(manifest, corpus, cfg, cache_dir);
      if (!report.failures.empty())
        extract_error = std::to_string(report.failures.size()) +
                        " extraction failures, first: " +
                        report.failures.front().second;
    } catch (const std::exception &ex) {
      extract_error = ex.what();
    }

    for (int experiment = 1; experiment <= 2; ++experiment) {
      for (ClassifierKind classifier : settings.classifiers) {
        CellResult cell;
        cell.experiment = experiment;
        cell.feature = feature;
        cell.classifier = classifier;
        if (extract_error) {
          cell.error = *extract_error;
          grid.cells.push_back(cell);
          continue;
        }
        try {
          TrainOptions train = settings.train_base;
          train.classifier = classifier;
          train.seed = settings.seed;
          train.train_domains = experiment == 1
                                    ? std::set<Domain>{Domain::kNative}
                                    : std::set<Domain>{Domain::kNative,
                                                       Domain::kNonnative};
          const CmModel model = train_from_cache(manifest, cache_dir, cfg, train);
          fs::create_directories(fs::path(out_dir) / "models");
          save_model((fs::path(out_dir) / "models" / (cell_stem(cell) + ".spcm"))
                         .string(),
                     model);

          fs::create_directories(fs::path(out_dir) / "scores");
          auto eval_one = [&](Domain domain, Split split, EvalResult *dst) {
            const ScoreSet scores =
                score_from_cache(model, manifest, cache_dir, cfg, domain, split);
            save_score_file(
                (fs::path(out_dir) / "scores" /
                 (cell_stem(cell) + "_" + to_string(domain) + "_" +
                  to_string(split) + ".tsv"))
                    .string(),
                scores);
            *dst = evaluate(scores, settings.costs);
          };
          eval_one(Domain::kNative, Split::kEval, &cell.eval_native);
          eval_one(Domain::kNonnative, Split::kEval, &cell.eval_nonnative);
          // dev numbers are logged only; an unpopulated dev split is not an
          // error for the cell
          auto eval_dev = [&](Domain domain, EvalResult *dst, bool *ok) {
            try {
              eval_one(domain, Split::kDev, dst);
              *ok = true;
            } catch (const MissingClass &) {
              *ok = false;
            }
          };
          eval_dev(Domain::kNative, &cell.dev_native, &cell.dev_native_ok);
          eval_dev(Domain::kNonnative, &cell.dev_nonnative,
                   &cell.dev_nonnative_ok);
          cell.ok = true;
        } catch (const std::exception &ex) {
          cell.error = ex.what();
        }
        grid.cells.push_back(cell);
      }
    }
  }

  // reorder rows as experiment x feature x classifier for reporting
  ExperimentGrid ordered;
  for (int experiment = 1; experiment <= 2; ++experiment)
    for (FeatureKind feature : settings.features)
      for (ClassifierKind classifier : settings.classifiers)
        for (const CellResult &cell : grid.cells)
          if (cell.experiment == experiment && cell.feature == feature &&
              cell.classifier == classifier)
            ordered.cells.push_back(cell);

  write_file((fs::path(out_dir) / "results.csv").string(),
             render_results_csv(ordered));
  write_file((fs::path(out_dir) / "results.txt").string(),
             render_results_text(ordered));
  write_file((fs::path(out_dir) / "dev_results.csv").string(),
             render_dev_csv(ordered));
  write_file((fs::path(out_dir) / "settings.json").string(),
             render_settings_json(settings));
  return ordered;
}

std::string render_results_csv(const ExperimentGrid &grid) {
  std::string out =
      "exp,feature,classifier,nonnative_min_dcf,nonnative_eer,native_min_dcf,"
      "native_eer\n";
  for (const CellResult &c : grid.cells) {
    out += std::to_string(c.experiment);
    out += ',';
    out += to_string(c.feature);
    out += ',';
    out += to_string(c.classifier);
    if (c.ok) {
      out += ',' + format_double(c.eval_nonnative.min_dcf);
      out += ',' + format_double(c.eval_nonnative.eer);
      out += ',' + format_double(c.eval_native.min_dcf);
      out += ',' + format_double(c.eval_native.eer);
    } else {
      out += ",ERR,ERR,ERR,ERR";
    }
    out += '\n';
  }
  return out;
}

std::string render_dev_csv(const ExperimentGrid &grid) {
  std::string out =
      "exp,feature,classifier,nonnative_min_dcf,nonnative_eer,native_min_dcf,"
      "native_eer\n";
  for (const CellResult &c : grid.cells) {
    out += std::to_string(c.experiment);
    out += ',';
    out += to_string(c.feature);
    out += ',';
    out += to_string(c.classifier);
    if (!c.ok) {
      out += ",ERR,ERR,ERR,ERR\n";
      continue;
    }
    auto dev_pair = [](bool ok, const EvalResult &r) {
      return ok ? "," + format_double(r.min_dcf) + "," + format_double(r.eer)
                : std::string(",NA,NA");
    };
    out += dev_pair(c.dev_nonnative_ok, c.dev_nonnative);
    out += dev_pair(c.dev_native_ok, c.dev_native);
    out += '\n';
  }
  return out;
}

std::string render_results_text(const ExperimentGrid &grid) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-4s %-6s %-15s | %21s | %21s\n", "Exp.",
                "Feat.", "Classifier", "Non-native", "Native");
  out += line;
  std::snprintf(line, sizeof(line), "%-4s %-6s %-15s | %-8s %-12s | %-8s %-12s\n",
                "", "", "", "minDCF", "EER (%)", "minDCF", "EER (%)");
  out += line;
  out += std::string(75, '-') + "\n";
  for (const CellResult &c : grid.cells) {
    if (c.ok) {
      std::snprintf(line, sizeof(line),
                    "%-4d %-6s %-15s | %-8.3f %-12.2f | %-8.3f %-12.2f\n",
                    c.experiment, to_string(c.feature), to_string(c.classifier),
                    c.eval_nonnative.min_dcf, 100.0 * c.eval_nonnative.eer,
                    c.eval_native.min_dcf, 100.0 * c.eval_native.eer);
    } else {
      std::snprintf(line, sizeof(line), "%-4d %-6s %-15s | %-8s %-12s | %-8s %-12s\n",
                    c.experiment, to_string(c.feature), to_string(c.classifier),
                    "ERR", "ERR", "ERR", "ERR");
    }
    out += line;
  }
  return out;
}

}  // namespace spoofcm
