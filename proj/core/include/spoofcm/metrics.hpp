// core/include/spoofcm/metrics.hpp

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

#ifndef SPOOFCM_METRICS_HPP_
#define SPOOFCM_METRICS_HPP_

#include <string>
#include <vector>

namespace spoofcm {

enum class Label { kBonafide, kSpoof };

const char *to_string(Label label);
Label label_from_string(const std::string &s);

/// One detection trial: higher score means more bonafide-like.
struct ScoreEntry {
  std::string utt_id;
  double score = 0.0;
  Label label = Label::kBonafide;
};

struct ScoreSet {
  std::vector<ScoreEntry> entries;
};

/// Detection costs. The reference operating point is C_miss = 1, C_fa = 10,
/// pi_spf = 0.05, which puts beta at exactly 1.9.
struct CostParams {
  double c_miss = 1.0;
  double c_fa = 10.0;
  double pi_spf = 0.05;
};

/// beta = C_miss (1 - pi_spf) / (C_fa pi_spf).
double beta(const CostParams &params);

/// One operating point per threshold. The decision rule is
/// "accept as bonafide iff score >= tau", so
///   p_miss = fraction of bonafide scores <  tau   (non-decreasing in tau)
///   p_fa   = fraction of spoof scores    >= tau   (non-increasing in tau)
struct DetPoint {
  double threshold;
  double p_miss;
  double p_fa;
};

struct DetCurve {
  std::vector<DetPoint> points;  // sorted by ascending threshold
};

/// Sweeps every distinct score plus -inf / +inf sentinels (the accept-all
/// and reject-all endpoints). Throws MissingClass unless both labels occur.
DetCurve det_curve(const ScoreSet &scores);

/// min over thresholds of beta * p_miss + p_fa. The accept-all endpoint
/// pins the result at or below 1.
double min_dcf(const ScoreSet &scores, const CostParams &params);

/// Equal error rate in [0, 1]: the det curve is walked to the bracketing
/// pair of points around p_miss = p_fa and linearly interpolated.
double eer(const ScoreSet &scores);

struct EvalResult {
  double min_dcf = 0.0;
  double eer = 0.0;
  std::size_t n_bonafide = 0;
  std::size_t n_spoof = 0;
};

EvalResult evaluate(const ScoreSet &scores, const CostParams &params);

/// Score file: one `utt_id<TAB>score<TAB>label` line per entry, LF endings,
/// scores printed with round-trip precision, '#' lines ignored on read.
void save_score_file(const std::string &path, const ScoreSet &scores);
ScoreSet load_score_file(const std::string &path);

}  // namespace spoofcm

#endif  // SPOOFCM_METRICS_HPP_
