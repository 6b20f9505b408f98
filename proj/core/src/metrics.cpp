// core/src/metrics.cpp

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

#include "spoofcm/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "spoofcm/error.hpp"
#include "spoofcm/io_util.hpp"

namespace spoofcm {

const char *to_string(Label label) {
  return label == Label::kBonafide ? "bonafide" : "spoof";
}

Label label_from_string(const std::string &s) {
  if (s == "bonafide") return Label::kBonafide;
  if (s == "spoof") return Label::kSpoof;
  throw ParseError("unknown label '" + s + "'");
}

double beta(const CostParams &params) {
  if (params.c_miss <= 0 || params.c_fa <= 0 || params.pi_spf <= 0 ||
      params.pi_spf >= 1)
    throw InvalidConfig("cost params out of range");
  return (params.c_miss * (1.0 - params.pi_spf)) / (params.c_fa * params.pi_spf);
}

namespace {

void check_scores(const ScoreSet &scores, std::size_t *n_bona,
                  std::size_t *n_spoof) {
  std::size_t bona = 0, spoof = 0;
  for (const ScoreEntry &e : scores.entries) {
    if (!std::isfinite(e.score))
      throw InvalidConfig("non-finite score for " + e.utt_id);
    (e.label == Label::kBonafide ? bona : spoof)++;
  }
  if (bona == 0 || spoof == 0)
    throw MissingClass("need at least one bonafide and one spoof entry");
  *n_bona = bona;
  *n_spoof = spoof;
}

}  // namespace

DetCurve det_curve(const ScoreSet &scores) {
  std::size_t n_bona = 0, n_spoof = 0;
  check_scores(scores, &n_bona, &n_spoof);

  std::vector<double> bona, spoof;
  bona.reserve(n_bona);
  spoof.reserve(n_spoof);
  for (const ScoreEntry &e : scores.entries)
    (e.label == Label::kBonafide ? bona : spoof).push_back(e.score);
  std::sort(bona.begin(), bona.end());
  std::sort(spoof.begin(), spoof.end());

  std::vector<double> thresholds;
  thresholds.reserve(bona.size() + spoof.size() + 2);
  thresholds.push_back(-std::numeric_limits<double>::infinity());
  std::merge(bona.begin(), bona.end(), spoof.begin(), spoof.end(),
             std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  thresholds.push_back(std::numeric_limits<double>::infinity());

  DetCurve curve;
  curve.points.reserve(thresholds.size());
  for (double tau : thresholds) {
    // sorted inputs turn the counting into two binary searches
    const auto below_bona = static_cast<double>(
        std::lower_bound(bona.begin(), bona.end(), tau) - bona.begin());
    const auto below_spoof = static_cast<double>(
        std::lower_bound(spoof.begin(), spoof.end(), tau) - spoof.begin());
    curve.points.push_back(
        {tau, below_bona / static_cast<double>(n_bona),
         (static_cast<double>(n_spoof) - below_spoof) / static_cast<double>(n_spoof)});
  }
  return curve;
}

double min_dcf(const ScoreSet &scores, const CostParams &params) {
  const double b = beta(params);
  const DetCurve curve = det_curve(scores);
  double best = std::numeric_limits<double>::infinity();
  for (const DetPoint &p : curve.points)
    best = std::min(best, b * p.p_miss + p.p_fa);
  return best;
}

double eer(const ScoreSet &scores) {
  const DetCurve curve = det_curve(scores);
  const auto &pts = curve.points;
  // p_miss - p_fa rises from -1 to +1 along the curve; find the crossing.
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double diff = pts[i].p_miss - pts[i].p_fa;
    if (diff < 0) continue;
    if (diff == 0 || i == 0) return pts[i].p_miss;
    const DetPoint &a = pts[i - 1];
    const DetPoint &b = pts[i];
    const double denom = (b.p_miss - a.p_miss) - (b.p_fa - a.p_fa);
    if (denom <= 0) return 0.5 * (b.p_miss + b.p_fa);  // degenerate segment
    const double t = (a.p_fa - a.p_miss) / denom;
    return a.p_miss + t * (b.p_miss - a.p_miss);
  }
  return pts.back().p_miss;  // unreachable for valid curves
}

EvalResult evaluate(const ScoreSet &scores, const CostParams &params) {
  EvalResult r;
  check_scores(scores, &r.n_bonafide, &r.n_spoof);
  r.min_dcf = min_dcf(scores, params);
  r.eer = eer(scores);
  return r;
}

void save_score_file(const std::string &path, const ScoreSet &scores) {
  std::string out;
  for (const ScoreEntry &e : scores.entries) {
    out += e.utt_id;
    out += '\t';
    out += format_double(e.score);
    out += '\t';
    out += to_string(e.label);
    out += '\n';
  }
  write_file(path, out);
}

ScoreSet load_score_file(const std::string &path) {
  const std::string bytes = read_file(path);
  ScoreSet scores;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t end = bytes.find('\n', pos);
    if (end == std::string::npos) end = bytes.size();
    std::string line = bytes.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string::npos ? std::string::npos
                                                   : line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected utt_id<TAB>score<TAB>label");
    ScoreEntry e;
    e.utt_id = line.substr(0, t1);
    const char *first = line.data() + t1 + 1;
    const char *last = line.data() + t2;
    auto [p, ec] = std::from_chars(first, last, e.score);
    if (ec != std::errc() || p != last)
      throw ParseError(path + ":" + std::to_string(line_no) + ": bad score '" +
                       line.substr(t1 + 1, t2 - t1 - 1) + "'");
    e.label = label_from_string(line.substr(t2 + 1));
    scores.entries.push_back(std::move(e));
  }
  return scores;
}

}  // namespace spoofcm
