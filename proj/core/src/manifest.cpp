// core/src/manifest.cpp

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

#include "spoofcm/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "spoofcm/error.hpp"
#include "spoofcm/io_util.hpp"
#include "spoofcm/rng.hpp"

namespace spoofcm {

const char *to_string(Sex s) {
  switch (s) {
    case Sex::kMale: return "male";
    case Sex::kFemale: return "female";
    case Sex::kUnknown: return "unknown";
  }
  return "?";
}
const char *to_string(Domain d) {
  return d == Domain::kNative ? "native" : "nonnative";
}
const char *to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kEval: return "eval";
  }
  return "?";
}

Sex sex_from_string(const std::string &s) {
  if (s == "male") return Sex::kMale;
  if (s == "female") return Sex::kFemale;
  if (s == "unknown") return Sex::kUnknown;
  throw ParseError("unknown sex '" + s + "'");
}
Domain domain_from_string(const std::string &s) {
  if (s == "native") return Domain::kNative;
  if (s == "nonnative") return Domain::kNonnative;
  throw ParseError("unknown domain '" + s + "'");
}
Split split_from_string(const std::string &s) {
  if (s == "train") return Split::kTrain;
  if (s == "dev") return Split::kDev;
  if (s == "eval") return Split::kEval;
  throw ParseError("unknown split '" + s + "'");
}

namespace {

constexpr const char *kHeader =
    "utt_id\tpath\tspeaker_id\tsex\tdomain\tlabel\tattack_id\tsplit";

std::vector<std::string> split_tabs(const std::string &line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t tab = line.find('\t', pos);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  return fields;
}

}  // namespace

Manifest load_manifest(const std::string &path) {
  const std::string bytes = read_file(path);
  Manifest entries;
  std::unordered_set<std::string> seen_ids;

  std::size_t pos = 0, line_no = 0;
  bool header_seen = false;
  while (pos < bytes.size()) {
    std::size_t end = bytes.find('\n', pos);
    if (end == std::string::npos) end = bytes.size();
    std::string line = bytes.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (!header_seen) {
      if (line != kHeader)
        throw ParseError(path + ":1: expected header '" + kHeader + "'");
      header_seen = true;
      continue;
    }

    const std::vector<std::string> f = split_tabs(line);
    if (f.size() != 8)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 8 columns, got " +
                       std::to_string(f.size()));
    ManifestEntry e;
    try {
      e.utt_id = f[0];
      e.path = f[1];
      e.speaker_id = f[2];
      e.sex = sex_from_string(f[3]);
      e.domain = domain_from_string(f[4]);
      e.label = label_from_string(f[5]);
      e.attack_id = f[6];
      e.split = split_from_string(f[7]);
    } catch (const ParseError &err) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + err.what());
    }
    if (e.utt_id.empty() || e.speaker_id.empty())
      throw ParseError(path + ":" + std::to_string(line_no) + ": empty id field");
    const bool is_bona = e.label == Label::kBonafide;
    if (is_bona != (e.attack_id == "-"))
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": label '" + std::string(to_string(e.label)) +
                       "' inconsistent with attack_id '" + e.attack_id + "'");
    if (!seen_ids.insert(e.utt_id).second)
      throw DuplicateUtterance(e.utt_id + " at " + path + ":" +
                               std::to_string(line_no));
    entries.push_back(std::move(e));
  }
  if (!header_seen) throw ParseError(path + ": missing header line");
  return entries;
}

void save_manifest(const std::string &path, const Manifest &entries) {
  std::string out = kHeader;
  out += '\n';
  for (const ManifestEntry &e : entries) {
    out += e.utt_id;
    out += '\t';
    out += e.path;
    out += '\t';
    out += e.speaker_id;
    out += '\t';
    out += to_string(e.sex);
    out += '\t';
    out += to_string(e.domain);
    out += '\t';
    out += to_string(e.label);
    out += '\t';
    out += e.attack_id;
    out += '\t';
    out += to_string(e.split);
    out += '\n';
  }
  write_file(path, out);
}

ProtocolStats validate_protocol(const Manifest &entries) {
  if (entries.empty()) throw InvalidConfig("empty manifest");

  // speaker -> set of splits, per domain
  std::map<std::pair<Domain, std::string>, std::set<Split>> speaker_splits;
  std::map<std::pair<Domain, Split>, std::set<std::string>> attacks;
  std::map<std::tuple<Domain, Split, Sex>, std::set<std::string>> speakers;

  ProtocolStats stats;
  for (const ManifestEntry &e : entries) {
    SplitStats &cell = stats.per_cell[{e.domain, e.split}];
    (e.label == Label::kBonafide ? cell.n_bonafide : cell.n_spoof)++;
    speaker_splits[{e.domain, e.speaker_id}].insert(e.split);
    if (e.label == Label::kSpoof) attacks[{e.domain, e.split}].insert(e.attack_id);
    speakers[{e.domain, e.split, e.sex}].insert(e.speaker_id);
  }

  std::string overlap_report;
  for (const auto &[key, splits] : speaker_splits) {
    if (splits.size() <= 1) continue;
    overlap_report += " " + key.second + " (" + to_string(key.first) + ":";
    for (Split s : splits) overlap_report += std::string(" ") + to_string(s);
    overlap_report += ")";
  }
  if (!overlap_report.empty())
    throw SpeakerOverlap("speakers in multiple splits:" + overlap_report);

  for (auto &[key, cell] : stats.per_cell) {
    cell.distinct_attacks = attacks[{key.first, key.second}].size();
    cell.speakers_male = speakers[{key.first, key.second, Sex::kMale}].size();
    cell.speakers_female = speakers[{key.first, key.second, Sex::kFemale}].size();
    cell.speakers_unknown =
        speakers[{key.first, key.second, Sex::kUnknown}].size();
    if (cell.n_bonafide == 0) continue;
    const double ratio = cell.spoof_ratio();
    if (std::abs(ratio - 6.0) > 0.6) {
      std::ostringstream os;
      os << to_string(key.first) << "/" << to_string(key.second)
         << ": spoof:bonafide ratio " << ratio << " deviates from 6:1 by more than 10%";
      stats.warnings.push_back(os.str());
    }
  }
  return stats;
}

Manifest make_splits(const Manifest &entries,
                     const std::array<double, 3> &ratios, std::uint64_t seed) {
  if (entries.empty()) throw InvalidConfig("empty manifest");
  const double ratio_sum = ratios[0] + ratios[1] + ratios[2];
  if (ratio_sum <= 0) throw InvalidConfig("split ratios must sum > 0");

  // group utterance indices by (domain, speaker), keeping first-seen order
  std::map<Domain, std::vector<std::pair<std::string, std::vector<std::size_t>>>>
      domains;
  std::map<std::pair<Domain, std::string>, std::size_t> speaker_pos;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const ManifestEntry &e = entries[i];
    auto key = std::make_pair(e.domain, e.speaker_id);
    auto it = speaker_pos.find(key);
    if (it == speaker_pos.end()) {
      speaker_pos[key] = domains[e.domain].size();
      domains[e.domain].push_back({e.speaker_id, {i}});
    } else {
      domains[e.domain][it->second].second.push_back(i);
    }
  }

  Manifest out = entries;
  for (auto &[domain, speakers] : domains) {
    if (speakers.size() < 3)
      throw InsufficientSpeakers(std::string(to_string(domain)) + " domain has " +
                                 std::to_string(speakers.size()) +
                                 " speakers, need at least 3");
    std::size_t domain_utts = 0;
    for (const auto &s : speakers) domain_utts += s.second.size();

    // Fisher-Yates with the seeded stream; one stream per domain
    Rng rng = Rng::stream(seed, std::string("splits:") + to_string(domain));
    for (std::size_t i = speakers.size(); i > 1; --i)
      std::swap(speakers[i - 1], speakers[rng.below(i)]);

    std::array<double, 3> deficit{};
    for (int s = 0; s < 3; ++s)
      deficit[static_cast<std::size_t>(s)] =
          domain_utts * ratios[static_cast<std::size_t>(s)] / ratio_sum;

    for (const auto &[speaker_id, utt_indices] : speakers) {
      int pick = 0;
      for (int s = 1; s < 3; ++s)
        if (deficit[static_cast<std::size_t>(s)] >
            deficit[static_cast<std::size_t>(pick)])
          pick = s;
      deficit[static_cast<std::size_t>(pick)] -=
          static_cast<double>(utt_indices.size());
      const Split split = static_cast<Split>(pick);
      for (std::size_t idx : utt_indices) out[idx].split = split;
    }
  }
  return out;
}

}  // namespace spoofcm
