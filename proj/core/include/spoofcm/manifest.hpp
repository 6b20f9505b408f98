// core/include/spoofcm/manifest.hpp

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

#ifndef SPOOFCM_MANIFEST_HPP_
#define SPOOFCM_MANIFEST_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spoofcm/metrics.hpp"  // Label

namespace spoofcm {

enum class Sex { kMale, kFemale, kUnknown };
enum class Domain { kNative, kNonnative };
enum class Split { kTrain, kDev, kEval };

const char *to_string(Sex s);
const char *to_string(Domain d);
const char *to_string(Split s);
Sex sex_from_string(const std::string &s);
Domain domain_from_string(const std::string &s);
Split split_from_string(const std::string &s);

/// One dataset row. Bonafide entries carry attack_id "-"; spoof entries
/// keep the source speaker's id so a speaker's bonafide and spoofed
/// utterances always land in the same split.
struct ManifestEntry {
  std::string utt_id;
  std::string path;  // relative to the manifest's directory
  std::string speaker_id;
  Sex sex = Sex::kUnknown;
  Domain domain = Domain::kNative;
  Label label = Label::kBonafide;
  std::string attack_id = "-";
  Split split = Split::kTrain;
};

using Manifest = std::vector<ManifestEntry>;

/// Per (domain, split) protocol statistics.
struct SplitStats {
  std::size_t n_bonafide = 0;
  std::size_t n_spoof = 0;
  std::size_t speakers_male = 0;
  std::size_t speakers_female = 0;
  std::size_t speakers_unknown = 0;
  std::size_t distinct_attacks = 0;

  double spoof_ratio() const {
    return n_bonafide ? static_cast<double>(n_spoof) / n_bonafide : 0.0;
  }
};

struct ProtocolStats {
  std::map<std::pair<Domain, Split>, SplitStats> per_cell;
  std::vector<std::string> warnings;  // ratio deviations, non-fatal
};

/// UTF-8 TSV with a required header line:
/// utt_id path speaker_id sex domain label attack_id split.
/// Throws ParseError (with line numbers) or DuplicateUtterance.
Manifest load_manifest(const std::string &path);
void save_manifest(const std::string &path, const Manifest &entries);

/// Computes stats; throws SpeakerOverlap if any speaker appears in more
/// than one split within a domain. Deviations beyond 10% from the 6:1
/// spoof:bonafide ratio are reported as warnings, not errors.
ProtocolStats validate_protocol(const Manifest &entries);

/// Greedy speaker-level 70-10-20 assignment, per domain: speakers are
/// shuffled with the seeded PRNG and each goes to the split with the
/// largest remaining utterance-count deficit (ties in train/dev/eval
/// order). All of a speaker's utterances travel together.
/// Throws InsufficientSpeakers below 3 distinct speakers in a domain.
Manifest make_splits(const Manifest &entries,
                     const std::array<double, 3> &ratios, std::uint64_t seed);

}  // namespace spoofcm

#endif  // SPOOFCM_MANIFEST_HPP_
