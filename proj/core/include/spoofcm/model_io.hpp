// core/include/spoofcm/model_io.hpp

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

#ifndef SPOOFCM_MODEL_IO_HPP_
#define SPOOFCM_MODEL_IO_HPP_

#include <string>
#include <variant>

#include "spoofcm/gbdt.hpp"
#include "spoofcm/gmm.hpp"

namespace spoofcm {

/// Model files: "SPCM" magic, version u16, model-kind u8, feature config
/// hash u64, kind-specific payload, CRC32 trailer over everything before it.
/// Little-endian; doubles stored as raw IEEE-754 bits so scores round-trip
/// bitwise.
using CmModel = std::variant<GmmPairCm, GbdtModel>;

enum class ModelKind : std::uint8_t { kGmmPair = 1, kGbdt = 2 };

void save_model(const std::string &path, const GmmPairCm &model);
void save_model(const std::string &path, const GbdtModel &model);
void save_model(const std::string &path, const CmModel &model);

/// Throws CorruptModel (bad magic, bad CRC, truncation) or VersionMismatch.
/// GMM pairs come back finalized and ready to score.
CmModel load_model(const std::string &path);

ModelKind model_kind(const CmModel &model);
std::uint64_t model_feature_hash(const CmModel &model);

}  // namespace spoofcm

#endif  // SPOOFCM_MODEL_IO_HPP_
