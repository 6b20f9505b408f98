// core/src/model_io.cpp

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

#include "spoofcm/model_io.hpp"

#include "spoofcm/error.hpp"
#include "spoofcm/io_util.hpp"

namespace spoofcm {

namespace {

constexpr char kMagic[4] = {'S', 'P', 'C', 'M'};
constexpr std::uint16_t kVersion = 1;

void append_gmm(std::string &out, const GmmModel &m) {
  put_u32(out, static_cast<std::uint32_t>(m.dim));
  put_u32(out, static_cast<std::uint32_t>(m.num_components()));
  for (double w : m.weights) put_f64(out, w);
  for (double v : m.means) put_f64(out, v);
  for (double v : m.covariances) put_f64(out, v);
}

GmmModel parse_gmm(ByteReader &r) {
  GmmModel m;
  m.dim = static_cast<int>(r.u32());
  const std::uint32_t k = r.u32();
  if (m.dim <= 0 || k == 0 || m.dim > 100000 || k > 100000)
    throw CorruptModel("implausible GMM shape");
  const std::size_t d = static_cast<std::size_t>(m.dim);
  m.weights.resize(k);
  for (auto &w : m.weights) w = r.f64();
  m.means.resize(k * d);
  for (auto &v : m.means) v = r.f64();
  m.covariances.resize(k * d * d);
  for (auto &v : m.covariances) v = r.f64();
  return m;
}

std::string frame_payload(ModelKind kind, std::uint64_t feature_hash,
                          const std::string &payload) {
  std::string out;
  out.append(kMagic, 4);
  put_u16(out, kVersion);
  put_u8(out, static_cast<std::uint8_t>(kind));
  put_u64(out, feature_hash);
  out += payload;
  put_u32(out, crc32(out));
  return out;
}

}  // namespace

void save_model(const std::string &path, const GmmPairCm &model) {
  std::string payload;
  append_gmm(payload, model.bonafide);
  append_gmm(payload, model.spoof);
  write_file(path, frame_payload(ModelKind::kGmmPair,
                                 model.feature_config_hash, payload));
}

void save_model(const std::string &path, const GbdtModel &model) {
  std::string payload;
  put_u32(payload, static_cast<std::uint32_t>(model.dim));
  put_f64(payload, model.learning_rate);
  put_f64(payload, model.base_score);
  put_u8(payload, model.preset == GbdtPreset::kSymmetric ? 1 : 0);
  put_u32(payload, static_cast<std::uint32_t>(model.trees.size()));
  for (const RegressionTree &tree : model.trees) {
    put_u32(payload, static_cast<std::uint32_t>(tree.nodes.size()));
    for (const TreeNode &n : tree.nodes) {
      put_u32(payload, static_cast<std::uint32_t>(n.feature));
      put_f64(payload, n.threshold);
      put_u32(payload, static_cast<std::uint32_t>(n.left));
      put_u32(payload, static_cast<std::uint32_t>(n.right));
      put_f64(payload, n.leaf_value);
    }
  }
  write_file(path,
             frame_payload(ModelKind::kGbdt, model.feature_config_hash, payload));
}

void save_model(const std::string &path, const CmModel &model) {
  std::visit([&](const auto &m) { save_model(path, m); }, model);
}

CmModel load_model(const std::string &path) {
  const std::string bytes = read_file(path);
  if (bytes.size() < 19 || bytes.compare(0, 4, "SPCM") != 0)
    throw CorruptModel("bad magic: " + path);
  // version is checked before the CRC so a bumped version is reported as
  // such rather than as corruption
  std::uint16_t version;
  std::memcpy(&version, bytes.data() + 4, 2);
  if (version != kVersion)
    throw VersionMismatch("model version " + std::to_string(version) +
                          ", expected " + std::to_string(kVersion));
  std::uint32_t stored_crc;
  std::memcpy(&stored_crc, bytes.data() + bytes.size() - 4, 4);
  if (crc32(bytes.data(), bytes.size() - 4) != stored_crc)
    throw CorruptModel("checksum failure: " + path);

  try {
    ByteReader r(bytes.data() + 6, bytes.size() - 10);
    const auto kind = static_cast<ModelKind>(r.u8());
    const std::uint64_t feature_hash = r.u64();
    if (kind == ModelKind::kGmmPair) {
      GmmPairCm cm;
      cm.feature_config_hash = feature_hash;
      cm.bonafide = parse_gmm(r);
      cm.spoof = parse_gmm(r);
      if (r.remaining() != 0) throw CorruptModel("trailing bytes: " + path);
      cm.bonafide.finalize();
      cm.spoof.finalize();
      return cm;
    }
    if (kind == ModelKind::kGbdt) {
      GbdtModel m;
      m.feature_config_hash = feature_hash;
      m.dim = r.u32();
      m.learning_rate = r.f64();
      m.base_score = r.f64();
      m.preset = r.u8() ? GbdtPreset::kSymmetric : GbdtPreset::kDepthwise;
      const std::uint32_t num_trees = r.u32();
      if (num_trees > 1000000) throw CorruptModel("implausible tree count");
      m.trees.resize(num_trees);
      for (RegressionTree &tree : m.trees) {
        const std::uint32_t num_nodes = r.u32();
        if (num_nodes > 10000000) throw CorruptModel("implausible node count");
        tree.nodes.resize(num_nodes);
        for (TreeNode &n : tree.nodes) {
          n.feature = static_cast<int>(r.u32());
          n.threshold = r.f64();
          n.left = static_cast<int>(r.u32());
          n.right = static_cast<int>(r.u32());
          n.leaf_value = r.f64();
          if (!n.is_leaf() &&
              (n.feature < 0 || n.feature >= static_cast<int>(m.dim) ||
               n.left >= static_cast<int>(num_nodes) ||
               n.right >= static_cast<int>(num_nodes)))
            throw CorruptModel("node references out of range: " + path);
        }
      }
      if (r.remaining() != 0) throw CorruptModel("trailing bytes: " + path);
      return m;
    }
    throw CorruptModel("unknown model kind");
  } catch (const std::out_of_range &) {
    throw CorruptModel("truncated model: " + path);
  }
}

ModelKind model_kind(const CmModel &model) {
  return std::holds_alternative<GmmPairCm>(model) ? ModelKind::kGmmPair
                                                  : ModelKind::kGbdt;
}

std::uint64_t model_feature_hash(const CmModel &model) {
  return std::visit([](const auto &m) { return m.feature_config_hash; }, model);
}

}  // namespace spoofcm
