// Copyright 2026 The namedis Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "namedis/model.hpp"

namespace namedis {
namespace {

constexpr std::array<char, 4> kMagic{'N', 'D', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

void put_u32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::ifstream& in, const std::filesystem::path& file) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw std::runtime_error(file.string() + ": truncated checkpoint");
  }
  return v;
}

}  // namespace

void save_checkpoint(const ModelParams& params, int heads, const std::filesystem::path& file) {
  const auto tensors = params.tensors();
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error(tmp.string() + ": cannot write");
    out.write(kMagic.data(), kMagic.size());
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(heads));
    put_u32(out, static_cast<std::uint32_t>(tensors.size()));
    for (const auto* t : tensors) {
      put_u32(out, static_cast<std::uint32_t>(t->value.rows()));
      put_u32(out, static_cast<std::uint32_t>(t->value.cols()));
    }
    for (const auto* t : tensors) {
      for (Eigen::Index r = 0; r < t->value.rows(); ++r) {
        for (Eigen::Index c = 0; c < t->value.cols(); ++c) {
          const auto f = static_cast<float>(t->value(r, c));
          out.write(reinterpret_cast<const char*>(&f), sizeof f);
        }
      }
    }
  }
  std::filesystem::rename(tmp, file);
}

Checkpoint load_checkpoint(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error(file.string() + ": cannot open");
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error(file.string() + ": not a checkpoint");
  }
  if (get_u32(in, file) != kVersion) throw std::runtime_error(file.string() + ": unsupported version");
  const auto heads = static_cast<int>(get_u32(in, file));
  const auto count = get_u32(in, file);
  if (heads < 1 || count != 3u * static_cast<std::uint32_t>(heads) + 5u) {
    throw std::runtime_error(file.string() + ": shape table does not match a two-layer encoder");
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> shapes(count);
  for (auto& [r, c] : shapes) {
    r = get_u32(in, file);
    c = get_u32(in, file);
  }

  Checkpoint ck;
  ck.encoder.heads = heads;
  ck.encoder.input_dim = static_cast<int>(shapes[0].second);
  ck.encoder.hidden1 = heads * static_cast<int>(shapes[0].first);
  ck.encoder.hidden2 = static_cast<int>(shapes[3 * heads].first);
  const GatEncoder encoder(ck.encoder);
  const auto expected = encoder.parameter_shapes();
  for (std::size_t k = 0; k < expected.size(); ++k) {
    if (shapes[k].first != expected[k].rows || shapes[k].second != expected[k].cols) {
      throw std::runtime_error(file.string() + ": tensor " + expected[k].name + " has wrong shape");
    }
    ck.params.encoder.emplace_back(expected[k].name, expected[k].rows, expected[k].cols);
  }
  const auto m = shapes[count - 2].first;
  if (shapes[count - 2].second != static_cast<std::uint32_t>(ck.encoder.hidden2) ||
      shapes[count - 1].first != 1 || shapes[count - 1].second != m) {
    throw std::runtime_error(file.string() + ": cluster head has wrong shape");
  }
  ck.params.cluster_weight = Tensor("cluster.weight", m, ck.encoder.hidden2);
  ck.params.cluster_bias = Tensor("cluster.bias", 1, m);

  for (auto* t : ck.params.tensors()) {
    for (Eigen::Index r = 0; r < t->value.rows(); ++r) {
      for (Eigen::Index c = 0; c < t->value.cols(); ++c) {
        float f;
        if (!in.read(reinterpret_cast<char*>(&f), sizeof f)) {
          throw std::runtime_error(file.string() + ": truncated tensor data");
        }
        t->value(r, c) = f;
      }
    }
  }
  return ck;
}

}  // namespace namedis
