// Copyright 2026 The mutacc Authors.
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

#ifndef MUTACC_MODEL_IO_HPP
#define MUTACC_MODEL_IO_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mutacc/model.hpp"

namespace mutacc {

inline constexpr int kModelFormatVersion = 1;
inline constexpr std::string_view kModelMagicLine = "MUTACC-MODEL";

using Metadata = std::map<std::string, std::string>;

struct ModelFile {
  Model model;
  Metadata metadata;
};

/// Byte layout is documented in docs/model_format.md.
std::vector<std::uint8_t> serialize_model(const Model& model, const Metadata& metadata = {});
ModelFile parse_model(std::span<const std::uint8_t> bytes);

void save_model(const Model& model, const std::filesystem::path& path,
                const Metadata& metadata = {});
ModelFile load_model_file(const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

struct MutableLayer {
  std::size_t layer_idx;
  std::size_t neuron_count;

  bool operator==(const MutableLayer&) const = default;
};

/// Dense and Conv2D layers in model order.
std::vector<MutableLayer> mutable_layers(const Model& model);

}  // namespace mutacc

#endif  // MUTACC_MODEL_IO_HPP
