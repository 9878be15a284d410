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

#include "mutacc/model_io.hpp"

#include <bit>
#include <cstring>
#include <variant>

#include <json.hpp>

#include "mutacc/dataset.hpp"
#include "mutacc/error.hpp"

namespace mutacc {
namespace {

using nlohmann::json;

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

void put_f32le(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::uint8_t>(bits >> shift));
  }
}

void put_matrix(std::vector<std::uint8_t>& out, const Eigen::MatrixXd& w) {
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    for (Eigen::Index c = 0; c < w.cols(); ++c) put_f32le(out, w(r, c));
  }
}

class PayloadReader {
 public:
  explicit PayloadReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  double f32le() {
    if (bytes_.size() - pos_ < 4) {
      throw Error(ErrorCode::kParse, "weight payload is truncated");
    }
    std::uint32_t bits = 0;
    for (int i = 0; i < 4; ++i) {
      bits |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
    }
    return static_cast<double>(std::bit_cast<float>(bits));
  }

  Eigen::MatrixXd matrix(std::size_t rows, std::size_t cols) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = f32le();
    }
    return m;
  }

  Eigen::VectorXd vector(std::size_t n) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = f32le();
    return v;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

json describe(const LayerSpec& layer) {
  if (const auto* d = std::get_if<Dense>(&layer)) {
    return {{"kind", "dense"},
            {"in_dim", d->in_dim()},
            {"out_dim", d->out_dim()},
            {"weights", d->weights.size()},
            {"bias", d->bias.size()}};
  }
  if (const auto* c = std::get_if<Conv2D>(&layer)) {
    return {{"kind", "conv2d"},          {"in_channels", c->in_channels},
            {"out_channels", c->out_channels()}, {"kernel_h", c->kernel_h},
            {"kernel_w", c->kernel_w},    {"stride", c->stride},
            {"padding", c->padding},      {"weights", c->weights.size()},
            {"bias", c->bias.size()}};
  }
  if (const auto* p = std::get_if<Pool>(&layer)) {
    return {{"kind", "pool"},
            {"pool", std::string(to_string(p->kind))},
            {"window", p->window},
            {"stride", p->stride}};
  }
  if (std::holds_alternative<Flatten>(layer)) return {{"kind", "flatten"}};
  const auto& a = std::get<Activation>(layer);
  return {{"kind", "activation"}, {"function", std::string(to_string(a.kind))}};
}

std::size_t field(const json& j, const char* key, std::size_t index) {
  if (!j.contains(key) || !j.at(key).is_number_unsigned()) {
    throw Error(ErrorCode::kParse, "layer " + std::to_string(index) + ": missing or invalid '" +
                                       key + "'");
  }
  return j.at(key).get<std::size_t>();
}

[[noreturn]] void dimension_error(std::size_t index, std::string_view kind,
                                  std::string_view array, std::size_t declared,
                                  std::size_t expected) {
  throw Error(ErrorCode::kDimensionMismatch,
              "layer " + std::to_string(index) + " (" + std::string(kind) + "): " +
                  std::string(array) + " array has " + std::to_string(declared) +
                  " values, expected " + std::to_string(expected));
}

LayerSpec read_layer(const json& j, std::size_t index, PayloadReader& payload) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw Error(ErrorCode::kParse, "layer " + std::to_string(index) + ": missing 'kind'");
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "dense") {
    const std::size_t in = field(j, "in_dim", index);
    const std::size_t out = field(j, "out_dim", index);
    const std::size_t nw = field(j, "weights", index);
    const std::size_t nb = field(j, "bias", index);
    if (nw != in * out) dimension_error(index, kind, "weight", nw, in * out);
    if (nb != out) dimension_error(index, kind, "bias", nb, out);
    Dense d;
    d.weights = payload.matrix(out, in);
    d.bias = payload.vector(out);
    return d;
  }
  if (kind == "conv2d") {
    Conv2D c;
    c.in_channels = field(j, "in_channels", index);
    const std::size_t out = field(j, "out_channels", index);
    c.kernel_h = field(j, "kernel_h", index);
    c.kernel_w = field(j, "kernel_w", index);
    c.stride = field(j, "stride", index);
    c.padding = field(j, "padding", index);
    const std::size_t nw = field(j, "weights", index);
    const std::size_t nb = field(j, "bias", index);
    if (nw != out * c.fan_in()) dimension_error(index, kind, "weight", nw, out * c.fan_in());
    if (nb != out) dimension_error(index, kind, "bias", nb, out);
    c.weights = payload.matrix(out, c.fan_in());
    c.bias = payload.vector(out);
    return c;
  }
  if (kind == "pool") {
    Pool p;
    const auto pool_kind = j.value("pool", std::string("avg"));
    if (pool_kind == "avg") {
      p.kind = PoolKind::kAvg;
    } else if (pool_kind == "max") {
      p.kind = PoolKind::kMax;
    } else {
      throw Error(ErrorCode::kUnsupportedLayer, "layer " + std::to_string(index) +
                                                    ": unsupported pool kind '" +
                                                    pool_kind + "'");
    }
    p.window = field(j, "window", index);
    p.stride = field(j, "stride", index);
    return p;
  }
  if (kind == "flatten") return Flatten{};
  if (kind == "activation") {
    const auto fn = j.value("function", std::string());
    if (fn == "relu") return Activation{ActivationKind::kRelu};
    if (fn == "tanh") return Activation{ActivationKind::kTanh};
    if (fn == "softmax") return Activation{ActivationKind::kSoftmax};
    throw Error(ErrorCode::kUnsupportedLayer, "layer " + std::to_string(index) +
                                                  ": unsupported activation '" + fn + "'");
  }
  throw Error(ErrorCode::kUnsupportedLayer,
              "layer " + std::to_string(index) + ": unsupported layer kind '" + kind + "'");
}

}  // namespace

std::vector<std::uint8_t> serialize_model(const Model& model, const Metadata& metadata) {
  json header;
  header["format_version"] = kModelFormatVersion;
  header["input_shape"] = model.input_shape();
  header["num_classes"] = model.num_classes();
  header["metadata"] = metadata;
  header["layers"] = json::array();
  for (const auto& layer : model.layers()) header["layers"].push_back(describe(layer));

  const std::string text = std::string(kModelMagicLine) + "\n" + header.dump() + "\n";
  std::vector<std::uint8_t> out(text.begin(), text.end());
  for (const auto& layer : model.layers()) {
    if (const auto* d = std::get_if<Dense>(&layer)) {
      put_matrix(out, d->weights);
      put_matrix(out, d->bias);
    } else if (const auto* c = std::get_if<Conv2D>(&layer)) {
      put_matrix(out, c->weights);
      put_matrix(out, c->bias);
    }
  }
  return out;
}

ModelFile parse_model(std::span<const std::uint8_t> bytes) {
  const auto line_end = [&](std::size_t from) {
    for (std::size_t i = from; i < bytes.size(); ++i) {
      if (bytes[i] == '\n') return i;
    }
    throw Error(ErrorCode::kParse, "model header is truncated");
  };
  const std::size_t magic_end = line_end(0);
  const std::string magic(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(magic_end));
  if (magic != kModelMagicLine) {
    throw Error(ErrorCode::kParse, "not a mutacc model file (bad first line)");
  }
  const std::size_t header_end = line_end(magic_end + 1);

  json header;
  try {
    header = json::parse(bytes.begin() + static_cast<std::ptrdiff_t>(magic_end + 1),
                         bytes.begin() + static_cast<std::ptrdiff_t>(header_end));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("model header: ") + e.what());
  }
  if (!header.is_object()) {
    throw Error(ErrorCode::kParse, "model header must be a JSON object");
  }
  if (!header.contains("format_version") || !header["format_version"].is_number_integer()) {
    throw Error(ErrorCode::kParse, "model header lacks format_version");
  }
  const int version = header["format_version"].get<int>();
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "unsupported model format_version " + std::to_string(version) +
                    " (expected " + std::to_string(kModelFormatVersion) + ")");
  }

  Shape input_shape;
  std::size_t num_classes = 0;
  Metadata metadata;
  try {
    input_shape = header.at("input_shape").get<Shape>();
    num_classes = header.at("num_classes").get<std::size_t>();
    if (header.contains("metadata")) metadata = header["metadata"].get<Metadata>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("model header: ") + e.what());
  }
  if (!header.contains("layers") || !header["layers"].is_array()) {
    throw Error(ErrorCode::kParse, "model header lacks a layers array");
  }

  PayloadReader payload(bytes.subspan(header_end + 1));
  std::vector<LayerSpec> layers;
  for (std::size_t i = 0; i < header["layers"].size(); ++i) {
    layers.push_back(read_layer(header["layers"][i], i, payload));
  }
  if (payload.remaining() != 0) {
    throw Error(ErrorCode::kParse, std::to_string(payload.remaining()) +
                                       " trailing bytes after weight payload");
  }
  return ModelFile{Model(std::move(input_shape), std::move(layers), num_classes),
                   std::move(metadata)};
}

void save_model(const Model& model, const std::filesystem::path& path,
                const Metadata& metadata) {
  if (model.layers().empty()) {
    throw Error(ErrorCode::kInvalidArgument, "refusing to save a model without layers");
  }
  write_file(path, serialize_model(model, metadata));
}

ModelFile load_model_file(const std::filesystem::path& path) {
  return parse_model(read_file(path));
}

Model load_model(const std::filesystem::path& path) {
  return load_model_file(path).model;
}

std::vector<MutableLayer> mutable_layers(const Model& model) {
  std::vector<MutableLayer> out;
  const auto& layers = model.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (is_mutable(layers[i])) out.push_back({i, neuron_count(layers[i])});
  }
  return out;
}

}  // namespace mutacc
