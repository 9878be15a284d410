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

#include "mutacc/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mutacc/error.hpp"

namespace mutacc {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Planes {
  std::size_t channels, height, width;
};

Planes as_planes(const Shape& s, std::string_view what) {
  if (s.size() == 2) return {1, s[0], s[1]};
  if (s.size() == 3) return {s[0], s[1], s[2]};
  throw Error(ErrorCode::kShapeMismatch, std::string(what) +
                                             " expects a HxW or CxHxW input, got " +
                                             to_string(s));
}

[[noreturn]] void shape_error(std::string_view what, const std::string& expected,
                              const Shape& actual) {
  throw Error(ErrorCode::kShapeMismatch, std::string(what) + " expects input " +
                                             expected + ", got " + to_string(actual));
}

Shape conv_out_shape(const Conv2D& c, const Shape& input) {
  const Planes in = as_planes(input, "conv2d");
  if (in.channels != c.in_channels) {
    shape_error("conv2d", std::to_string(c.in_channels) + " input channel(s)", input);
  }
  const std::size_t h = in.height + 2 * c.padding;
  const std::size_t w = in.width + 2 * c.padding;
  if (h < c.kernel_h || w < c.kernel_w) {
    shape_error("conv2d",
                "spatial size >= kernel " + std::to_string(c.kernel_h) + "x" +
                    std::to_string(c.kernel_w),
                input);
  }
  return {c.out_channels(), (h - c.kernel_h) / c.stride + 1,
          (w - c.kernel_w) / c.stride + 1};
}

Shape pool_out_shape(const Pool& p, const Shape& input) {
  const Planes in = as_planes(input, "pool");
  if (in.height < p.window || in.width < p.window) {
    shape_error("pool", "spatial size >= window " + std::to_string(p.window), input);
  }
  Shape out = input;
  out[out.size() - 2] = (in.height - p.window) / p.stride + 1;
  out[out.size() - 1] = (in.width - p.window) / p.stride + 1;
  return out;
}

Eigen::MatrixXd conv_batch(const Conv2D& conv, const Shape& input,
                           const Eigen::MatrixXd& batch) {
  const Planes in = as_planes(input, "conv2d");
  const Shape out_shape = conv_out_shape(conv, input);
  const std::size_t oh = out_shape[1], ow = out_shape[2];
  const std::size_t patch = conv.fan_in();
  const auto pad = static_cast<std::ptrdiff_t>(conv.padding);

  Eigen::MatrixXd result(static_cast<Eigen::Index>(element_count(out_shape)),
                         batch.cols());
  Eigen::MatrixXd patches(static_cast<Eigen::Index>(patch),
                          static_cast<Eigen::Index>(oh * ow));
  for (Eigen::Index col = 0; col < batch.cols(); ++col) {
    const double* src = batch.col(col).data();
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t x = 0; x < ow; ++x) {
        const auto pcol = static_cast<Eigen::Index>(y * ow + x);
        Eigen::Index row = 0;
        for (std::size_t c = 0; c < in.channels; ++c) {
          for (std::size_t ky = 0; ky < conv.kernel_h; ++ky) {
            for (std::size_t kx = 0; kx < conv.kernel_w; ++kx, ++row) {
              const auto iy = static_cast<std::ptrdiff_t>(y * conv.stride + ky) - pad;
              const auto ix = static_cast<std::ptrdiff_t>(x * conv.stride + kx) - pad;
              const bool inside = iy >= 0 && ix >= 0 &&
                                  iy < static_cast<std::ptrdiff_t>(in.height) &&
                                  ix < static_cast<std::ptrdiff_t>(in.width);
              patches(row, pcol) =
                  inside ? src[(c * in.height + static_cast<std::size_t>(iy)) * in.width +
                               static_cast<std::size_t>(ix)]
                         : 0.0;
            }
          }
        }
      }
    }
    RowMajorMatrix out = conv.weights * patches;
    out.colwise() += conv.bias;
    result.col(col) = Eigen::Map<const Eigen::VectorXd>(out.data(), out.size());
  }
  return result;
}

Eigen::MatrixXd pool_batch(const Pool& pool, const Shape& input,
                           const Eigen::MatrixXd& batch) {
  const Planes in = as_planes(input, "pool");
  const Shape out_shape = pool_out_shape(pool, input);
  const std::size_t oh = out_shape[out_shape.size() - 2];
  const std::size_t ow = out_shape[out_shape.size() - 1];
  const double area = static_cast<double>(pool.window * pool.window);

  Eigen::MatrixXd result(static_cast<Eigen::Index>(element_count(out_shape)),
                         batch.cols());
  for (Eigen::Index col = 0; col < batch.cols(); ++col) {
    const double* src = batch.col(col).data();
    double* dst = result.col(col).data();
    for (std::size_t c = 0; c < in.channels; ++c) {
      for (std::size_t y = 0; y < oh; ++y) {
        for (std::size_t x = 0; x < ow; ++x) {
          double acc = pool.kind == PoolKind::kMax
                           ? -std::numeric_limits<double>::infinity()
                           : 0.0;
          for (std::size_t ky = 0; ky < pool.window; ++ky) {
            for (std::size_t kx = 0; kx < pool.window; ++kx) {
              const double v = src[(c * in.height + y * pool.stride + ky) * in.width +
                                   x * pool.stride + kx];
              acc = pool.kind == PoolKind::kMax ? std::max(acc, v) : acc + v;
            }
          }
          dst[(c * oh + y) * ow + x] = pool.kind == PoolKind::kMax ? acc : acc / area;
        }
      }
    }
  }
  return result;
}

Eigen::MatrixXd activation_batch(const Activation& act, const Eigen::MatrixXd& batch) {
  switch (act.kind) {
    case ActivationKind::kRelu:
      return batch.cwiseMax(0.0);
    case ActivationKind::kTanh:
      return batch.array().tanh().matrix();
    case ActivationKind::kSoftmax: {
      Eigen::MatrixXd out(batch.rows(), batch.cols());
      for (Eigen::Index col = 0; col < batch.cols(); ++col) {
        const double top = batch.col(col).maxCoeff();
        out.col(col) = (batch.col(col).array() - top).exp().matrix();
        out.col(col) /= out.col(col).sum();
      }
      return out;
    }
  }
  return batch;
}

}  // namespace

std::string_view layer_name(const LayerSpec& layer) {
  return std::visit(Overloaded{[](const Dense&) { return std::string_view("dense"); },
                               [](const Conv2D&) { return std::string_view("conv2d"); },
                               [](const Pool&) { return std::string_view("pool"); },
                               [](const Flatten&) { return std::string_view("flatten"); },
                               [](const Activation&) {
                                 return std::string_view("activation");
                               }},
                    layer);
}

std::string_view to_string(PoolKind kind) {
  return kind == PoolKind::kAvg ? "avg" : "max";
}

std::string_view to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::kRelu: return "relu";
    case ActivationKind::kTanh: return "tanh";
    case ActivationKind::kSoftmax: return "softmax";
  }
  return "unknown";
}

void validate_layer(const LayerSpec& layer) {
  std::visit(
      Overloaded{
          [](const Dense& d) {
            if (d.weights.rows() == 0 || d.weights.cols() == 0) {
              throw Error(ErrorCode::kDimensionMismatch, "dense layer has no weights");
            }
            if (d.bias.size() != d.weights.rows()) {
              throw Error(ErrorCode::kDimensionMismatch,
                          "dense bias length " + std::to_string(d.bias.size()) +
                              " != out_dim " + std::to_string(d.weights.rows()));
            }
            if (!d.weights.allFinite() || !d.bias.allFinite()) {
              throw Error(ErrorCode::kNonFinite, "dense parameters contain NaN or Inf");
            }
          },
          [](const Conv2D& c) {
            if (c.in_channels == 0 || c.kernel_h == 0 || c.kernel_w == 0 ||
                c.weights.rows() == 0) {
              throw Error(ErrorCode::kDimensionMismatch, "conv2d has an empty dimension");
            }
            if (c.stride < 1) {
              throw Error(ErrorCode::kInvalidArgument, "conv2d stride must be >= 1");
            }
            if (static_cast<std::size_t>(c.weights.cols()) != c.fan_in()) {
              throw Error(ErrorCode::kDimensionMismatch,
                          "conv2d filter length " + std::to_string(c.weights.cols()) +
                              " != in_channels*kernel_h*kernel_w " +
                              std::to_string(c.fan_in()));
            }
            if (c.bias.size() != c.weights.rows()) {
              throw Error(ErrorCode::kDimensionMismatch,
                          "conv2d bias length " + std::to_string(c.bias.size()) +
                              " != out_channels " + std::to_string(c.weights.rows()));
            }
            if (!c.weights.allFinite() || !c.bias.allFinite()) {
              throw Error(ErrorCode::kNonFinite, "conv2d parameters contain NaN or Inf");
            }
          },
          [](const Pool& p) {
            if (p.window < 1 || p.stride < 1) {
              throw Error(ErrorCode::kInvalidArgument, "pool window and stride must be >= 1");
            }
          },
          [](const Flatten&) {}, [](const Activation&) {}},
      layer);
}

Shape output_shape(const LayerSpec& layer, const Shape& input) {
  return std::visit(
      Overloaded{
          [&](const Dense& d) -> Shape {
            if (input.size() != 1 || input[0] != d.in_dim()) {
              shape_error("dense", "[" + std::to_string(d.in_dim()) + "]", input);
            }
            return {d.out_dim()};
          },
          [&](const Conv2D& c) { return conv_out_shape(c, input); },
          [&](const Pool& p) { return pool_out_shape(p, input); },
          [&](const Flatten&) -> Shape { return {element_count(input)}; },
          [&](const Activation& a) -> Shape {
            if (a.kind == ActivationKind::kSoftmax && input.size() != 1) {
              shape_error("softmax", "a rank-1 vector", input);
            }
            return input;
          }},
      layer);
}

bool is_mutable(const LayerSpec& layer) {
  return std::holds_alternative<Dense>(layer) || std::holds_alternative<Conv2D>(layer);
}

std::size_t neuron_count(const LayerSpec& layer) {
  if (const auto* d = std::get_if<Dense>(&layer)) return d->out_dim();
  if (const auto* c = std::get_if<Conv2D>(&layer)) return c->out_channels();
  return 0;
}

std::size_t fan_in(const LayerSpec& layer) {
  if (const auto* d = std::get_if<Dense>(&layer)) return d->in_dim();
  if (const auto* c = std::get_if<Conv2D>(&layer)) return c->fan_in();
  return 0;
}

Eigen::MatrixXd apply_layer(const LayerSpec& layer, const Shape& input,
                            const Eigen::MatrixXd& batch) {
  return std::visit(
      Overloaded{[&](const Dense& d) -> Eigen::MatrixXd {
                   Eigen::MatrixXd out = d.weights * batch;
                   out.colwise() += d.bias;
                   return out;
                 },
                 [&](const Conv2D& c) { return conv_batch(c, input, batch); },
                 [&](const Pool& p) { return pool_batch(p, input, batch); },
                 [&](const Flatten&) { return batch; },
                 [&](const Activation& a) { return activation_batch(a, batch); }},
      layer);
}

Tensor apply_layer(const LayerSpec& layer, const Tensor& input) {
  const Shape out_shape = output_shape(layer, input.shape());
  Eigen::MatrixXd out = apply_layer(layer, input.shape(), Eigen::MatrixXd(input.data()));
  return Tensor(out_shape, Eigen::VectorXd(out.col(0)));
}

}  // namespace mutacc
