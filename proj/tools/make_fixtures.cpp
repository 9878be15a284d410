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

// Generates the synthetic fixtures checked in under tests/fixtures:
//   strokes_test_{images,labels}.idx  1000 28x28 stroke images, 10 classes
//   fcnn_strokes.mutacc               784-50-50-50-10 ReLU FCNN trained on them
//   lenet_small_{images,labels}.idx   120 12x12 images, 4 classes
//   lenet_small.mutacc                small conv/avg-pool/tanh network
//
// Usage: make_fixtures <output-dir>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <iostream>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mutacc/dataset.hpp"
#include "mutacc/engine.hpp"
#include "mutacc/model.hpp"
#include "mutacc/model_io.hpp"
#include "mutacc/random.hpp"

namespace {

using mutacc::Rng;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Stroke {
  double x0, y0, x1, y1;
};

/// Each class is a fixed set of line segments; samples jitter, shift and
/// add noise, then quantize to bytes like a scanned digit.
class StrokeGenerator {
 public:
  StrokeGenerator(std::size_t classes, std::size_t side, std::uint64_t seed)
      : side_(side), rng_(seed) {
    std::uniform_real_distribution<double> pos(0.2 * side, 0.8 * side);
    for (std::size_t c = 0; c < classes; ++c) {
      std::vector<Stroke> strokes;
      const std::size_t count = 2 + c % 3;
      for (std::size_t k = 0; k < count; ++k) {
        strokes.push_back({pos(rng_), pos(rng_), pos(rng_), pos(rng_)});
      }
      prototypes_.push_back(strokes);
    }
  }

  mutacc::LabeledDataset sample(std::size_t n) {
    const std::size_t pixels = side_ * side_;
    MatrixXd inputs(static_cast<Eigen::Index>(pixels), static_cast<Eigen::Index>(n));
    std::vector<std::size_t> labels(n);
    std::normal_distribution<double> jitter(0.0, 0.06 * static_cast<double>(side_));
    std::normal_distribution<double> noise(0.0, 0.12);
    std::uniform_real_distribution<double> shift(-0.1 * side_, 0.1 * side_);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = mutacc::uniform_index(rng_, prototypes_.size());
      labels[i] = c;
      const double dx = shift(rng_), dy = shift(rng_);
      std::vector<Stroke> strokes = prototypes_[c];
      for (auto& s : strokes) {
        s = {s.x0 + dx + jitter(rng_), s.y0 + dy + jitter(rng_), s.x1 + dx + jitter(rng_),
             s.y1 + dy + jitter(rng_)};
      }
      for (std::size_t y = 0; y < side_; ++y) {
        for (std::size_t x = 0; x < side_; ++x) {
          double v = 0.0;
          for (const auto& s : strokes) v = std::max(v, ink(s, x + 0.5, y + 0.5));
          v = std::clamp(v + noise(rng_), 0.0, 1.0);
          inputs(static_cast<Eigen::Index>(y * side_ + x), static_cast<Eigen::Index>(i)) =
              std::round(v * 255.0) / 255.0;
        }
      }
    }
    return mutacc::LabeledDataset({side_, side_}, std::move(inputs), std::move(labels),
                                  prototypes_.size());
  }

 private:
  double ink(const Stroke& s, double px, double py) const {
    const double vx = s.x1 - s.x0, vy = s.y1 - s.y0;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0 ? ((px - s.x0) * vx + (py - s.y0) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = px - (s.x0 + t * vx), dy = py - (s.y0 + t * vy);
    const double width = 0.05 * static_cast<double>(side_);
    return std::exp(-(dx * dx + dy * dy) / (2 * width * width));
  }

  std::size_t side_;
  Rng rng_;
  std::vector<std::vector<Stroke>> prototypes_;
};

/// Plain mini-batch SGD on softmax cross-entropy for a ReLU MLP.
struct Mlp {
  std::vector<MatrixXd> w;
  std::vector<VectorXd> b;

  Mlp(const std::vector<std::size_t>& sizes, Rng& rng) {
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
      std::normal_distribution<double> init(0.0, std::sqrt(2.0 / static_cast<double>(sizes[i])));
      MatrixXd m(static_cast<Eigen::Index>(sizes[i + 1]), static_cast<Eigen::Index>(sizes[i]));
      for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = init(rng);
      w.push_back(m);
      b.push_back(VectorXd::Zero(m.rows()));
    }
  }

  void train(const MatrixXd& x, const std::vector<std::size_t>& y, std::size_t epochs,
             double rate, Rng& rng) {
    const std::size_t n = y.size();
    const std::size_t batch = 32;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
      for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[mutacc::uniform_index(rng, i)]);
      for (std::size_t start = 0; start < n; start += batch) {
        const std::size_t len = std::min(batch, n - start);
        MatrixXd xb(x.rows(), static_cast<Eigen::Index>(len));
        MatrixXd target = MatrixXd::Zero(w.back().rows(), static_cast<Eigen::Index>(len));
        for (std::size_t j = 0; j < len; ++j) {
          xb.col(static_cast<Eigen::Index>(j)) = x.col(static_cast<Eigen::Index>(order[start + j]));
          target(static_cast<Eigen::Index>(y[order[start + j]]), static_cast<Eigen::Index>(j)) = 1.0;
        }
        step(xb, target, rate);
      }
    }
  }

  void step(const MatrixXd& x, const MatrixXd& target, double rate) {
    std::vector<MatrixXd> acts{x};
    for (std::size_t l = 0; l < w.size(); ++l) {
      MatrixXd z = w[l] * acts.back();
      z.colwise() += b[l];
      if (l + 1 < w.size()) z = z.cwiseMax(0.0);
      acts.push_back(z);
    }
    MatrixXd probs = acts.back();
    for (Eigen::Index c = 0; c < probs.cols(); ++c) {
      probs.col(c) = (probs.col(c).array() - probs.col(c).maxCoeff()).exp().matrix();
      probs.col(c) /= probs.col(c).sum();
    }
    MatrixXd delta = (probs - target) / static_cast<double>(x.cols());
    for (std::size_t l = w.size(); l-- > 0;) {
      const MatrixXd grad_w = delta * acts[l].transpose();
      const VectorXd grad_b = delta.rowwise().sum();
      if (l > 0) {
        delta = (w[l].transpose() * delta).cwiseProduct(
            (acts[l].array() > 0.0).cast<double>().matrix());
      }
      w[l] -= rate * grad_w;
      b[l] -= rate * grad_b;
    }
  }

  mutacc::Model to_model(const mutacc::Shape& input, std::size_t classes) const {
    std::vector<mutacc::LayerSpec> layers{mutacc::Flatten{}};
    for (std::size_t l = 0; l < w.size(); ++l) {
      // Round through float so the in-memory model equals the saved one.
      layers.push_back(mutacc::Dense{w[l].cast<float>().cast<double>(),
                                     b[l].cast<float>().cast<double>()});
      layers.push_back(mutacc::Activation{l + 1 < w.size() ? mutacc::ActivationKind::kRelu
                                                            : mutacc::ActivationKind::kSoftmax});
    }
    return mutacc::Model(input, std::move(layers), classes);
  }
};

MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, double scale, Rng& rng) {
  MatrixXd m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    m.data()[k] = static_cast<float>((2.0 * mutacc::uniform_unit(rng) - 1.0) * scale);
  }
  return m;
}

mutacc::Model small_lenet(Rng& rng) {
  using namespace mutacc;
  Conv2D c1;
  c1.in_channels = 1;
  c1.kernel_h = c1.kernel_w = 3;
  c1.weights = random_matrix(3, 9, 0.6, rng);
  c1.bias = random_matrix(3, 1, 0.1, rng);
  Conv2D c2;
  c2.in_channels = 3;
  c2.kernel_h = c2.kernel_w = 2;
  c2.weights = random_matrix(4, 12, 0.5, rng);
  c2.bias = random_matrix(4, 1, 0.1, rng);
  // 12x12 -> conv3 10x10 -> pool 5x5 -> conv2 4x4 -> pool 2x2 -> 4*2*2 = 16
  std::vector<LayerSpec> layers{
      c1, Activation{ActivationKind::kTanh}, Pool{PoolKind::kAvg, 2, 2},
      c2, Activation{ActivationKind::kTanh}, Pool{PoolKind::kAvg, 2, 2},
      Flatten{},
      Dense{random_matrix(12, 16, 0.6, rng), random_matrix(12, 1, 0.1, rng)},
      Activation{ActivationKind::kTanh},
      Dense{random_matrix(8, 12, 0.6, rng), random_matrix(8, 1, 0.1, rng)},
      Activation{ActivationKind::kTanh},
      Dense{random_matrix(4, 8, 0.8, rng), random_matrix(4, 1, 0.1, rng)},
      Activation{ActivationKind::kSoftmax}};
  return Model({1, 12, 12}, std::move(layers), 4);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2 || argv[1][0] == '-') {
    std::cerr << "usage: make_fixtures <output-dir>\n";
    return argc == 2 && std::string_view(argv[1]) == "--help" ? 0 : 1;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);

  StrokeGenerator strokes(10, 28, 20240601);
  const auto train = strokes.sample(6000);
  const auto test = strokes.sample(1000);
  mutacc::write_idx_pair(test, dir / "strokes_test_images.idx", dir / "strokes_test_labels.idx");

  Rng rng(7);
  Mlp mlp({784, 50, 50, 50, 10}, rng);
  mlp.train(train.inputs(), train.labels(), 4, 0.05, rng);
  const mutacc::Model fcnn = mlp.to_model({28, 28}, 10);
  mutacc::save_model(fcnn, dir / "fcnn_strokes.mutacc",
                     {{"architecture", "fcnn"},
                      {"dataset", "synthetic-strokes"},
                      {"training_seed", "7"},
                      {"epochs", "4"}});
  std::cout << "fcnn test accuracy: "
            << mutacc::baseline_predictions(fcnn, test).accuracy() << '\n';

  StrokeGenerator small(4, 12, 99);
  const auto small_data = small.sample(120);
  mutacc::write_idx_pair(small_data, dir / "lenet_small_images.idx",
                         dir / "lenet_small_labels.idx");
  Rng lenet_rng(11);
  const mutacc::Model lenet = small_lenet(lenet_rng);
  mutacc::save_model(lenet, dir / "lenet_small.mutacc",
                     {{"architecture", "lenet-small"}, {"dataset", "synthetic-strokes-12"},
                      {"training_seed", "11"}, {"epochs", "0"}});
  std::cout << "lenet-small accuracy (untrained): "
            << mutacc::baseline_predictions(lenet, small_data).accuracy() << '\n';
  return 0;
}
