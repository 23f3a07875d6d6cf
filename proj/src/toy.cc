/* Copyright 2026 The FRInGe Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "fringe/toy.h"

#include <cmath>
#include <random>
#include <utility>

namespace fringe {

ModelGraph MakeRandomMlp(const MlpSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<LayerSpec> layers;
  std::size_t fan_in = ShapeSize(spec.input_shape);
  std::vector<std::size_t> widths = spec.hidden;
  widths.push_back(spec.classes);
  for (std::size_t li = 0; li < widths.size(); ++li) {
    const std::size_t fan_out = widths[li];
    const double scale = spec.weight_scale / std::sqrt(static_cast<double>(fan_in));
    Tensor w(Shape{fan_out, fan_in});
    for (double& v : w.mutable_values()) v = scale * unit(rng);
    Tensor b(Shape{fan_out});
    for (double& v : b.mutable_values()) v = 0.1 * unit(rng);
    layers.push_back(LayerSpec::Dense(std::move(w), std::move(b)));
    if (li + 1 < widths.size()) layers.push_back(LayerSpec::Act(spec.activation));
    fan_in = fan_out;
  }
  return ModelGraph(spec.input_shape, spec.classes, std::move(layers));
}

ModelGraph MakeLinearModel(const Shape& input_shape, const Tensor& weights,
                           const Tensor& bias) {
  std::vector<LayerSpec> layers;
  layers.push_back(LayerSpec::Dense(weights, bias));
  return ModelGraph(input_shape, bias.size(), std::move(layers));
}

Tensor RandomUniform(const Shape& shape, std::uint64_t seed, double lo,
                     double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  Tensor t(shape);
  for (double& v : t.mutable_values()) v = dist(rng);
  return t;
}

Tensor RandomNormal(const Shape& shape, std::uint64_t seed, double sigma) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, sigma);
  Tensor t(shape);
  for (double& v : t.mutable_values()) v = dist(rng);
  return t;
}

std::size_t ArgMax(const Tensor& t) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] > t[best]) best = i;
  }
  return best;
}

std::vector<ToyCase> MakeToySuite() {
  std::vector<ToyCase> suite;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    MlpSpec spec;
    spec.seed = seed;
    spec.weight_scale = 2.0;
    ModelGraph model = MakeRandomMlp(spec);
    Tensor x = RandomUniform(spec.input_shape, 100 + seed);
    const std::size_t target = ArgMax(model.Logits(x));
    suite.push_back(ToyCase{std::move(model), std::move(x), target});
  }
  return suite;
}

}  // namespace fringe
