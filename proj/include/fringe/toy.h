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

// Seeded toy classifiers and inputs for tests, examples and the bundled
// data set.

#ifndef FRINGE_TOY_H_
#define FRINGE_TOY_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fringe/model.h"
#include "fringe/tensor.h"

namespace fringe {

struct MlpSpec {
  Shape input_shape{1, 4, 4};
  std::vector<std::size_t> hidden{12};
  std::size_t classes = 4;
  Activation activation = Activation::kTanh;
  // Weights are N(0, (scale^2) / fan_in); biases N(0, 0.1^2).
  double weight_scale = 1.0;
  std::uint64_t seed = 0;
};

ModelGraph MakeRandomMlp(const MlpSpec& spec);

// F(x) = W flatten(x) + b with W given as [C, n].
ModelGraph MakeLinearModel(const Shape& input_shape, const Tensor& weights,
                           const Tensor& bias);

Tensor RandomUniform(const Shape& shape, std::uint64_t seed, double lo = 0.0,
                     double hi = 1.0);
Tensor RandomNormal(const Shape& shape, std::uint64_t seed, double sigma = 1.0);

std::size_t ArgMax(const Tensor& t);

struct ToyCase {
  ModelGraph model;
  Tensor input;
  std::size_t target;  // top-1 class at the input
};

// Five tanh MLPs on 1x4x4 inputs with four classes, fixed seeds.
std::vector<ToyCase> MakeToySuite();

}  // namespace fringe

#endif  // FRINGE_TOY_H_
