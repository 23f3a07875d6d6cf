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

#ifndef FRINGE_BASELINES_H_
#define FRINGE_BASELINES_H_

#include <cstddef>
#include <cstdint>

#include "fringe/driver.h"
#include "fringe/model.h"
#include "fringe/tensor.h"

namespace fringe {

struct SmoothGradConfig {
  std::size_t samples = 25;
  double noise_sigma = 0.1;
  std::uint64_t seed = 0;
};

// 0.1 * (max(x) - min(x)), or 0.1 for a constant input.
double DefaultSmoothGradSigma(const Tensor& x);

// Mean of grad F_t(x + xi) over `samples` draws of xi ~ N(0, sigma^2 I).
// The noise stream is a mt19937_64 seeded with cfg.seed.
Tensor SmoothGrad(const ModelGraph& model, const Tensor& x, std::size_t target,
                  const SmoothGradConfig& cfg,
                  ScoreTarget score = ScoreTarget::kLogit);

}  // namespace fringe

#endif  // FRINGE_BASELINES_H_
