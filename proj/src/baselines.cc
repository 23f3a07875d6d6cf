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

#include "fringe/baselines.h"

#include <algorithm>
#include <random>

namespace fringe {

double DefaultSmoothGradSigma(const Tensor& x) {
  auto v = x.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double range = *hi - *lo;
  return range > 0.0 ? 0.1 * range : 0.1;
}

Tensor SmoothGrad(const ModelGraph& model, const Tensor& x, std::size_t target,
                  const SmoothGradConfig& cfg, ScoreTarget score) {
  model.CheckInput(x);
  model.CheckClass(target);
  if (cfg.samples < 1) throw Error("smoothgrad: samples must be >= 1");
  if (!(cfg.noise_sigma > 0.0)) throw Error("smoothgrad: noise_sigma must be > 0");

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, cfg.noise_sigma);
  Tensor acc = Tensor::ZerosLike(x);
  const double w = 1.0 / static_cast<double>(cfg.samples);
  for (std::size_t m = 0; m < cfg.samples; ++m) {
    Tensor xp = x;
    for (double& v : xp.mutable_values()) v += noise(rng);
    acc = Axpy(acc, w, ScoreGradient(model, xp, target, score));
  }
  return acc;
}

}  // namespace fringe
