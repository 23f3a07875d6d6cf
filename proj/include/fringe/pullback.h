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

#ifndef FRINGE_PULLBACK_H_
#define FRINGE_PULLBACK_H_

#include <atomic>
#include <cstdint>

#include "fringe/model.h"
#include "fringe/tensor.h"

namespace fringe {

// (diag(p) - p p^T) w, the softmax Fisher matrix in logit coordinates applied
// without forming it.
Tensor FisherLogitApply(const Tensor& p, const Tensor& w);

// Evaluation point for the pullback metric G(x) = J^T S(p(x)) J.
//
// Holds a reference to the model; the model must outlive the context.
// Counts metric applications so callers can verify which code paths touched
// the metric.
class PullbackContext {
 public:
  PullbackContext(const ModelGraph& model, Tensor x);
  PullbackContext(const PullbackContext&) = delete;
  PullbackContext& operator=(const PullbackContext&) = delete;

  const ModelGraph& model() const { return *model_; }
  const Tensor& x() const { return x_; }
  const PredictiveState& state() const { return state_; }

  // G(x) v via one JVP, the analytic Fisher product, and one VJP.
  Tensor MetricApply(const Tensor& v) const;
  // v^T G(x) v, clamped at zero.
  double MetricNormSq(const Tensor& v) const;

  std::uint64_t apply_count() const {
    return apply_count_.load(std::memory_order_relaxed);
  }

 private:
  const ModelGraph* model_;
  Tensor x_;
  PredictiveState state_;
  mutable std::atomic<std::uint64_t> apply_count_{0};
};

}  // namespace fringe

#endif  // FRINGE_PULLBACK_H_
