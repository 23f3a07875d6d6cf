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

#include "fringe/pullback.h"

#include <algorithm>
#include <utility>

namespace fringe {

Tensor FisherLogitApply(const Tensor& p, const Tensor& w) {
  if (p.size() != w.size()) throw ShapeError("fisher_logit_apply: length mismatch");
  double pw = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) pw += p[i] * w[i];
  Tensor out(w.shape());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] * w[i] - p[i] * pw;
  return out;
}

PullbackContext::PullbackContext(const ModelGraph& model, Tensor x)
    : model_(&model), x_(std::move(x)), state_(model.Forward(x_)) {}

Tensor PullbackContext::MetricApply(const Tensor& v) const {
  apply_count_.fetch_add(1, std::memory_order_relaxed);
  const Tensor jv = model_->Jvp(x_, v);
  return model_->Vjp(x_, FisherLogitApply(state_.probs, jv));
}

double PullbackContext::MetricNormSq(const Tensor& v) const {
  return std::max(0.0, Dot(v, MetricApply(v)));
}

}  // namespace fringe
