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

// Fisher-Rao geodesic path attribution.
//
// The prediction p(x) is connected to a reference distribution q* (uniform by
// default) by a Fisher-Rao geodesic sampled at T + 1 waypoints. An input-space
// trajectory x_0 = x, x_1, ..., x_T is realized by damped natural-gradient
// steps on the spherical alignment loss 1 - <sqrt p(x), s>, with step sizes
// bounded by a KL budget and an optional Euclidean cap. Attributions are the
// trapezoidal path integral of the target-score gradient along that
// trajectory, sign-flipped into baseline-to-input orientation, so that
//
//   sum(A) ~= F_t(x_0) - F_t(x_T).

#ifndef FRINGE_DRIVER_H_
#define FRINGE_DRIVER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fringe/model.h"
#include "fringe/simplex.h"
#include "fringe/solver.h"
#include "fringe/tensor.h"

namespace fringe {

// Raised when the trajectory leaves the finite range; carries the step index.
class TrajectoryError : public Error {
 public:
  TrajectoryError(std::size_t step, const std::string& what);
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

enum class Variant {
  kFull,
  kEuclideanTracking,
  kUnregularizedFr,
  kGammaStepOnly,
  kGammaPriorOnly,
  kMaxentPriorControl,
};

std::string_view VariantName(Variant v);
Variant ParseVariant(std::string_view name);

// Which scalar the attribution integrates: the target logit or the target
// softmax probability.
enum class ScoreTarget { kLogit, kProbability };

std::string_view ScoreTargetName(ScoreTarget s);
ScoreTarget ParseScoreTarget(std::string_view name);

enum class ActiveConstraint { kEtaMax, kKl, kEuclidean };

std::string_view ActiveConstraintName(ActiveConstraint c);

struct FringeConfig {
  double tau = 1e-3;
  double eta_max = 10.0;
  std::optional<double> delta_euc;  // nullopt disables the Euclidean cap
  SolveConfig solve;
  Variant variant = Variant::kFull;
  double epsilon = 1e-8;
  ScoreTarget score_target = ScoreTarget::kLogit;
  std::size_t step_cap = kDefaultStepCap;
  bool record_states = false;
  // Interior reference distribution; uniform when unset.
  std::optional<Tensor> reference;

  void Validate() const;
};

struct StepRecord {
  Tensor probs;  // p(x_k) at the start of the step
  double loss = 0.0;
  double eta = 0.0;
  ActiveConstraint active = ActiveConstraint::kEtaMax;
  double fisher_norm_sq = 0.0;  // 0 for variants that skip the metric
  double euclid_step = 0.0;     // ||x_{k+1} - x_k||_2
  // d_FR(p(x_{k+1}), q_{k+1}): how far the step landed from the waypoint it
  // was aiming at.
  double tracking_error = 0.0;
  double kl_step = 0.0;  // KL(p(x_{k+1}) || p(x_k))
  std::size_t cg_iterations = 0;
  bool cg_converged = true;
  double cg_residual = 0.0;
};

struct TrajectoryRecord {
  std::vector<StepRecord> steps;
  std::vector<Tensor> states;  // x_0..x_T when record_states is set
  std::uint64_t metric_applications = 0;

  double MeanTrackingError() const;
  double MaxTrackingError() const;
};

struct AttributionResult {
  std::string method;
  std::size_t target = 0;
  Tensor attribution;
  double completeness_residual = 0.0;
  double endpoint_kl = 0.0;
  double score_start = 0.0;  // F_t at the input
  double score_end = 0.0;    // F_t at the path endpoint
  Tensor endpoint;
  std::string endpoint_digest;
  std::size_t planned_steps = 0;
  double geodesic_length = 0.0;
  bool degenerate = false;
  TrajectoryRecord trajectory;
  std::optional<FringeConfig> config;
};

double ScoreValue(const ModelGraph& model, const Tensor& x, std::size_t target,
                  ScoreTarget score);
Tensor ScoreGradient(const ModelGraph& model, const Tensor& x,
                     std::size_t target, ScoreTarget score);

// 1 - <sqrt p, s>.
double AlignmentLoss(const SimplexPoint& p, const Tensor& s);

// Input gradient of the alignment loss, chained analytically through the
// square root and the softmax, then pulled back with one VJP.
Tensor AlignmentGrad(const ModelGraph& model, const Tensor& x, const Tensor& s);

struct StepSize {
  double eta = 0.0;
  ActiveConstraint active = ActiveConstraint::kEtaMax;
};

// eta = min(eta_max, sqrt(2 tau / (n^2 + eps)), delta / (||v|| + eps)).
// Ties resolve to eta_max, then kl, then euclidean.
StepSize ComputeStepSize(const FringeConfig& cfg, double fisher_norm_sq,
                         double v_norm);

// |sum(A) - delta_score| / (|delta_score| + eps)
double CompletenessResidual(const Tensor& attribution, double delta_score,
                            double epsilon);

AttributionResult RunFringe(const ModelGraph& model, const Tensor& x,
                            std::size_t target, const FringeConfig& cfg);

// Straight-line path from `baseline` to `x` with N trapezoid panels.
AttributionResult RunIgReference(const ModelGraph& model, const Tensor& x,
                                 std::size_t target, const Tensor& baseline,
                                 std::size_t steps,
                                 ScoreTarget score = ScoreTarget::kLogit,
                                 double epsilon = 1e-8);

// Hex FNV-1a digest of the raw tensor bytes.
std::string TensorDigest(const Tensor& t);

}  // namespace fringe

#endif  // FRINGE_DRIVER_H_
