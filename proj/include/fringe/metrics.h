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

// Attribution evaluation metrics.
//
// Perturbation metrics work on a spatial ranking. A [C, H, W] attribution is
// reduced to S_ij = max_c |A_cij|, and pixels are ranked by descending S with
// ties going to the lower flat index. Perturbing a pixel replaces all of its
// channels at once.

#ifndef FRINGE_METRICS_H_
#define FRINGE_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fringe/driver.h"
#include "fringe/grid.h"
#include "fringe/model.h"
#include "fringe/tensor.h"

namespace fringe {

struct SaliencyMap {
  GridShape grid;                    // channels == 1
  std::vector<double> values;        // H * W, row-major
  std::vector<std::size_t> ranking;  // pixel indices, most salient first
};

SaliencyMap ReduceSaliency(const Tensor& attribution);

// max(3, odd(floor(min(H, W) / 10))) where odd() rounds up to an odd number.
std::size_t BlurKernelSize(std::size_t height, std::size_t width);
// Box-filtered copy of x with BlurKernelSize, replicate padding.
Tensor BlurReference(const Tensor& x);

enum class BaselineKind { kAvgPoolBlur, kGaussianBlur };
enum class PerturbDirection { kInsertion, kDeletion };

struct PerturbationSchedule {
  BaselineKind baseline = BaselineKind::kAvgPoolBlur;
  std::size_t gaussian_size = 15;
  double gaussian_sigma = 3.0;
  std::size_t steps = 50;  // N; the curve has N + 1 points
  PerturbDirection direction = PerturbDirection::kInsertion;
};

Tensor PerturbationBaseline(const Tensor& x, const PerturbationSchedule& sched);

// Number of ranked pixels perturbed after step s of N: floor(s * P / N).
std::size_t PixelsAtStep(std::size_t step, std::size_t steps,
                         std::size_t pixels);

// Target-class confidence c_s, s = 0..N. Insertion starts from the baseline
// and restores pixels from x in rank order; deletion starts from x and
// replaces pixels with baseline values.
std::vector<double> PerturbationCurve(const ModelGraph& model, const Tensor& x,
                                      std::size_t target,
                                      const SaliencyMap& saliency,
                                      const PerturbationSchedule& sched);

// Trapezoidal area over the unit interval.
double Auc(const std::vector<double>& curve);

// clip((c - p_blur) / (p_orig - p_blur), 0, 1); all zeros when
// p_orig - p_blur <= eps.
std::vector<double> NormalizeCurve(const std::vector<double>& curve,
                                   double p_orig, double p_blur,
                                   double epsilon = 1e-8);

struct MasResult {
  double mas_ins = 0.0;
  double mas_del = 0.0;
  std::vector<double> density;      // DR_k
  std::vector<double> response_ins; // MR_k, insertion
  std::vector<double> response_del; // MR_k, deletion
  std::vector<double> penalty_ins;  // AP_k, insertion
  std::vector<double> penalty_del;  // AP_k, deletion
};

// Density response DR_k: fraction of saliency mass among the pixels
// perturbed by step k.
std::vector<double> DensityResponse(const SaliencyMap& saliency,
                                    std::size_t steps, double epsilon = 1e-8);

// Combines response and density curves into the MAS scores. For insertion
// the penalty compares MR with the mass restored so far (DR); for deletion it
// compares MR, the confidence that remains, with the mass that remains
// (1 - DR).
MasResult MasFromCurves(const std::vector<double>& density,
                        const std::vector<double>& response_ins,
                        const std::vector<double>& response_del);

MasResult Mas(const ModelGraph& model, const Tensor& x, std::size_t target,
              const Tensor& attribution, std::size_t steps = 50,
              std::size_t kernel_size = 15, double sigma = 3.0);

struct InfidelityConfig {
  std::size_t samples = 50;
  double sigma = 0.02;
  std::uint64_t seed = 0;
  ScoreTarget score = ScoreTarget::kLogit;
};

// Mean of (delta . A - (F_t(x) - F_t(x - delta)))^2, delta ~ N(0, sigma^2 I)
// drawn from mt19937_64(seed) in sample-major, entry-minor order.
double Infidelity(const ModelGraph& model, const Tensor& x, std::size_t target,
                  const Tensor& attribution, const InfidelityConfig& cfg);

// Gini index of |A|, clipped to [0, 1].
double Sparseness(const Tensor& attribution, double epsilon = 1e-12);

using AttributionFn = std::function<Tensor(const Tensor&)>;

struct SensitivityConfig {
  double radius = 0.02;
  std::size_t samples = 10;
  std::uint64_t seed = 0;
  double epsilon = 1e-8;
};

// max_m ||phi(x) - phi(x + delta_m)|| / (||delta_m|| + eps) with phi the
// l2-normalized attribution and delta_m ~ U[-r, r]^n.
double MaxSensitivity(const AttributionFn& method, const Tensor& x,
                      const SensitivityConfig& cfg);

struct TuningWeights {
  double w_ins = 1.0;
  double w_del = 1.0;
  double w_fid = 0.5;
  double k = 2.0;
  double epsilon = 1e-6;
};

// Weighted harmonic mean of InsAUC, 1 - DelAUC and exp(-k Inf).
double TuningScore(double ins_auc, double del_auc, double infidelity,
                   const TuningWeights& w = {});

struct MetricsConfig {
  std::size_t steps = 50;
  std::size_t mas_kernel = 15;
  double mas_sigma = 3.0;
  InfidelityConfig infidelity;
  SensitivityConfig sensitivity;
  double epsilon = 1e-8;
};

struct MetricsReport {
  double ins_auc = 0.0;
  double del_auc = 0.0;
  double ins_auc_norm = 0.0;
  double del_auc_norm = 0.0;
  double mas_ins = 0.0;
  double mas_del = 0.0;
  double infidelity = 0.0;
  double sparseness = 0.0;
  std::optional<double> max_sensitivity;
  double tuning_score = 0.0;
  double p_orig = 0.0;
  double p_blur = 0.0;
  std::vector<double> ins_curve;
  std::vector<double> del_curve;
  MasResult mas;
};

// Runs the whole suite. Max sensitivity is computed only when `method` is
// provided, since it needs to re-run the attribution.
MetricsReport EvaluateMetrics(const ModelGraph& model, const Tensor& x,
                              std::size_t target, const Tensor& attribution,
                              const MetricsConfig& cfg,
                              const AttributionFn* method = nullptr);

}  // namespace fringe

#endif  // FRINGE_METRICS_H_
