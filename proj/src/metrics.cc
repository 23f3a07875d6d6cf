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

#include "fringe/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

namespace fringe {

SaliencyMap ReduceSaliency(const Tensor& attribution) {
  const GridShape g = GridOrRow(attribution.shape());
  SaliencyMap s;
  s.grid = GridShape{1, g.height, g.width};
  s.values.assign(g.plane(), 0.0);
  auto a = attribution.values();
  for (std::size_t c = 0; c < g.channels; ++c) {
    for (std::size_t k = 0; k < g.plane(); ++k) {
      s.values[k] = std::max(s.values[k], std::abs(a[c * g.plane() + k]));
    }
  }
  s.ranking.resize(g.plane());
  std::iota(s.ranking.begin(), s.ranking.end(), std::size_t{0});
  std::stable_sort(s.ranking.begin(), s.ranking.end(),
                   [&](std::size_t i, std::size_t j) {
                     return s.values[i] > s.values[j];
                   });
  return s;
}

std::size_t BlurKernelSize(std::size_t height, std::size_t width) {
  std::size_t k = std::min(height, width) / 10;
  if (k % 2 == 0) ++k;
  return std::max<std::size_t>(3, k);
}

Tensor BlurReference(const Tensor& x) {
  const GridShape g = GridOrRow(x.shape());
  return BoxBlur(g, x, BlurKernelSize(g.height, g.width));
}

Tensor PerturbationBaseline(const Tensor& x, const PerturbationSchedule& sched) {
  if (sched.baseline == BaselineKind::kAvgPoolBlur) return BlurReference(x);
  if (sched.gaussian_size % 2 == 0) {
    throw Error("gaussian baseline kernel size must be odd");
  }
  return GaussianBlur(GridOrRow(x.shape()), x, sched.gaussian_sigma,
                      sched.gaussian_size / 2);
}

std::size_t PixelsAtStep(std::size_t step, std::size_t steps,
                         std::size_t pixels) {
  return step * pixels / steps;
}

std::vector<double> PerturbationCurve(const ModelGraph& model, const Tensor& x,
                                      std::size_t target,
                                      const SaliencyMap& saliency,
                                      const PerturbationSchedule& sched) {
  model.CheckInput(x);
  model.CheckClass(target);
  if (sched.steps < 1) throw Error("perturbation schedule needs >= 1 step");
  const GridShape g = GridOrRow(x.shape());
  if (g.plane() != saliency.values.size()) {
    throw ShapeError(fmt::format("saliency map has {} pixels, input has {}",
                                 saliency.values.size(), g.plane()));
  }
  const Tensor baseline = PerturbationBaseline(x, sched);
  const bool insertion = sched.direction == PerturbDirection::kInsertion;
  const Tensor& source = insertion ? x : baseline;
  Tensor current = insertion ? baseline : x;

  std::vector<double> curve;
  curve.reserve(sched.steps + 1);
  curve.push_back(model.Forward(current).probs[target]);
  std::size_t done = 0;
  for (std::size_t s = 1; s <= sched.steps; ++s) {
    const std::size_t upto = PixelsAtStep(s, sched.steps, g.plane());
    for (; done < upto; ++done) {
      const std::size_t pix = saliency.ranking[done];
      for (std::size_t c = 0; c < g.channels; ++c) {
        current[c * g.plane() + pix] = source[c * g.plane() + pix];
      }
    }
    curve.push_back(model.Forward(current).probs[target]);
  }
  return curve;
}

double Auc(const std::vector<double>& curve) {
  if (curve.size() < 2) throw Error("auc needs at least two curve points");
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    area += 0.5 * (curve[i] + curve[i + 1]);
  }
  return area / static_cast<double>(curve.size() - 1);
}

std::vector<double> NormalizeCurve(const std::vector<double>& curve,
                                   double p_orig, double p_blur,
                                   double epsilon) {
  std::vector<double> out(curve.size(), 0.0);
  // No dynamic range between the two references: nothing to normalize.
  if (!(p_orig - p_blur > epsilon)) return out;
  const double denom = p_orig - p_blur;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out[i] = std::clamp((curve[i] - p_blur) / denom, 0.0, 1.0);
  }
  return out;
}

std::vector<double> DensityResponse(const SaliencyMap& saliency,
                                    std::size_t steps, double epsilon) {
  const std::size_t pixels = saliency.values.size();
  // Summed in rank order, like the running mass below, so DR_N is exactly 1.
  double total = 0.0;
  for (std::size_t idx : saliency.ranking) total += saliency.values[idx];
  const double denom = std::max(total, epsilon);
  std::vector<double> dr(steps + 1, 0.0);
  double mass = 0.0;
  std::size_t done = 0;
  for (std::size_t s = 1; s <= steps; ++s) {
    const std::size_t upto = PixelsAtStep(s, steps, pixels);
    for (; done < upto; ++done) mass += saliency.values[saliency.ranking[done]];
    dr[s] = std::min(mass / denom, 1.0);
  }
  return dr;
}

namespace {

double Mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

MasResult MasFromCurves(const std::vector<double>& density,
                        const std::vector<double>& response_ins,
                        const std::vector<double>& response_del) {
  if (density.size() != response_ins.size() ||
      density.size() != response_del.size()) {
    throw ShapeError("mas: curves differ in length");
  }
  MasResult r;
  r.density = density;
  r.response_ins = response_ins;
  r.response_del = response_del;
  r.penalty_ins.resize(density.size());
  r.penalty_del.resize(density.size());
  for (std::size_t k = 0; k < density.size(); ++k) {
    r.penalty_ins[k] = std::abs(response_ins[k] - density[k]);
    r.penalty_del[k] = std::abs(response_del[k] - (1.0 - density[k]));
  }
  r.mas_ins = Mean(r.response_ins) - Mean(r.penalty_ins);
  r.mas_del = Mean(r.response_del) + Mean(r.penalty_del);
  return r;
}

MasResult Mas(const ModelGraph& model, const Tensor& x, std::size_t target,
              const Tensor& attribution, std::size_t steps,
              std::size_t kernel_size, double sigma) {
  if (attribution.shape() != x.shape()) {
    throw ShapeError("mas: attribution shape differs from input");
  }
  const SaliencyMap sal = ReduceSaliency(attribution);
  PerturbationSchedule sched;
  sched.baseline = BaselineKind::kGaussianBlur;
  sched.gaussian_size = kernel_size;
  sched.gaussian_sigma = sigma;
  sched.steps = steps;

  const double p_orig = model.Forward(x).probs[target];
  const double p_blur =
      model.Forward(PerturbationBaseline(x, sched)).probs[target];

  sched.direction = PerturbDirection::kInsertion;
  const auto ins = NormalizeCurve(PerturbationCurve(model, x, target, sal, sched),
                                  p_orig, p_blur);
  sched.direction = PerturbDirection::kDeletion;
  const auto del = NormalizeCurve(PerturbationCurve(model, x, target, sal, sched),
                                  p_orig, p_blur);
  return MasFromCurves(DensityResponse(sal, steps), ins, del);
}

double Infidelity(const ModelGraph& model, const Tensor& x, std::size_t target,
                  const Tensor& attribution, const InfidelityConfig& cfg) {
  if (attribution.shape() != x.shape()) {
    throw ShapeError("infidelity: attribution shape differs from input");
  }
  if (cfg.samples < 1) throw Error("infidelity: samples must be >= 1");
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, cfg.sigma);
  const double f0 = ScoreValue(model, x, target, cfg.score);
  double acc = 0.0;
  for (std::size_t m = 0; m < cfg.samples; ++m) {
    Tensor delta = Tensor::ZerosLike(x);
    for (double& d : delta.mutable_values()) d = noise(rng);
    const double predicted = Dot(delta, attribution);
    const double actual = f0 - ScoreValue(model, Sub(x, delta), target, cfg.score);
    const double gap = predicted - actual;
    acc += gap * gap;
  }
  return acc / static_cast<double>(cfg.samples);
}

double Sparseness(const Tensor& attribution, double epsilon) {
  std::vector<double> a(attribution.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(attribution[i]);
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    weighted += static_cast<double>(i + 1) * a[i];
    total += a[i];
  }
  const double gini = 2.0 * weighted / (n * total + epsilon) - (n + 1.0) / n;
  return std::clamp(gini, 0.0, 1.0);
}

namespace {

Tensor UnitNormalized(const Tensor& t, double epsilon) {
  return Scale(t, 1.0 / (Norm2(t) + epsilon));
}

}  // namespace

double MaxSensitivity(const AttributionFn& method, const Tensor& x,
                      const SensitivityConfig& cfg) {
  if (cfg.samples < 1) throw Error("max_sensitivity: samples must be >= 1");
  if (!(cfg.radius >= 0.0)) throw Error("max_sensitivity: radius must be >= 0");
  const Tensor base = UnitNormalized(method(x), cfg.epsilon);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(-cfg.radius, cfg.radius);
  double worst = 0.0;
  for (std::size_t m = 0; m < cfg.samples; ++m) {
    Tensor delta = Tensor::ZerosLike(x);
    if (cfg.radius > 0.0) {
      for (double& d : delta.mutable_values()) d = unif(rng);
    }
    const Tensor moved = UnitNormalized(method(Add(x, delta)), cfg.epsilon);
    const double ratio =
        Norm2(Sub(base, moved)) / (Norm2(delta) + cfg.epsilon);
    worst = std::max(worst, ratio);
  }
  return worst;
}

double TuningScore(double ins_auc, double del_auc, double infidelity,
                   const TuningWeights& w) {
  const double fid = std::exp(-w.k * infidelity);
  const double denom = w.w_ins / (ins_auc + w.epsilon) +
                       w.w_del / ((1.0 - del_auc) + w.epsilon) +
                       w.w_fid / (fid + w.epsilon);
  return (w.w_ins + w.w_del + w.w_fid) / denom;
}

MetricsReport EvaluateMetrics(const ModelGraph& model, const Tensor& x,
                              std::size_t target, const Tensor& attribution,
                              const MetricsConfig& cfg,
                              const AttributionFn* method) {
  model.CheckInput(x);
  model.CheckClass(target);
  if (attribution.shape() != x.shape()) {
    throw ShapeError(fmt::format("attribution shape {} does not match input {}",
                                 ShapeToString(attribution.shape()),
                                 ShapeToString(x.shape())));
  }
  MetricsReport rep;
  const SaliencyMap sal = ReduceSaliency(attribution);
  PerturbationSchedule sched;
  sched.steps = cfg.steps;
  rep.p_orig = model.Forward(x).probs[target];
  rep.p_blur = model.Forward(BlurReference(x)).probs[target];

  sched.direction = PerturbDirection::kInsertion;
  rep.ins_curve = PerturbationCurve(model, x, target, sal, sched);
  sched.direction = PerturbDirection::kDeletion;
  rep.del_curve = PerturbationCurve(model, x, target, sal, sched);
  rep.ins_auc = Auc(rep.ins_curve);
  rep.del_auc = Auc(rep.del_curve);
  rep.ins_auc_norm =
      Auc(NormalizeCurve(rep.ins_curve, rep.p_orig, rep.p_blur, cfg.epsilon));
  rep.del_auc_norm =
      Auc(NormalizeCurve(rep.del_curve, rep.p_orig, rep.p_blur, cfg.epsilon));

  rep.mas = Mas(model, x, target, attribution, cfg.steps, cfg.mas_kernel,
                cfg.mas_sigma);
  rep.mas_ins = rep.mas.mas_ins;
  rep.mas_del = rep.mas.mas_del;
  rep.infidelity = Infidelity(model, x, target, attribution, cfg.infidelity);
  rep.sparseness = Sparseness(attribution);
  if (method != nullptr) {
    rep.max_sensitivity = MaxSensitivity(*method, x, cfg.sensitivity);
  }
  rep.tuning_score = TuningScore(rep.ins_auc, rep.del_auc, rep.infidelity);
  return rep;
}

}  // namespace fringe
