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

#include "fringe/driver.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <utility>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "fringe/pullback.h"

namespace fringe {

TrajectoryError::TrajectoryError(std::size_t step, const std::string& what)
    : Error(fmt::format("step {}: {}", step, what)), step_(step) {}

std::string_view VariantName(Variant v) {
  switch (v) {
    case Variant::kFull:
      return "full";
    case Variant::kEuclideanTracking:
      return "euclidean_tracking";
    case Variant::kUnregularizedFr:
      return "unregularized_fr";
    case Variant::kGammaStepOnly:
      return "gamma_step_only";
    case Variant::kGammaPriorOnly:
      return "gamma_prior_only";
    case Variant::kMaxentPriorControl:
      return "maxent_prior_control";
  }
  return "?";
}

Variant ParseVariant(std::string_view name) {
  for (Variant v :
       {Variant::kFull, Variant::kEuclideanTracking, Variant::kUnregularizedFr,
        Variant::kGammaStepOnly, Variant::kGammaPriorOnly,
        Variant::kMaxentPriorControl}) {
    if (VariantName(v) == name) return v;
  }
  throw Error(fmt::format("unknown variant '{}'", name));
}

std::string_view ScoreTargetName(ScoreTarget s) {
  return s == ScoreTarget::kLogit ? "logit" : "probability";
}

ScoreTarget ParseScoreTarget(std::string_view name) {
  if (name == "logit") return ScoreTarget::kLogit;
  if (name == "probability") return ScoreTarget::kProbability;
  throw Error(fmt::format("unknown score target '{}'", name));
}

std::string_view ActiveConstraintName(ActiveConstraint c) {
  switch (c) {
    case ActiveConstraint::kEtaMax:
      return "eta_max";
    case ActiveConstraint::kKl:
      return "kl";
    case ActiveConstraint::kEuclidean:
      return "euclidean";
  }
  return "?";
}

void FringeConfig::Validate() const {
  if (!(tau > 0.0)) throw Error("fringe config: tau must be > 0");
  if (!(eta_max > 0.0)) throw Error("fringe config: eta_max must be > 0");
  if (delta_euc && !(*delta_euc > 0.0)) {
    throw Error("fringe config: delta_euc must be > 0 when enabled");
  }
  if (!(epsilon > 0.0)) throw Error("fringe config: epsilon must be > 0");
  if (step_cap < 1) throw Error("fringe config: step_cap must be >= 1");
  solve.Validate();
}

double TrajectoryRecord::MeanTrackingError() const {
  if (steps.empty()) return 0.0;
  double acc = 0.0;
  for (const StepRecord& s : steps) acc += s.tracking_error;
  return acc / static_cast<double>(steps.size());
}

double TrajectoryRecord::MaxTrackingError() const {
  double m = 0.0;
  for (const StepRecord& s : steps) m = std::max(m, s.tracking_error);
  return m;
}

double ScoreValue(const ModelGraph& model, const Tensor& x, std::size_t target,
                  ScoreTarget score) {
  model.CheckClass(target);
  const PredictiveState st = model.Forward(x);
  return score == ScoreTarget::kLogit ? st.logits[target] : st.probs[target];
}

Tensor ScoreGradient(const ModelGraph& model, const Tensor& x,
                     std::size_t target, ScoreTarget score) {
  if (score == ScoreTarget::kLogit) return model.GradScore(x, target);
  model.CheckClass(target);
  // d p_t / d z_j = p_t (delta_tj - p_j)
  const Tensor p = model.Forward(x).probs;
  Tensor u(p.shape());
  for (std::size_t j = 0; j < p.size(); ++j) {
    u[j] = p[target] * ((j == target ? 1.0 : 0.0) - p[j]);
  }
  return model.Vjp(x, u);
}

double AlignmentLoss(const SimplexPoint& p, const Tensor& s) {
  return 1.0 - Dot(p.SqrtEmbedding(), s);
}

namespace {

// d/dz of 1 - <sqrt(softmax z), s> given p = softmax(z).
Tensor AlignmentLogitCotangent(const Tensor& p, const Tensor& s) {
  double inner = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) inner += s[c] * std::sqrt(p[c]);
  Tensor u(p.shape());
  for (std::size_t j = 0; j < p.size(); ++j) {
    u[j] = -0.5 * (s[j] * std::sqrt(p[j]) - p[j] * inner);
  }
  return u;
}

struct EffectiveTerms {
  double gamma_step = 0.0;
  double gamma_prior = 0.0;
  bool uses_metric = true;
};

EffectiveTerms ResolveVariant(const FringeConfig& cfg, bool grid_input) {
  EffectiveTerms e;
  e.gamma_step = cfg.solve.gamma_step;
  e.gamma_prior = cfg.solve.gamma_prior;
  switch (cfg.variant) {
    case Variant::kFull:
      break;
    case Variant::kEuclideanTracking:
      e.gamma_step = 0.0;
      e.gamma_prior = 0.0;
      e.uses_metric = false;
      break;
    case Variant::kUnregularizedFr:
      e.gamma_step = 0.0;
      e.gamma_prior = 0.0;
      break;
    case Variant::kGammaStepOnly:
      e.gamma_prior = 0.0;
      break;
    case Variant::kGammaPriorOnly:
      e.gamma_step = 0.0;
      break;
    case Variant::kMaxentPriorControl:
      e.gamma_step = 0.0;
      e.uses_metric = false;
      break;
  }
  if (!grid_input && (e.gamma_step > 0.0 || e.gamma_prior > 0.0)) {
    spdlog::warn(
        "input has no spatial grid; smoothing coefficients are ignored");
    e.gamma_step = 0.0;
    e.gamma_prior = 0.0;
  }
  return e;
}

SimplexPoint ReferenceFor(const FringeConfig& cfg, std::size_t classes) {
  if (!cfg.reference) return SimplexPoint::Uniform(classes);
  SimplexPoint q(*cfg.reference);
  if (q.size() != classes) {
    throw ShapeError("reference distribution length differs from class count");
  }
  if (!q.Interior()) {
    throw Error("reference distribution must lie in the open simplex");
  }
  return q;
}

}  // namespace

Tensor AlignmentGrad(const ModelGraph& model, const Tensor& x, const Tensor& s) {
  const Tensor p = model.Forward(x).probs;
  if (s.size() != p.size()) throw ShapeError("alignment_grad: waypoint length mismatch");
  return model.Vjp(x, AlignmentLogitCotangent(p, s));
}

StepSize ComputeStepSize(const FringeConfig& cfg, double fisher_norm_sq,
                         double v_norm) {
  const double eta_kl =
      std::sqrt(2.0 * cfg.tau / (std::max(fisher_norm_sq, 0.0) + cfg.epsilon));
  const double eta_euc = cfg.delta_euc
                             ? *cfg.delta_euc / (std::max(v_norm, 0.0) + cfg.epsilon)
                             : std::numeric_limits<double>::infinity();
  if (cfg.eta_max <= eta_kl && cfg.eta_max <= eta_euc) {
    return {cfg.eta_max, ActiveConstraint::kEtaMax};
  }
  if (eta_kl <= eta_euc) return {eta_kl, ActiveConstraint::kKl};
  return {eta_euc, ActiveConstraint::kEuclidean};
}

double CompletenessResidual(const Tensor& attribution, double delta_score,
                            double epsilon) {
  return std::abs(Sum(attribution) - delta_score) /
         (std::abs(delta_score) + epsilon);
}

std::string TensorDigest(const Tensor& t) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  for (std::size_t e : t.shape()) {
    const std::uint64_t v = e;
    mix(&v, sizeof(v));
  }
  for (double d : t.values()) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof(bits));
    mix(&bits, sizeof(bits));
  }
  return fmt::format("{:016x}", h);
}

AttributionResult RunFringe(const ModelGraph& model, const Tensor& x,
                            std::size_t target, const FringeConfig& cfg) {
  cfg.Validate();
  model.CheckInput(x);
  model.CheckClass(target);
  x.CheckFinite("fringe input");

  AttributionResult res;
  res.method = fmt::format("fringe:{}", VariantName(cfg.variant));
  res.target = target;
  res.config = cfg;

  const SimplexPoint p0(model.Forward(x).probs);
  const SimplexPoint q_star = ReferenceFor(cfg, model.class_count());
  const double theta = SphereAngle(p0, q_star);
  res.geodesic_length = 2.0 * theta;
  res.score_start = ScoreValue(model, x, target, cfg.score_target);

  if (theta < kDegenerateTheta) {
    // The prediction already sits on the reference; nothing to attribute.
    res.degenerate = true;
    res.planned_steps = 1;
    res.attribution = Tensor::ZerosLike(x);
    res.score_end = res.score_start;
    res.endpoint = x;
    res.endpoint_digest = TensorDigest(x);
    res.endpoint_kl = KlDivergence(p0.probs(), q_star.probs());
    res.completeness_residual =
        CompletenessResidual(res.attribution, 0.0, cfg.epsilon);
    if (cfg.record_states) res.trajectory.states.push_back(x);
    return res;
  }

  const std::size_t steps =
      SyncStepsFromDistance(res.geodesic_length, cfg.tau, cfg.step_cap);
  res.planned_steps = steps;
  const SimplexPath path = BuildWaypoints(p0, q_star, steps);

  const SmoothingOperator smoother(x.shape());
  const EffectiveTerms terms = ResolveVariant(cfg, smoother.active());
  SolveConfig solve = cfg.solve;
  solve.gamma_step = terms.gamma_step;
  solve.gamma_prior = terms.gamma_prior;

  Tensor xk = x;
  Tensor grad_k = ScoreGradient(model, xk, target, cfg.score_target);
  Tensor a_path = Tensor::ZerosLike(x);
  std::optional<Tensor> warm;
  if (cfg.record_states) res.trajectory.states.push_back(xk);
  res.trajectory.steps.reserve(steps);

  for (std::size_t k = 0; k < steps; ++k) {
    try {
      const PullbackContext ctx(model, xk);
      const Tensor& pk = ctx.state().probs;
      // Each step aims at the next waypoint on the geodesic.
      const Tensor& s_next = path.sqrt_waypoints[k + 1];

      StepRecord rec;
      rec.probs = pk;
      rec.loss = AlignmentLoss(SimplexPoint(pk), s_next);
      const Tensor g = model.Vjp(xk, AlignmentLogitCotangent(pk, s_next));

      Tensor prior_term;
      if (terms.gamma_prior > 0.0) {
        prior_term = Scale(smoother.ApplyNormal(xk), terms.gamma_prior);
      }

      Tensor v;
      StepSize step;
      if (!terms.uses_metric) {
        v = terms.gamma_prior > 0.0 ? Add(g, prior_term) : g;
        step = {cfg.eta_max, ActiveConstraint::kEtaMax};
      } else {
        const Tensor rhs = terms.gamma_prior > 0.0 ? Add(g, prior_term) : g;
        SolveResult sol =
            PcgSolve(ctx, smoother, solve, rhs, warm ? &*warm : nullptr);
        rec.cg_iterations = sol.iterations_used;
        rec.cg_converged = sol.converged;
        rec.cg_residual = sol.final_residual_norm;
        v = std::move(sol.v);
        rec.fisher_norm_sq = ctx.MetricNormSq(v);
        step = ComputeStepSize(cfg, rec.fisher_norm_sq, Norm2(v));
      }
      rec.eta = step.eta;
      rec.active = step.active;

      Tensor x_next = Axpy(xk, -step.eta, v);
      if (!x_next.AllFinite()) {
        throw TrajectoryError(k, "iterate became non-finite");
      }
      const Tensor dx = Sub(x_next, xk);
      rec.euclid_step = Norm2(dx);

      Tensor grad_next = ScoreGradient(model, x_next, target, cfg.score_target);
      auto acc = a_path.mutable_values();
      for (std::size_t i = 0; i < acc.size(); ++i) {
        acc[i] += 0.5 * (grad_k[i] + grad_next[i]) * dx[i];
      }
      if (!a_path.AllFinite()) {
        throw TrajectoryError(k, "attribution accumulator became non-finite");
      }

      const Tensor p_next = model.Forward(x_next).probs;
      rec.tracking_error = FisherRaoDistance(SimplexPoint(p_next),
                                             SimplexPoint(path.simplex_waypoints[k + 1]));
      rec.kl_step = KlDivergence(p_next, pk);
      res.trajectory.metric_applications += ctx.apply_count();
      res.trajectory.steps.push_back(std::move(rec));
      if (cfg.record_states) res.trajectory.states.push_back(x_next);

      warm = std::move(v);
      xk = std::move(x_next);
      grad_k = std::move(grad_next);
    } catch (const NonFiniteError& e) {
      throw TrajectoryError(k, e.what());
    }
  }

  res.attribution = Scale(a_path, -1.0);
  res.score_end = ScoreValue(model, xk, target, cfg.score_target);
  res.completeness_residual = CompletenessResidual(
      res.attribution, res.score_start - res.score_end, cfg.epsilon);
  res.endpoint_kl = KlDivergence(model.Forward(xk).probs, q_star.probs());
  res.endpoint_digest = TensorDigest(xk);
  res.endpoint = std::move(xk);
  return res;
}

AttributionResult RunIgReference(const ModelGraph& model, const Tensor& x,
                                 std::size_t target, const Tensor& baseline,
                                 std::size_t steps, ScoreTarget score,
                                 double epsilon) {
  model.CheckInput(x);
  model.CheckInput(baseline);
  model.CheckClass(target);
  if (steps < 1) throw Error("integrated gradients needs at least one step");

  AttributionResult res;
  res.method = "ig";
  res.target = target;
  res.planned_steps = steps;

  const Tensor delta = Sub(x, baseline);
  Tensor avg = Tensor::ZerosLike(x);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double alpha = static_cast<double>(i) / static_cast<double>(steps);
    const Tensor point = Axpy(baseline, alpha, delta);
    const Tensor g = ScoreGradient(model, point, target, score);
    const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
    avg = Axpy(avg, w / static_cast<double>(steps), g);
  }
  res.attribution = Mul(delta, avg);
  res.score_start = ScoreValue(model, x, target, score);
  res.score_end = ScoreValue(model, baseline, target, score);
  res.completeness_residual = CompletenessResidual(
      res.attribution, res.score_start - res.score_end, epsilon);
  const Tensor pb = model.Forward(baseline).probs;
  res.endpoint_kl = KlDivergence(
      pb, Tensor::Filled(pb.shape(), 1.0 / static_cast<double>(pb.size())));
  res.endpoint = baseline;
  res.endpoint_digest = TensorDigest(baseline);
  return res;
}

}  // namespace fringe
