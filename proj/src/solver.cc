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

#include "fringe/solver.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

namespace fringe {

std::string_view PreconditionerName(Preconditioner p) {
  switch (p) {
    case Preconditioner::kNone:
      return "none";
    case Preconditioner::kDiagonal:
      return "diagonal";
    case Preconditioner::kSobolevBlur:
      return "sobolev_blur";
  }
  return "?";
}

Preconditioner ParsePreconditioner(std::string_view name) {
  if (name == "none") return Preconditioner::kNone;
  if (name == "diagonal") return Preconditioner::kDiagonal;
  if (name == "sobolev_blur") return Preconditioner::kSobolevBlur;
  throw Error(fmt::format("unknown preconditioner '{}'", name));
}

void SolveConfig::Validate() const {
  if (!(lambda > 0.0)) throw Error("solve config: lambda must be > 0");
  if (!(gamma_step >= 0.0) || !(gamma_prior >= 0.0)) {
    throw Error("solve config: gamma coefficients must be >= 0");
  }
  if (max_cg_iters < 1) throw Error("solve config: max_cg_iters must be >= 1");
  if (!(cg_tol > 0.0)) throw Error("solve config: cg_tol must be > 0");
  if (!(blur_sigma > 0.0)) throw Error("solve config: blur_sigma must be > 0");
}

SmoothingOperator::SmoothingOperator(const Shape& input_shape)
    : shape_(input_shape), grid_(GridFromShape(input_shape)) {}

Tensor SmoothingOperator::Apply(const Tensor& u) const {
  if (!grid_) throw Error("smoothing operator is inactive for non-grid inputs");
  return Laplacian(*grid_, u);
}

Tensor SmoothingOperator::ApplyTranspose(const Tensor& w) const {
  if (!grid_) throw Error("smoothing operator is inactive for non-grid inputs");
  return LaplacianTranspose(*grid_, w);
}

Tensor SmoothingOperator::ApplyNormal(const Tensor& u) const {
  return ApplyTranspose(Apply(u));
}

Tensor SystemApply(const PullbackContext& ctx, const SmoothingOperator& op,
                   const SolveConfig& cfg, const Tensor& v) {
  Tensor out = Axpy(ctx.MetricApply(v), cfg.lambda, v);
  if (cfg.gamma_step > 0.0 && op.active()) {
    out = Axpy(out, cfg.gamma_step, op.ApplyNormal(v));
  }
  return out;
}

Tensor ApplyPreconditioner(const SmoothingOperator& op, const SolveConfig& cfg,
                           const Tensor& r) {
  switch (cfg.preconditioner) {
    case Preconditioner::kNone:
      return r;
    case Preconditioner::kDiagonal:
      return Scale(r, 1.0 / cfg.lambda);
    case Preconditioner::kSobolevBlur:
      if (op.active() && cfg.gamma_step > 0.0) {
        const auto radius =
            static_cast<std::size_t>(std::ceil(3.0 * cfg.blur_sigma));
        return Scale(GaussianBlur(op.grid(), r, cfg.blur_sigma, radius),
                     1.0 / cfg.lambda);
      }
      return Scale(r, 1.0 / cfg.lambda);
  }
  return r;
}

SolveResult PcgSolve(const PullbackContext& ctx, const SmoothingOperator& op,
                     const SolveConfig& cfg, const Tensor& rhs,
                     const Tensor* warm_start) {
  cfg.Validate();
  rhs.CheckFinite("pcg rhs");
  auto apply = [&](const Tensor& v) { return SystemApply(ctx, op, cfg, v); };
  auto precondition = [&](const Tensor& r) {
    return ApplyPreconditioner(op, cfg, r);
  };

  SolveResult result;
  const double rhs_norm = Norm2(rhs);
  if (rhs_norm == 0.0) {
    result.v = Tensor::ZerosLike(rhs);
    result.converged = true;
    return result;
  }
  const double target = cfg.cg_tol * rhs_norm;

  Tensor x = Tensor::ZerosLike(rhs);
  Tensor r = rhs;
  if (warm_start != nullptr && warm_start->SameShape(rhs) &&
      warm_start->AllFinite()) {
    x = *warm_start;
    r = Sub(rhs, apply(x));
  }
  double r_norm = Norm2(r);
  if (r_norm <= target) {
    result.v = std::move(x);
    result.final_residual_norm = r_norm;
    result.converged = true;
    return result;
  }

  Tensor z = precondition(r);
  double rz = Dot(r, z);
  if (!(rz > 0.0)) {  // preconditioner not positive on r; fall back to CG
    z = r;
    rz = Dot(r, r);
  }
  Tensor p = z;
  std::size_t it = 0;
  bool converged = false;
  while (it < cfg.max_cg_iters) {
    const Tensor ap = apply(p);
    const double pap = Dot(p, ap);
    if (!std::isfinite(pap)) {
      throw NonFiniteError(fmt::format("pcg: non-finite curvature at iteration {}", it));
    }
    if (pap <= 0.0) break;
    const double alpha = rz / pap;
    x = Axpy(x, alpha, p);
    Tensor r_next = Axpy(r, -alpha, ap);
    ++it;
    if (!x.AllFinite() || !r_next.AllFinite()) {
      throw NonFiniteError(fmt::format("pcg: non-finite iterate at iteration {}", it));
    }
    if (Norm2(r_next) <= target) {
      // Confirm against the true residual before declaring convergence.
      Tensor r_true = Sub(rhs, apply(x));
      if (Norm2(r_true) <= target) {
        r = std::move(r_true);
        converged = true;
        break;
      }
      r = std::move(r_true);
      z = precondition(r);
      rz = Dot(r, z);
      if (!(rz > 0.0)) {
        z = r;
        rz = Dot(r, r);
      }
      p = z;
      continue;
    }
    Tensor z_next = precondition(r_next);
    double rz_next = Dot(r_next, z_next);
    if (!(rz_next > 0.0)) {
      z_next = r_next;
      rz_next = Dot(r_next, r_next);
    }
    // Polak-Ribiere form keeps the recurrence stable for a preconditioner
    // that is only approximately symmetric.
    const double beta =
        std::max(0.0, (rz_next - Dot(z_next, r)) / rz);
    p = Axpy(z_next, beta, p);
    r = std::move(r_next);
    rz = rz_next;
  }
  if (!converged) r = Sub(rhs, apply(x));
  result.v = std::move(x);
  result.iterations_used = it;
  result.final_residual_norm = Norm2(r);
  result.converged = converged || result.final_residual_norm <= target;
  return result;
}

}  // namespace fringe
