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

// Regularized natural-gradient solves
//
//   (G(x) + lambda I + gamma_step L^T L) v = rhs
//
// by truncated preconditioned conjugate gradients. L is the 5-point
// Laplacian of the input grid.

#ifndef FRINGE_SOLVER_H_
#define FRINGE_SOLVER_H_

#include <cstddef>
#include <optional>
#include <string_view>

#include "fringe/grid.h"
#include "fringe/pullback.h"
#include "fringe/tensor.h"

namespace fringe {

enum class Preconditioner { kNone, kDiagonal, kSobolevBlur };

std::string_view PreconditionerName(Preconditioner p);
Preconditioner ParsePreconditioner(std::string_view name);

struct SolveConfig {
  double lambda = 1e-3;
  double gamma_step = 0.0;
  double gamma_prior = 0.0;
  std::size_t max_cg_iters = 20;
  double cg_tol = 1e-4;
  Preconditioner preconditioner = Preconditioner::kSobolevBlur;
  double blur_sigma = 1.0;

  void Validate() const;
};

// Laplacian smoothing on the input grid. Inputs without spatial structure
// (rank-1 vectors) get an inactive operator; callers must not request
// smoothing terms from it.
class SmoothingOperator {
 public:
  explicit SmoothingOperator(const Shape& input_shape);

  bool active() const { return grid_.has_value(); }
  const GridShape& grid() const { return *grid_; }

  Tensor Apply(const Tensor& u) const;           // L u
  Tensor ApplyTranspose(const Tensor& w) const;  // L^T w
  Tensor ApplyNormal(const Tensor& u) const;     // L^T L u

 private:
  Shape shape_;
  std::optional<GridShape> grid_;
};

struct SolveResult {
  Tensor v;
  std::size_t iterations_used = 0;
  double final_residual_norm = 0.0;
  bool converged = false;
};

// G(x) v + lambda v + gamma_step L^T L v. The smoothing term is skipped when
// gamma_step is zero or the operator is inactive.
Tensor SystemApply(const PullbackContext& ctx, const SmoothingOperator& op,
                   const SolveConfig& cfg, const Tensor& v);

// Applies M^{-1}: identity, 1/lambda scaling, or Gaussian blur then
// 1/lambda scaling. The blur only engages when the operator is active and
// gamma_step > 0; otherwise it falls back to diagonal scaling.
Tensor ApplyPreconditioner(const SmoothingOperator& op, const SolveConfig& cfg,
                           const Tensor& r);

// Flexible (Polak-Ribiere) PCG. Stops when the true residual satisfies
// ||A v - rhs|| <= cg_tol ||rhs||, or after max_cg_iters iterations, in which
// case the partial iterate is returned with converged = false. Throws
// NonFiniteError if the iteration produces NaN/Inf.
SolveResult PcgSolve(const PullbackContext& ctx, const SmoothingOperator& op,
                     const SolveConfig& cfg, const Tensor& rhs,
                     const Tensor* warm_start = nullptr);

}  // namespace fringe

#endif  // FRINGE_SOLVER_H_
