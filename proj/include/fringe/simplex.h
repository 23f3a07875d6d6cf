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

// Fisher-Rao geometry of the categorical simplex.
//
// Under psi(p) = sqrt(p) the simplex maps onto the positive orthant of the
// unit sphere, and Fisher-Rao geodesics become great-circle arcs. Distances
// are measured with the factor-2 convention d = 2 acos(<sqrt p0, sqrt p1>),
// so the largest distance between two distributions is pi.

#ifndef FRINGE_SIMPLEX_H_
#define FRINGE_SIMPLEX_H_

#include <cstddef>
#include <vector>

#include "fringe/tensor.h"

namespace fringe {

// Geodesics shorter than this (in radians of sphere angle) are treated as a
// single point.
inline constexpr double kDegenerateTheta = 1e-9;
inline constexpr std::size_t kDefaultStepCap = 512;

// A validated categorical distribution: nonnegative, sums to 1 +- 1e-10.
class SimplexPoint {
 public:
  explicit SimplexPoint(Tensor p);

  static SimplexPoint Uniform(std::size_t classes);

  const Tensor& probs() const { return p_; }
  std::size_t size() const { return p_.size(); }
  // Elementwise square root, a unit vector.
  Tensor SqrtEmbedding() const;
  // True when every entry is strictly positive.
  bool Interior() const;

 private:
  Tensor p_;
};

struct SimplexPath {
  std::vector<Tensor> sqrt_waypoints;     // s_k, k = 0..T
  std::vector<Tensor> simplex_waypoints;  // q_k = s_k * s_k
  std::size_t steps = 0;                  // T
  double theta = 0.0;                     // sphere angle between endpoints
  double total_distance = 0.0;            // 2 * theta
};

// Angle between sqrt(p0) and sqrt(p1) on the unit sphere. The inner product
// is clamped into [-1, 1] before acos.
double SphereAngle(const SimplexPoint& p0, const SimplexPoint& p1);

double FisherRaoDistance(const SimplexPoint& p0, const SimplexPoint& p1);

// Great-circle interpolation between sqrt(p0) and sqrt(p1). When the two
// points are closer than kDegenerateTheta the constant path sqrt(p0) is
// returned for every alpha.
Tensor Slerp(const SimplexPoint& p0, const SimplexPoint& p1, double alpha);

// ceil(d_FR(p0, q) / sqrt(2 tau)), clamped to [1, step_cap].
std::size_t SyncSteps(const SimplexPoint& p0, const SimplexPoint& q_star,
                      double tau, std::size_t step_cap = kDefaultStepCap);
// Same rule from a precomputed distance.
std::size_t SyncStepsFromDistance(double distance, double tau,
                                  std::size_t step_cap = kDefaultStepCap);

SimplexPath BuildWaypoints(const SimplexPoint& p0, const SimplexPoint& q_star,
                           std::size_t steps);

}  // namespace fringe

#endif  // FRINGE_SIMPLEX_H_
