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

#include "fringe/simplex.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

namespace fringe {

SimplexPoint::SimplexPoint(Tensor p) : p_(std::move(p)) {
  if (p_.rank() != 1 || p_.size() < 2) {
    throw ShapeError("simplex point must be a vector with at least 2 entries");
  }
  double total = 0.0;
  for (double v : p_.values()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(fmt::format("simplex point has invalid entry {}", v));
    }
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw Error(fmt::format("simplex point sums to {:.17g}, not 1", total));
  }
}

SimplexPoint SimplexPoint::Uniform(std::size_t classes) {
  return SimplexPoint(
      Tensor::Filled(Shape{classes}, 1.0 / static_cast<double>(classes)));
}

Tensor SimplexPoint::SqrtEmbedding() const {
  Tensor s(p_.shape());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sqrt(p_[i]);
  return s;
}

bool SimplexPoint::Interior() const {
  return std::all_of(p_.values().begin(), p_.values().end(),
                     [](double v) { return v > 0.0; });
}

double SphereAngle(const SimplexPoint& p0, const SimplexPoint& p1) {
  if (p0.size() != p1.size()) throw ShapeError("simplex points differ in length");
  // Chord form of acos(<psi0, psi1>); exact zero for identical points and
  // well conditioned for nearby ones.
  double chord_sq = 0.0;
  for (std::size_t i = 0; i < p0.size(); ++i) {
    const double d = std::sqrt(p0.probs()[i]) - std::sqrt(p1.probs()[i]);
    chord_sq += d * d;
  }
  return 2.0 * std::asin(std::clamp(0.5 * std::sqrt(chord_sq), 0.0, 1.0));
}

double FisherRaoDistance(const SimplexPoint& p0, const SimplexPoint& p1) {
  return 2.0 * SphereAngle(p0, p1);
}

namespace {

Tensor SlerpWithAngle(const Tensor& psi0, const Tensor& psi1, double theta,
                      double alpha) {
  if (theta < kDegenerateTheta) return psi0;
  if (alpha == 0.0) return psi0;
  if (alpha == 1.0) return psi1;
  const double inv = 1.0 / std::sin(theta);
  const double w0 = std::sin((1.0 - alpha) * theta) * inv;
  const double w1 = std::sin(alpha * theta) * inv;
  Tensor s(psi0.shape());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = w0 * psi0[i] + w1 * psi1[i];
  return s;
}

}  // namespace

Tensor Slerp(const SimplexPoint& p0, const SimplexPoint& p1, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(fmt::format("slerp alpha {} outside [0, 1]", alpha));
  }
  return SlerpWithAngle(p0.SqrtEmbedding(), p1.SqrtEmbedding(),
                        SphereAngle(p0, p1), alpha);
}

std::size_t SyncStepsFromDistance(double distance, double tau,
                                  std::size_t step_cap) {
  if (!(tau > 0.0)) throw Error("sync_steps: tau must be positive");
  if (step_cap < 1) step_cap = 1;
  if (distance < 2.0 * kDegenerateTheta) return 1;
  const double nominal = std::ceil(distance / std::sqrt(2.0 * tau));
  if (!(nominal < static_cast<double>(step_cap))) return step_cap;
  return std::max<std::size_t>(1, static_cast<std::size_t>(nominal));
}

std::size_t SyncSteps(const SimplexPoint& p0, const SimplexPoint& q_star,
                      double tau, std::size_t step_cap) {
  return SyncStepsFromDistance(FisherRaoDistance(p0, q_star), tau, step_cap);
}

SimplexPath BuildWaypoints(const SimplexPoint& p0, const SimplexPoint& q_star,
                           std::size_t steps) {
  if (steps < 1) throw Error("build_waypoints: step count must be >= 1");
  SimplexPath path;
  path.steps = steps;
  path.theta = SphereAngle(p0, q_star);
  path.total_distance = 2.0 * path.theta;
  const Tensor psi0 = p0.SqrtEmbedding();
  const Tensor psi1 = q_star.SqrtEmbedding();
  path.sqrt_waypoints.reserve(steps + 1);
  path.simplex_waypoints.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double alpha = static_cast<double>(k) / static_cast<double>(steps);
    Tensor s = SlerpWithAngle(psi0, psi1, path.theta, alpha);
    path.simplex_waypoints.push_back(Mul(s, s));
    path.sqrt_waypoints.push_back(std::move(s));
  }
  return path;
}

}  // namespace fringe
