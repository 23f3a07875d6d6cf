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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/core.h>
#include <spdlog/spdlog.h>

#include "fringe/cli.h"
#include "fringe/driver.h"
#include "fringe/grid.h"
#include "fringe/io.h"
#include "fringe/metrics.h"
#include "fringe/pullback.h"
#include "fringe/simplex.h"
#include "fringe/solver.h"
#include "test_util.h"

namespace fringe {
namespace {

namespace fs = std::filesystem;
using testing::Basis;
using testing::ToEigen;

const std::string kRoot = FRINGE_SOURCE_DIR;

// Collects failed sub-checks for one criterion.
struct Outcome {
  std::vector<std::string> failures;
  std::string detail;

  void Check(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// 1: vjp/jvp against central differences, adjoint identity.
Outcome Autodiff() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  double worst_fd = 0.0, worst_adj = 0.0;
  std::uint64_t seed = 1;
  for (Activation act : {Activation::kTanh, Activation::kSoftplus}) {
    for (int i = 0; i < 5; ++i, ++seed) {
      const std::size_t n = 8 + 3 * i, c = 2 + i % 4;
      const ModelGraph m = testing::SmallMlp(n, c, seed, act, {10});
      const Tensor x = RandomNormal({n}, 100 + seed);
      const Eigen::MatrixXd fd = testing::JacobianFd(m, x);
      Eigen::MatrixXd jv(c, n), ju(c, n);
      for (std::size_t k = 0; k < n; ++k) jv.col(k) = ToEigen(m.Jvp(x, Basis({n}, k)));
      for (std::size_t k = 0; k < c; ++k) ju.row(k) = ToEigen(m.Vjp(x, Basis({c}, k))).transpose();
      worst_fd = std::max({worst_fd, testing::RelErr(jv, fd), testing::RelErr(ju, fd)});
      for (std::uint64_t d = 0; d < 5; ++d) {
        const Tensor u = RandomNormal({c}, 200 + d), v = RandomNormal({n}, 300 + d);
        worst_adj = std::max(worst_adj, testing::RelDiff(Dot(u, m.Jvp(x, v)), Dot(m.Vjp(x, u), v)));
      }
    }
  }
  const double secs = Seconds(start);
  out.Check(worst_fd <= 1e-4, "finite-difference mismatch");
  out.Check(worst_adj <= 1e-10, "adjoint mismatch");
  out.Check(secs < 5.0, "runtime");
  out.detail = fmt::format("10 MLPs, fd rel {:.2e} (<=1e-4), adjoint rel {:.2e} (<=1e-10), {:.2f}s (<5s)",
                           worst_fd, worst_adj, secs);
  return out;
}

// 2: dense pullback metric against J^T S J.
Outcome PullbackMetric() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0, asym = 0.0, min_eig = 0.0;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const std::size_t n = 12;
    const ModelGraph m = testing::SmallMlp(n, 5, s);
    const Tensor x = RandomNormal({n}, 40 + s);
    PullbackContext ctx(m, x);
    Eigen::MatrixXd g(n, n);
    for (std::size_t i = 0; i < n; ++i) g.col(i) = ToEigen(ctx.MetricApply(Basis({n}, i)));
    const Eigen::MatrixXd j = testing::JacobianFromJvp(m, x);
    const Eigen::VectorXd p = ToEigen(ctx.state().probs);
    const Eigen::MatrixXd sm = Eigen::MatrixXd(p.asDiagonal()) - p * p.transpose();
    worst = std::max(worst, (g - j.transpose() * sm * j).cwiseAbs().maxCoeff());
    asym = std::max(asym, (g - g.transpose()).cwiseAbs().maxCoeff());
    const Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
    min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues().minCoeff());
  }
  const double secs = Seconds(start);
  out.Check(worst <= 1e-8, "dense mismatch");
  out.Check(asym <= 1e-12, "asymmetric");
  out.Check(min_eig >= -1e-12, "not PSD");
  out.Check(secs < 5.0, "runtime");
  out.detail = fmt::format("max abs {:.2e} (<=1e-8), asym {:.2e}, min eig {:.2e} (>=-1e-12), {:.2f}s (<5s)",
                           worst, asym, min_eig, secs);
  return out;
}

// 3: KL against its quadratic model, 20 directions averaged.
Outcome KlQuadratic() {
  Outcome out;
  double worst_r1 = 0.0, worst_reduction = 1e300;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const ModelGraph m = testing::SmallMlp(8, 4, s);
    const Tensor x = RandomNormal({8}, 50 + s);
    PullbackContext ctx(m, x);
    double r1 = 0.0, r2 = 0.0;
    for (std::uint64_t d = 0; d < 20; ++d) {
      Tensor v = RandomNormal({8}, 1000 * s + d);
      v = Scale(v, 1.0 / Norm2(v));
      const double n2 = ctx.MetricNormSq(v);
      auto ratio = [&](double eta) {
        const double kl = KlDivergence(m.Forward(Axpy(x, -eta, v)).probs, ctx.state().probs);
        const double quad = 0.5 * eta * eta * n2;
        return std::fabs(kl - quad) / (quad + 1e-12);
      };
      r1 += ratio(1e-2) / 20;
      r2 += ratio(1e-3) / 20;
    }
    worst_r1 = std::max(worst_r1, r1);
    worst_reduction = std::min(worst_reduction, r1 / r2);
  }
  out.Check(worst_r1 <= 0.1, "ratio at 1e-2");
  out.Check(worst_reduction >= 30.0, "reduction");
  out.detail = fmt::format("ratio@1e-2 {:.3e} (<=0.1), reduction 1e-2->1e-3 {:.2f}x (>=30x)",
                           worst_r1, worst_reduction);
  return out;
}

// 4: geodesic suite.
Outcome Geodesic() {
  Outcome out;
  double norm_err = 0.0, spacing_err = 0.0;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const SimplexPoint p0(Softmax(RandomNormal({6}, s, 2.0)));
    const SimplexPoint p1(Softmax(RandomNormal({6}, 20 + s, 2.0)));
    for (int i = 0; i <= 10; ++i) {
      norm_err = std::max(norm_err, std::fabs(Norm2(Slerp(p0, p1, i / 10.0)) - 1.0));
    }
    const SimplexPath path = BuildWaypoints(p0, p1, 16);
    const double want = path.theta / 16;
    for (std::size_t k = 1; k < path.sqrt_waypoints.size(); ++k) {
      const double got = SphereAngle(SimplexPoint(path.simplex_waypoints[k - 1]),
                                     SimplexPoint(path.simplex_waypoints[k]));
      spacing_err = std::max(spacing_err, std::fabs(got - want));
    }
  }
  const double d = FisherRaoDistance(SimplexPoint(Tensor({4}, {1, 0, 0, 0})), SimplexPoint::Uniform(4));
  const double d_err = std::fabs(d - 2.0 * std::numbers::pi / 3.0);
  const std::size_t t = SyncStepsFromDistance(std::numbers::pi, 5e-4);
  out.Check(norm_err <= 1e-10, "slerp norm");
  out.Check(spacing_err <= 1e-9, "spacing");
  out.Check(d_err <= 1e-12, "distance");
  out.Check(t == 100, "sync steps");
  out.detail = fmt::format("slerp norm {:.1e}, spacing {:.1e}, |d-2pi/3| {:.1e}, T={}",
                           norm_err, spacing_err, d_err, t);
  return out;
}

const Shape kGrid{1, 2, 5};

ModelGraph GridMlp(std::uint64_t seed) {
  MlpSpec spec;
  spec.input_shape = kGrid;
  spec.hidden = {8};
  spec.seed = seed;
  spec.weight_scale = 1.5;
  return MakeRandomMlp(spec);
}

Eigen::MatrixXd DenseSystem(const ModelGraph& m, const Tensor& x, const SolveConfig& cfg) {
  const std::size_t n = x.size();
  const Eigen::MatrixXd j = testing::JacobianFromJvp(m, x);
  const Eigen::VectorXd p = ToEigen(m.Forward(x).probs);
  const Eigen::MatrixXd s = Eigen::MatrixXd(p.asDiagonal()) - p * p.transpose();
  Eigen::MatrixXd l(n, n);
  const GridShape g = *GridFromShape(x.shape());
  for (std::size_t i = 0; i < n; ++i) l.col(i) = ToEigen(Laplacian(g, Basis(x.shape(), i)));
  return j.transpose() * s * j + cfg.lambda * Eigen::MatrixXd::Identity(n, n) +
         cfg.gamma_step * l.transpose() * l;
}

// 5: PCG oracle, truncation, blur residual contract.
Outcome Solver() {
  Outcome out;
  const SmoothingOperator op(kGrid);
  double worst = 0.0;
  bool all_converged = true;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ModelGraph m = GridMlp(s);
    const Tensor x = RandomNormal(kGrid, 30 + s);
    PullbackContext ctx(m, x);
    SolveConfig cfg;
    cfg.lambda = 1e-2;
    cfg.gamma_step = (s % 2) ? 0.02 : 0.0;
    cfg.preconditioner = static_cast<Preconditioner>(s % 3);
    cfg.max_cg_iters = 200;
    cfg.cg_tol = 1e-12;
    const Tensor rhs = RandomNormal(kGrid, 60 + s);
    const SolveResult r = PcgSolve(ctx, op, cfg, rhs);
    const Eigen::VectorXd direct = DenseSystem(m, x, cfg).ldlt().solve(ToEigen(rhs));
    all_converged = all_converged && r.converged;
    worst = std::max(worst, (ToEigen(r.v) - direct).norm() / direct.norm());
  }

  const ModelGraph m = GridMlp(4);
  const Tensor x = RandomNormal(kGrid, 5);
  PullbackContext ctx(m, x);
  SolveConfig trunc;
  trunc.lambda = 1e-4;
  trunc.max_cg_iters = 2;
  trunc.cg_tol = 1e-12;
  trunc.preconditioner = Preconditioner::kNone;
  const SolveResult t = PcgSolve(ctx, op, trunc, RandomNormal(kGrid, 6));
  const bool truncated = !t.converged && t.iterations_used == 2 && Norm2(t.v) > 0.0;

  bool contract = true;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ModelGraph ms = GridMlp(s);
    PullbackContext cs(ms, RandomNormal(kGrid, 70 + s));
    SolveConfig cfg;
    cfg.gamma_step = 0.05;
    cfg.max_cg_iters = 1 + s;
    cfg.cg_tol = 1e-3;
    const Tensor rhs = RandomNormal(kGrid, 80 + s);
    const SolveResult r = PcgSolve(cs, op, cfg, rhs);
    const double true_res = Norm2(Sub(rhs, SystemApply(cs, op, cfg, r.v)));
    contract = contract && std::fabs(r.final_residual_norm - true_res) <= 1e-10 * Norm2(rhs);
    contract = contract && r.converged == (r.final_residual_norm <= cfg.cg_tol * Norm2(rhs));
  }
  out.Check(worst <= 1e-7 && all_converged, "dense oracle");
  out.Check(truncated, "truncation");
  out.Check(contract, "blur residual contract");
  out.detail = fmt::format("20 systems rel {:.2e} (<=1e-7), truncation {}, blur contract {}",
                           worst, truncated ? "ok" : "bad", contract ? "ok" : "bad");
  return out;
}

// 6: completeness on linear classifiers.
Outcome LinearCompleteness() {
  Outcome out;
  double worst_f = 0.0, worst_ig = 0.0;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const ModelGraph m = testing::RandomLinear({1, 4, 4}, 4, s);
    const Tensor x = RandomUniform({1, 4, 4}, 10 + s);
    const std::size_t t = ArgMax(m.Forward(x).probs);
    FringeConfig cfg;
    cfg.delta_euc = 0.05;
    worst_f = std::max(worst_f, RunFringe(m, x, t, cfg).completeness_residual);
    worst_ig = std::max(worst_ig, RunIgReference(m, x, t, Tensor(x.shape()), 16).completeness_residual);
  }
  out.Check(worst_f <= 1e-10, "fringe");
  out.Check(worst_ig <= 1e-10, "ig");
  out.detail = fmt::format("fringe {:.1e}, ig {:.1e} (<=1e-10)", worst_f, worst_ig);
  return out;
}

ModelGraph PolynomialScore(std::size_t n, bool quartic) {
  std::vector<LayerSpec> layers;
  layers.push_back(LayerSpec::Act(Activation::kSquare));
  Tensor w({2, n});
  for (std::size_t i = 0; i < n; ++i) w[i] = 1.0;
  layers.push_back(LayerSpec::Dense(w, Tensor({2})));
  if (quartic) layers.push_back(LayerSpec::Act(Activation::kSquare));
  return ModelGraph({n}, 2, std::move(layers));
}

// 7: IG quadrature. The trapezoid rule integrates ||x||^2 exactly, so the
// decay is measured on ||x||^4.
Outcome IgQuadrature() {
  Outcome out;
  const Tensor x = RandomNormal({6}, 3);
  const double sq = Dot(x, x);
  double exact_err = 0.0;
  std::vector<double> quartic;
  for (std::size_t n : {4u, 16u, 64u}) {
    const double a2 = Sum(RunIgReference(PolynomialScore(6, false), x, 0, Tensor({6}), n).attribution);
    exact_err = std::max(exact_err, std::fabs(a2 - sq) / sq);
    const double a4 = Sum(RunIgReference(PolynomialScore(6, true), x, 0, Tensor({6}), n).attribution);
    quartic.push_back(std::fabs(a4 - sq * sq));
  }
  const double r1 = quartic[0] / quartic[1], r2 = quartic[1] / quartic[2];
  out.Check(exact_err <= 1e-12, "squared norm");
  out.Check(r1 >= 10.0 && r2 >= 10.0, "quartic decay");
  out.detail = fmt::format("||x||^2 rel err {:.1e} (exact), ||x||^4 ratios {:.2f}, {:.2f} (>=10)",
                           exact_err, r1, r2);
  return out;
}

struct SuiteStats {
  double mean_comp = 0.0, max_comp = 0.0, mean_kl = 0.0, mean_track = 0.0;
  bool kl_ok = true, euc_ok = true;
};

struct ToySuite {
  std::vector<ModelGraph> models;
  std::vector<Tensor> inputs;
  std::vector<std::size_t> targets;
  FringeConfig cfg;
};

ToySuite LoadToy() {
  const RunManifest man = LoadManifest(kRoot + "/data/toy/manifest.json");
  ToySuite suite{{}, {}, {}, LoadRunConfig(*man.config_path).fringe};
  for (const CaseSpec& c : man.cases) {
    suite.models.push_back(LoadModel(c.model_path));
    suite.inputs.push_back(LoadTensor(c.input_path));
    suite.targets.push_back(*c.target);
  }
  return suite;
}

SuiteStats RunSuite(const ToySuite& suite, const FringeConfig& cfg) {
  SuiteStats st;
  const double n = static_cast<double>(suite.models.size());
  for (std::size_t i = 0; i < suite.models.size(); ++i) {
    const AttributionResult r = RunFringe(suite.models[i], suite.inputs[i], suite.targets[i], cfg);
    st.mean_comp += r.completeness_residual / n;
    st.max_comp = std::max(st.max_comp, r.completeness_residual);
    st.mean_kl += r.endpoint_kl / n;
    st.mean_track += r.trajectory.MeanTrackingError() / n;
    for (const StepRecord& s : r.trajectory.steps) {
      if (s.active == ActiveConstraint::kKl && s.kl_step > 2 * cfg.tau) st.kl_ok = false;
      if (cfg.delta_euc && s.euclid_step > *cfg.delta_euc * (1 + 1e-6)) st.euc_ok = false;
    }
  }
  return st;
}

// 8: trajectory contracts on the toy suite.
Outcome ToyContracts() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  const ToySuite suite = LoadToy();
  bool sizes = suite.models.size() == 5;
  for (const ModelGraph& m : suite.models) sizes = sizes && m.input_size() == 16 && m.class_count() == 4;
  std::vector<SuiteStats> sweep;
  bool kl_ok = true, euc_ok = true;
  for (double tau : {1e-2, 1e-3, 1e-4}) {
    FringeConfig cfg = suite.cfg;
    cfg.tau = tau;
    sweep.push_back(RunSuite(suite, cfg));
    kl_ok = kl_ok && sweep.back().kl_ok;
    euc_ok = euc_ok && sweep.back().euc_ok;
  }
  const double secs = Seconds(start);
  out.Check(sizes, "suite shape");
  out.Check(kl_ok, "kl per step");
  out.Check(euc_ok, "euclidean step");
  out.Check(sweep[1].max_comp <= 0.05, "eps_comp at 1e-3");
  out.Check(sweep[1].mean_comp <= sweep[0].mean_comp && sweep[2].mean_comp <= sweep[1].mean_comp,
            "eps_comp monotone");
  out.Check(sweep[1].mean_kl <= sweep[0].mean_kl && sweep[2].mean_kl <= sweep[1].mean_kl,
            "endpoint_kl monotone");
  out.Check(secs < 60.0, "runtime");
  out.detail = fmt::format(
      "eps_comp {:.2e}/{:.2e}/{:.2e}, max@1e-3 {:.2e} (<=0.05), endpoint_kl {:.2e}/{:.2e}/{:.2e}, {:.2f}s (<60s)",
      sweep[0].mean_comp, sweep[1].mean_comp, sweep[2].mean_comp, sweep[1].max_comp,
      sweep[0].mean_kl, sweep[1].mean_kl, sweep[2].mean_kl, secs);
  return out;
}

// 9: Euclidean cap trade-off direction.
Outcome CapTradeoff() {
  Outcome out;
  const ToySuite suite = LoadToy();
  FringeConfig on = suite.cfg;
  on.tau = 1e-3;
  on.delta_euc = 0.05;
  FringeConfig off = on;
  off.delta_euc.reset();
  const SuiteStats a = RunSuite(suite, on), b = RunSuite(suite, off);
  out.Check(a.mean_comp <= b.mean_comp, "eps_comp");
  out.Check(a.mean_kl >= b.mean_kl, "endpoint_kl");
  out.Check(a.mean_track >= b.mean_track, "tracking");
  out.detail = fmt::format("on/off eps_comp {:.2e}/{:.2e}, endpoint_kl {:.2e}/{:.2e}, tracking {:.3f}/{:.3f}",
                           a.mean_comp, b.mean_comp, a.mean_kl, b.mean_kl, a.mean_track, b.mean_track);
  return out;
}

// 10: variant reduction.
Outcome Variants() {
  Outcome out;
  const ToySuite suite = LoadToy();
  bool identical = true;
  std::uint64_t euclid_applies = 0;
  for (std::size_t i = 0; i < suite.models.size(); ++i) {
    FringeConfig full = suite.cfg;
    full.solve.gamma_step = 0.0;
    full.solve.gamma_prior = 0.0;
    FringeConfig unreg = suite.cfg;
    unreg.variant = Variant::kUnregularizedFr;
    const AttributionResult a = RunFringe(suite.models[i], suite.inputs[i], suite.targets[i], full);
    const AttributionResult b = RunFringe(suite.models[i], suite.inputs[i], suite.targets[i], unreg);
    identical = identical && a.attribution == b.attribution && a.endpoint == b.endpoint &&
                a.completeness_residual == b.completeness_residual;
    FringeConfig euc = suite.cfg;
    euc.variant = Variant::kEuclideanTracking;
    euclid_applies +=
        RunFringe(suite.models[i], suite.inputs[i], suite.targets[i], euc).trajectory.metric_applications;
  }
  out.Check(identical, "bit identity");
  out.Check(euclid_applies == 0, "metric applications");
  out.detail = fmt::format("full(gamma=0)==unregularized_fr bitwise: {}, euclidean_tracking metric applies {}",
                           identical ? "yes" : "no", euclid_applies);
  return out;
}

// 11: metrics suite.
Outcome Metrics() {
  Outcome out;
  MlpSpec spec;
  spec.input_shape = {3, 6, 6};
  spec.seed = 4;
  const ModelGraph m = MakeRandomMlp(spec);
  const Tensor x = RandomUniform(spec.input_shape, 5);
  const SaliencyMap sal = ReduceSaliency(RandomNormal(spec.input_shape, 6));
  const double p_orig = m.Forward(x).probs[1];
  const double p_blur = m.Forward(BlurReference(x)).probs[1];
  PerturbationSchedule sched;
  sched.steps = 7;
  const auto ins = PerturbationCurve(m, x, 1, sal, sched);
  sched.direction = PerturbDirection::kDeletion;
  const auto del = PerturbationCurve(m, x, 1, sal, sched);
  out.Check(ins.front() == p_blur && ins.back() == p_orig && del.front() == p_orig &&
                del.back() == p_blur,
            "curve endpoints");

  const double sp = Sparseness(Tensor({4}, {0, 0, 1, 0}));
  out.Check(std::fabs(sp - 0.75) <= 1e-12, "one-hot sparseness");
  const Tensor a = RandomNormal({3, 5, 5}, 8);
  const double base = Sparseness(a);
  double scale_err = 0.0;
  for (double c : {0.1, 1.0, 10.0}) scale_err = std::max(scale_err, std::fabs(Sparseness(Scale(a, c)) - base));
  out.Check(scale_err <= 1e-12, "scale invariance");

  Tensor w;
  const ModelGraph lin = testing::RandomLinear({1, 4, 4}, 3, 2, &w);
  const Tensor xl = RandomUniform({1, 4, 4}, 4);
  const double inf = Infidelity(lin, xl, 1, lin.GradScore(xl, 1), InfidelityConfig{});
  out.Check(inf <= 1e-20, "linear infidelity");

  bool mas_ok = true;
  spec.input_shape = {2, 5, 5};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    spec.seed = seed;
    const ModelGraph mm = MakeRandomMlp(spec);
    const Tensor xm = RandomUniform(spec.input_shape, seed);
    const MasResult r = Mas(mm, xm, 0, RandomNormal(spec.input_shape, 9 + seed), 10);
    double mi = 0.0, md = 0.0;
    for (std::size_t k = 0; k < r.density.size(); ++k) {
      mas_ok = mas_ok && r.penalty_ins[k] >= 0.0 && r.penalty_del[k] >= 0.0;
      mi += r.response_ins[k] / r.density.size();
      md += r.response_del[k] / r.density.size();
    }
    mas_ok = mas_ok && r.mas_ins <= mi + 1e-15 && r.mas_del >= md - 1e-15;
  }
  out.Check(mas_ok, "mas contracts");
  const double ts = TuningScore(1.0, 0.0, 0.0);
  out.Check(std::fabs(ts - 1.0) <= 1e-5, "tuning score");
  out.detail = fmt::format("sparseness(one-hot)={:.12f}, scale drift {:.1e}, linear infidelity {:.1e}, "
                           "MAS {}, tuning(1,0,0)={:.7f}",
                           sp, scale_err, inf, mas_ok ? "ok" : "bad", ts);
  return out;
}

// 12: CLI determinism and golden metrics.
Outcome CliGolden() {
  Outcome out;
  const fs::path tmp = fs::temp_directory_path() / "fringe_acceptance";
  fs::remove_all(tmp);
  auto run = [&](const std::string& dir) {
    const std::string cmd = fmt::format("{} attribute --manifest {}/data/toy/manifest.json --out {} >/dev/null 2>&1",
                                        FRINGE_CLI_PATH, kRoot, (tmp / dir).string());
    return std::system(cmd.c_str());
  };
  const bool ran = run("a") == 0 && run("b") == 0;
  bool same = false;
  if (ran) {
    same = StripTiming(ReadJsonFile((tmp / "a/report.json").string())).dump(2) ==
           StripTiming(ReadJsonFile((tmp / "b/report.json").string())).dump(2);
  }
  std::size_t goldens = 0;
  bool round_trip = true;
  for (const auto& e : fs::directory_iterator(kRoot + "/tests/golden")) {
    const Json j = ReadJsonFile(e.path().string());
    const fs::path copy = tmp / e.path().filename();
    WriteJsonFile(copy.string(), j);
    round_trip = round_trip && ReadJsonFile(copy.string()) == j;
    ++goldens;
  }
  fs::remove_all(tmp);
  out.Check(ran, "cli exit");
  out.Check(same, "determinism");
  out.Check(goldens == 5 && round_trip, "golden round trip");
  out.detail = fmt::format("reports identical: {}, {} goldens round-trip: {}", same ? "yes" : "no",
                           goldens, round_trip ? "yes" : "no");
  return out;
}

}  // namespace
}  // namespace fringe

int main() {
  spdlog::set_level(spdlog::level::warn);
  const std::vector<std::pair<std::string, std::function<fringe::Outcome()>>> criteria = {
      {"autodiff correctness", fringe::Autodiff},
      {"pullback metric oracle", fringe::PullbackMetric},
      {"KL quadratic approximation", fringe::KlQuadratic},
      {"geodesic suite", fringe::Geodesic},
      {"solver oracle", fringe::Solver},
      {"linear completeness", fringe::LinearCompleteness},
      {"IG quadrature convergence", fringe::IgQuadrature},
      {"toy trajectory contracts", fringe::ToyContracts},
      {"euclidean cap trade-off", fringe::CapTradeoff},
      {"variant reduction", fringe::Variants},
      {"metrics suite", fringe::Metrics},
      {"CLI determinism and goldens", fringe::CliGolden},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    fringe::Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.failures.push_back(e.what());
    }
    std::string why;
    for (const std::string& f : o.failures) why += (why.empty() ? "" : ", ") + f;
    const bool ok = o.failures.empty();
    failed += !ok;
    std::printf("%s criterion %zu: %s: %s%s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), ok ? "" : (" [failed: " + why + "]").c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
