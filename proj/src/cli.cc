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

#include "fringe/cli.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <map>
#include <set>
#include <utility>

#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "fringe/baselines.h"
#include "fringe/toy.h"

namespace fringe {

namespace fs = std::filesystem;

namespace {

std::string Resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  if (path.is_absolute() || base.empty()) return path.lexically_normal().string();
  return (base / path).lexically_normal().string();
}

// Finite numbers pass through; anything else becomes null and the reason is
// recorded next to it.
void PutNumber(Json& obj, const std::string& key, double value,
               const char* reason = "non-finite value") {
  if (std::isfinite(value)) {
    obj[key] = value;
  } else {
    obj[key] = nullptr;
    obj[key + "_null_reason"] = reason;
  }
}

Json NumberArrayJson(const std::vector<double>& v) {
  Json arr = Json::array();
  for (double d : v) arr.push_back(std::isfinite(d) ? Json(d) : Json(nullptr));
  return arr;
}

struct LoadedCase {
  CaseSpec spec;
  std::shared_ptr<const ModelGraph> model;
  Tensor input;
  std::size_t target = 0;
  std::string stem;
};

std::vector<LoadedCase> LoadCases(const RunManifest& manifest) {
  if (manifest.cases.empty()) throw Error("manifest lists no inputs");
  std::map<std::string, std::shared_ptr<const ModelGraph>> models;
  std::vector<LoadedCase> out;
  std::set<std::string> stems;
  for (const CaseSpec& c : manifest.cases) {
    LoadedCase lc;
    lc.spec = c;
    auto it = models.find(c.model_path);
    if (it == models.end()) {
      it = models
               .emplace(c.model_path,
                        std::make_shared<const ModelGraph>(LoadModel(c.model_path)))
               .first;
    }
    lc.model = it->second;
    lc.input = LoadTensor(c.input_path);
    try {
      lc.model->CheckInput(lc.input);
    } catch (const Error& e) {
      throw FileError(fmt::format("{}: {}", c.input_path, e.what()));
    }
    lc.target = c.target ? *c.target : ArgMax(lc.model->Logits(lc.input));
    lc.model->CheckClass(lc.target);
    std::string stem = fs::path(c.input_path).stem().string();
    if (stems.contains(stem)) stem = fmt::format("{}_{}", stem, out.size());
    stems.insert(stem);
    lc.stem = stem;
    out.push_back(std::move(lc));
  }
  return out;
}

RunConfig ConfigFor(const RunManifest& manifest) {
  return manifest.config_path ? LoadRunConfig(*manifest.config_path) : RunConfig{};
}

std::string FileTag(const std::string& tag) {
  std::string t = tag;
  std::replace(t.begin(), t.end(), ':', '-');
  return t;
}

// Runs `fn` on every case concurrently and returns results in case order.
template <typename Fn>
auto ForEachCase(const std::vector<LoadedCase>& cases, Fn fn) {
  using R = decltype(fn(cases.front()));
  std::vector<std::future<R>> futures;
  futures.reserve(cases.size());
  for (const LoadedCase& c : cases) {
    futures.push_back(std::async(std::launch::async, [&fn, &c] { return fn(c); }));
  }
  std::vector<R> out;
  out.reserve(cases.size());
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

// Sorts report rows by input path; ties keep manifest order.
void SortByInput(Json& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const Json& a, const Json& b) {
    return a.at("input").get<std::string>() < b.at("input").get<std::string>();
  });
}

}  // namespace

RunManifest LoadManifest(const std::string& path) {
  const Json doc = ReadJsonFile(path);
  const fs::path base = fs::path(path).parent_path();
  RunManifest m;
  try {
    std::optional<std::string> default_model;
    if (doc.contains("model")) default_model = Resolve(base, doc.at("model").get<std::string>());
    if (doc.contains("cases")) {
      for (const Json& c : doc.at("cases")) {
        CaseSpec cs;
        if (c.contains("model")) {
          cs.model_path = Resolve(base, c.at("model").get<std::string>());
        } else if (default_model) {
          cs.model_path = *default_model;
        } else {
          throw Error("case without a model and no default model");
        }
        cs.input_path = Resolve(base, c.at("input").get<std::string>());
        if (c.contains("target") && !c.at("target").is_null()) {
          cs.target = c.at("target").get<std::size_t>();
        }
        if (c.contains("attribution")) {
          cs.attribution_path = Resolve(base, c.at("attribution").get<std::string>());
        }
        m.cases.push_back(std::move(cs));
      }
    }
    if (doc.contains("inputs")) {
      if (!default_model) throw Error("'inputs' requires a top-level 'model'");
      for (const Json& in : doc.at("inputs")) {
        m.cases.push_back(CaseSpec{*default_model,
                                   Resolve(base, in.get<std::string>()),
                                   std::nullopt, std::nullopt});
      }
    }
    m.method = doc.value("method", m.method);
    if (doc.contains("variant")) m.variant = doc.at("variant").get<std::string>();
    if (doc.contains("config")) m.config_path = Resolve(base, doc.at("config").get<std::string>());
    if (doc.contains("baseline")) {
      m.baseline_path = Resolve(base, doc.at("baseline").get<std::string>());
    }
    if (doc.contains("out")) m.out_dir = Resolve(base, doc.at("out").get<std::string>());
    m.seed = doc.value("seed", m.seed);
  } catch (const Json::exception& e) {
    throw FileError(fmt::format("{}: {}", path, e.what()));
  } catch (const FileError&) {
    throw;
  } catch (const Error& e) {
    throw FileError(fmt::format("{}: {}", path, e.what()));
  }
  return m;
}

std::string MethodSpec::Tag() const {
  switch (kind) {
    case MethodKind::kFringe:
      return fmt::format("fringe:{}", VariantName(variant));
    case MethodKind::kIg:
      return "ig";
    case MethodKind::kSmoothGrad:
      return "smoothgrad";
    case MethodKind::kGradient:
      return "gradient";
  }
  return "?";
}

MethodSpec ParseMethod(const std::string& method,
                       const std::optional<std::string>& variant_override,
                       const RunConfig& cfg) {
  MethodSpec m;
  constexpr std::string_view kVariantPrefix = "fringe_variant:";
  if (method == "fringe") {
    m.kind = MethodKind::kFringe;
    m.variant = variant_override ? ParseVariant(*variant_override) : cfg.fringe.variant;
  } else if (method.starts_with(kVariantPrefix)) {
    m.kind = MethodKind::kFringe;
    m.variant = ParseVariant(method.substr(kVariantPrefix.size()));
  } else if (method == "ig") {
    m.kind = MethodKind::kIg;
  } else if (method == "smoothgrad") {
    m.kind = MethodKind::kSmoothGrad;
  } else if (method == "gradient") {
    m.kind = MethodKind::kGradient;
  } else {
    throw Error(fmt::format("unknown method '{}'", method));
  }
  return m;
}

AttributionResult RunMethod(const MethodSpec& method, const ModelGraph& model,
                            const Tensor& x, std::size_t target,
                            const RunConfig& cfg, std::uint64_t seed,
                            const Tensor* baseline) {
  const ScoreTarget score = cfg.fringe.score_target;
  switch (method.kind) {
    case MethodKind::kFringe: {
      FringeConfig fc = cfg.fringe;
      fc.variant = method.variant;
      return RunFringe(model, x, target, fc);
    }
    case MethodKind::kIg: {
      const Tensor zeros = Tensor::ZerosLike(x);
      return RunIgReference(model, x, target, baseline ? *baseline : zeros,
                            cfg.ig_steps, score, cfg.fringe.epsilon);
    }
    case MethodKind::kSmoothGrad:
    case MethodKind::kGradient: {
      AttributionResult r;
      r.method = method.Tag();
      r.target = target;
      if (method.kind == MethodKind::kSmoothGrad) {
        SmoothGradConfig sg;
        sg.samples = cfg.smoothgrad_samples;
        sg.noise_sigma = cfg.smoothgrad_sigma ? *cfg.smoothgrad_sigma
                                              : DefaultSmoothGradSigma(x);
        sg.seed = seed;
        r.attribution = SmoothGrad(model, x, target, sg, score);
      } else {
        r.attribution = ScoreGradient(model, x, target, score);
      }
      r.score_start = ScoreValue(model, x, target, score);
      r.score_end = r.score_start;
      r.endpoint = x;
      r.endpoint_digest = TensorDigest(x);
      return r;
    }
  }
  throw Error("unreachable method kind");
}

Json TrajectoryToJson(const TrajectoryRecord& traj) {
  Json j;
  std::vector<double> eta, fisher, euclid, track, kl, loss, cg_res;
  std::vector<std::size_t> cg_iters;
  std::vector<std::string> active;
  for (const StepRecord& s : traj.steps) {
    eta.push_back(s.eta);
    fisher.push_back(s.fisher_norm_sq);
    euclid.push_back(s.euclid_step);
    track.push_back(s.tracking_error);
    kl.push_back(s.kl_step);
    loss.push_back(s.loss);
    cg_res.push_back(s.cg_residual);
    cg_iters.push_back(s.cg_iterations);
    active.emplace_back(ActiveConstraintName(s.active));
  }
  j["realized_steps"] = traj.steps.size();
  PutNumber(j, "mean_tracking_error", traj.MeanTrackingError());
  PutNumber(j, "max_tracking_error", traj.MaxTrackingError());
  j["metric_applications"] = traj.metric_applications;
  j["eta"] = NumberArrayJson(eta);
  j["active_constraint"] = active;
  j["fisher_norm_sq"] = NumberArrayJson(fisher);
  j["euclid_step"] = NumberArrayJson(euclid);
  j["tracking_error"] = NumberArrayJson(track);
  j["kl_step"] = NumberArrayJson(kl);
  j["loss"] = NumberArrayJson(loss);
  j["cg_iterations"] = cg_iters;
  j["cg_residual"] = NumberArrayJson(cg_res);
  return j;
}

Json CmdAttribute(const RunManifest& manifest) {
  const RunConfig cfg = ConfigFor(manifest);
  const MethodSpec method = ParseMethod(manifest.method, manifest.variant, cfg);
  const std::vector<LoadedCase> cases = LoadCases(manifest);
  std::optional<Tensor> baseline;
  if (manifest.baseline_path) baseline = LoadTensor(*manifest.baseline_path);
  fs::create_directories(manifest.out_dir);
  const std::string tag = FileTag(method.Tag());

  Json rows = Json::array();
  auto run_one = [&](const LoadedCase& c) {
    spdlog::info("attribute {} with {}", c.spec.input_path, method.Tag());
    const auto t0 = std::chrono::steady_clock::now();
    const Tensor* b = nullptr;
    if (baseline) {
      c.model->CheckInput(*baseline);
      b = &*baseline;
    }
    AttributionResult res =
        RunMethod(method, *c.model, c.input, c.target, cfg, manifest.seed, b);
    const auto t1 = std::chrono::steady_clock::now();

    const std::string attr_name = fmt::format("{}.{}.attribution.json", c.stem, tag);
    const std::string pgm_name = fmt::format("{}.{}.heatmap.pgm", c.stem, tag);
    WriteJsonFile((fs::path(manifest.out_dir) / attr_name).string(),
                  TensorToJson(res.attribution));
    WritePgm((fs::path(manifest.out_dir) / pgm_name).string(),
             ReduceSaliency(res.attribution));

    Json row;
    row["input"] = c.spec.input_path;
    row["model"] = c.spec.model_path;
    row["target"] = c.target;
    row["attribution_file"] = attr_name;
    row["heatmap_file"] = pgm_name;
    PutNumber(row, "completeness_residual", res.completeness_residual);
    PutNumber(row, "endpoint_kl", res.endpoint_kl);
    PutNumber(row, "score_start", res.score_start);
    PutNumber(row, "score_end", res.score_end);
    PutNumber(row, "attribution_sum", Sum(res.attribution));
    row["planned_steps"] = res.planned_steps;
    row["degenerate"] = res.degenerate;
    row["endpoint_digest"] = res.endpoint_digest;
    row["trajectory"] = TrajectoryToJson(res.trajectory);
    row["timing_ms"] =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    return row;
  };
  for (Json& row : ForEachCase(cases, run_one)) rows.push_back(std::move(row));
  SortByInput(rows);

  Json report;
  report["command"] = "attribute";
  report["method"] = method.Tag();
  report["seed"] = manifest.seed;
  report["config"] = RunConfigToJson(cfg);
  report["inputs"] = std::move(rows);
  WriteJsonFile((fs::path(manifest.out_dir) / "report.json").string(), report);
  return report;
}

Json MetricsReportToJson(const MetricsReport& rep) {
  Json j;
  PutNumber(j, "ins_auc", rep.ins_auc);
  PutNumber(j, "del_auc", rep.del_auc);
  PutNumber(j, "ins_auc_norm", rep.ins_auc_norm);
  PutNumber(j, "del_auc_norm", rep.del_auc_norm);
  PutNumber(j, "mas_ins", rep.mas_ins);
  PutNumber(j, "mas_del", rep.mas_del);
  PutNumber(j, "infidelity", rep.infidelity);
  PutNumber(j, "sparseness", rep.sparseness);
  if (rep.max_sensitivity) {
    PutNumber(j, "max_sensitivity", *rep.max_sensitivity);
  } else {
    j["max_sensitivity"] = nullptr;
    j["max_sensitivity_null_reason"] = "attribution method not re-runnable";
  }
  PutNumber(j, "tuning_score", rep.tuning_score);
  PutNumber(j, "p_orig", rep.p_orig);
  PutNumber(j, "p_blur", rep.p_blur);
  j["curves"] = {
      {"insertion", NumberArrayJson(rep.ins_curve)},
      {"deletion", NumberArrayJson(rep.del_curve)},
      {"mas_density", NumberArrayJson(rep.mas.density)},
      {"mas_response_ins", NumberArrayJson(rep.mas.response_ins)},
      {"mas_response_del", NumberArrayJson(rep.mas.response_del)},
      {"mas_penalty_ins", NumberArrayJson(rep.mas.penalty_ins)},
      {"mas_penalty_del", NumberArrayJson(rep.mas.penalty_del)},
  };
  return j;
}

Json CmdEvaluate(const RunManifest& manifest) {
  const RunConfig cfg = ConfigFor(manifest);
  const std::vector<LoadedCase> cases = LoadCases(manifest);
  std::optional<MethodSpec> method;
  if (!manifest.method.empty() && manifest.method != "none") {
    method = ParseMethod(manifest.method, manifest.variant, cfg);
  }
  std::optional<Tensor> baseline;
  if (manifest.baseline_path) baseline = LoadTensor(*manifest.baseline_path);
  fs::create_directories(manifest.out_dir);
  const std::string tag = method ? method->Tag() : "external";

  auto run_one = [&](const LoadedCase& c) {
    if (!c.spec.attribution_path) {
      throw Error(fmt::format("{}: no attribution file given", c.spec.input_path));
    }
    const Tensor attr = LoadTensor(*c.spec.attribution_path);
    if (attr.shape() != c.input.shape()) {
      throw ShapeError(fmt::format("{}: attribution shape {} does not match input {}",
                                   *c.spec.attribution_path,
                                   ShapeToString(attr.shape()),
                                   ShapeToString(c.input.shape())));
    }
    MetricsConfig mc = cfg.metrics;
    mc.infidelity.seed = manifest.seed;
    mc.sensitivity.seed = manifest.seed;
    AttributionFn rerun;
    if (method) {
      rerun = [&, model = c.model, target = c.target](const Tensor& xp) {
        return RunMethod(*method, *model, xp, target, cfg, manifest.seed,
                         baseline ? &*baseline : nullptr)
            .attribution;
      };
    }
    const MetricsReport rep = EvaluateMetrics(*c.model, c.input, c.target, attr,
                                              mc, method ? &rerun : nullptr);
    Json j = MetricsReportToJson(rep);
    j["input"] = c.spec.input_path;
    j["attribution"] = *c.spec.attribution_path;
    j["method"] = tag;
    j["target"] = c.target;
    const std::string name = fmt::format("{}.{}.metrics.json", c.stem, FileTag(tag));
    WriteJsonFile((fs::path(manifest.out_dir) / name).string(), j);
    j["metrics_file"] = name;
    return j;
  };
  Json rows = Json::array();
  for (Json& row : ForEachCase(cases, run_one)) rows.push_back(std::move(row));
  SortByInput(rows);

  std::string csv =
      "input,method,target,ins_auc,del_auc,ins_auc_norm,del_auc_norm,mas_ins,"
      "mas_del,infidelity,sparseness,max_sensitivity,tuning_score\n";
  auto num = [](const Json& v) {
    return v.is_null() ? std::string() : fmt::format("{:.17g}", v.get<double>());
  };
  for (const Json& r : rows) {
    csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                       r.at("input").get<std::string>(), tag,
                       r.at("target").get<std::size_t>(), num(r.at("ins_auc")),
                       num(r.at("del_auc")), num(r.at("ins_auc_norm")),
                       num(r.at("del_auc_norm")), num(r.at("mas_ins")),
                       num(r.at("mas_del")), num(r.at("infidelity")),
                       num(r.at("sparseness")), num(r.at("max_sensitivity")),
                       num(r.at("tuning_score")));
  }
  WriteTextFile((fs::path(manifest.out_dir) / "summary.csv").string(), csv);

  Json report;
  report["command"] = "evaluate";
  report["method"] = tag;
  report["seed"] = manifest.seed;
  report["inputs"] = rows;
  WriteJsonFile((fs::path(manifest.out_dir) / "metrics_report.json").string(), report);
  return report;
}

Json CmdDiagnose(const RunManifest& manifest, const Json& sweep) {
  const RunConfig base_cfg = ConfigFor(manifest);
  const MethodSpec method = ParseMethod(manifest.method, manifest.variant, base_cfg);
  if (method.kind != MethodKind::kFringe) {
    throw Error("diagnose only supports fringe methods");
  }
  const std::vector<LoadedCase> cases = LoadCases(manifest);

  std::vector<double> taus{base_cfg.fringe.tau};
  std::vector<std::optional<double>> caps{base_cfg.fringe.delta_euc};
  if (!sweep.is_object()) throw Error("sweep spec must be a JSON object");
  if (sweep.contains("tau")) {
    taus = sweep.at("tau").get<std::vector<double>>();
  }
  if (sweep.contains("delta_euc")) {
    caps.clear();
    for (const Json& v : sweep.at("delta_euc")) {
      caps.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
    }
  }
  if (taus.empty() || caps.empty()) throw Error("sweep axes must be non-empty");

  Json rows = Json::array();
  std::string csv =
      "tau,delta_euc,mean_completeness_residual,mean_endpoint_kl,"
      "mean_tracking_error,max_tracking_error\n";
  for (double tau : taus) {
    for (const auto& cap : caps) {
      RunConfig cfg = base_cfg;
      cfg.fringe.tau = tau;
      cfg.fringe.delta_euc = cap;
      cfg.fringe.Validate();
      auto run_one = [&](const LoadedCase& c) {
        return RunMethod(method, *c.model, c.input, c.target, cfg, manifest.seed,
                         nullptr);
      };
      const std::vector<AttributionResult> results = ForEachCase(cases, run_one);
      double comp = 0.0, kl = 0.0, track = 0.0, track_max = 0.0;
      for (const AttributionResult& r : results) {
        comp += r.completeness_residual;
        kl += r.endpoint_kl;
        track += r.trajectory.MeanTrackingError();
        track_max = std::max(track_max, r.trajectory.MaxTrackingError());
      }
      const double n = static_cast<double>(results.size());
      Json row;
      row["tau"] = tau;
      row["delta_euc"] = cap ? Json(*cap) : Json(nullptr);
      row["cases"] = results.size();
      PutNumber(row, "mean_completeness_residual", comp / n);
      PutNumber(row, "mean_endpoint_kl", kl / n);
      PutNumber(row, "mean_tracking_error", track / n);
      PutNumber(row, "max_tracking_error", track_max);
      rows.push_back(row);
      csv += fmt::format("{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", tau,
                         cap ? fmt::format("{:.17g}", *cap) : std::string("off"),
                         comp / n, kl / n, track / n, track_max);
    }
  }
  fs::create_directories(manifest.out_dir);
  WriteTextFile((fs::path(manifest.out_dir) / "diagnose.csv").string(), csv);
  Json report;
  report["command"] = "diagnose";
  report["method"] = method.Tag();
  report["rows"] = rows;
  WriteJsonFile((fs::path(manifest.out_dir) / "diagnose.json").string(), report);
  return report;
}

Json StripTiming(const Json& report) {
  if (report.is_object()) {
    Json out = Json::object();
    for (const auto& [k, v] : report.items()) {
      if (k == "timing_ms") continue;
      out[k] = StripTiming(v);
    }
    return out;
  }
  if (report.is_array()) {
    Json out = Json::array();
    for (const Json& v : report) out.push_back(StripTiming(v));
    return out;
  }
  return report;
}

namespace {

void ConfigureLogging() {
  auto logger = spdlog::stderr_color_mt("fringe");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("FRINGE_LOG")) {
    const std::string level(env);
    if (level == "error") spdlog::set_level(spdlog::level::err);
    else if (level == "info") spdlog::set_level(spdlog::level::info);
    else if (level == "debug") spdlog::set_level(spdlog::level::debug);
  }
}

void PrintError(const char* kind, const std::string& message) {
  std::cerr << "error: " << Json{{"kind", kind}, {"message", message}}.dump()
            << std::endl;
}

}  // namespace

int RunCli(int argc, char** argv) {
  ConfigureLogging();
  CLI::App app{"Fisher-Rao geodesic attribution for small classifiers"};
  app.require_subcommand(1);

  std::string manifest_path;
  std::string model_path;
  std::vector<std::string> inputs;
  std::vector<std::string> attributions;
  std::string method = "fringe";
  std::string variant;
  std::string config_path;
  std::string baseline_path;
  std::string out_dir = "out";
  std::string sweep_path;
  std::uint64_t seed = 0;
  long long target = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--manifest", manifest_path, "Run manifest (JSON)");
    cmd->add_option("--model", model_path, "Model file (JSON)");
    cmd->add_option("--input", inputs, "Input tensor file(s)");
    cmd->add_option("--method", method,
                    "fringe | fringe_variant:<tag> | ig | smoothgrad | gradient");
    cmd->add_option("--variant", variant, "FRInGe variant for --method fringe");
    cmd->add_option("--config", config_path, "Run configuration (JSON)");
    cmd->add_option("--baseline", baseline_path, "IG baseline tensor");
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_option("--seed", seed, "Seed for stochastic methods and metrics");
    cmd->add_option("--target", target, "Target class (default: top-1)");
  };
  CLI::App* attribute = app.add_subcommand("attribute", "Compute attributions");
  add_common(attribute);
  CLI::App* evaluate = app.add_subcommand("evaluate", "Score attributions");
  add_common(evaluate);
  evaluate->add_option("--attribution", attributions,
                       "Attribution file(s), paired with --input in order");
  CLI::App* diagnose = app.add_subcommand("diagnose", "Trajectory diagnostics sweep");
  add_common(diagnose);
  diagnose->add_option("--sweep", sweep_path, "Sweep spec (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    PrintError("UsageError", e.what());
    return 2;
  }

  try {
    RunManifest m;
    if (!manifest_path.empty()) m = LoadManifest(manifest_path);
    auto set_if = [](bool given, auto& dst, const auto& src) {
      if (given) dst = src;
    };
    CLI::App* cmd = app.get_subcommands().front();
    if (!model_path.empty() || !inputs.empty()) {
      if (model_path.empty()) throw Error("--input requires --model");
      m.cases.clear();
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        CaseSpec c{model_path, inputs[i], std::nullopt, std::nullopt};
        if (i < attributions.size()) c.attribution_path = attributions[i];
        m.cases.push_back(std::move(c));
      }
    }
    if (target >= 0) {
      for (CaseSpec& c : m.cases) c.target = static_cast<std::size_t>(target);
    }
    set_if(cmd->count("--method") > 0, m.method, method);
    if (!variant.empty()) m.variant = variant;
    if (!config_path.empty()) m.config_path = config_path;
    if (!baseline_path.empty()) m.baseline_path = baseline_path;
    set_if(cmd->count("--out") > 0 || manifest_path.empty(), m.out_dir, out_dir);
    set_if(cmd->count("--seed") > 0, m.seed, seed);

    Json result;
    if (cmd == attribute) {
      result = CmdAttribute(m);
    } else if (cmd == evaluate) {
      result = CmdEvaluate(m);
    } else {
      const Json sweep = sweep_path.empty() ? Json::object() : ReadJsonFile(sweep_path);
      result = CmdDiagnose(m, sweep);
    }
    std::cout << StripTiming(result).dump(2) << std::endl;
    return 0;
  } catch (const TrajectoryError& e) {
    PrintError("TrajectoryError", e.what());
  } catch (const FileError& e) {
    PrintError("FileError", e.what());
  } catch (const ShapeError& e) {
    PrintError("ShapeError", e.what());
  } catch (const NonFiniteError& e) {
    PrintError("NonFiniteError", e.what());
  } catch (const Error& e) {
    PrintError("Error", e.what());
  } catch (const std::exception& e) {
    PrintError("InternalError", e.what());
  }
  return 1;
}

}  // namespace fringe
