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

#include "fringe/io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include <fmt/format.h>

namespace fringe {

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError(fmt::format("{}: cannot open for reading", path));
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw FileError(fmt::format("{}: invalid JSON: {}", path, e.what()));
  }
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError(fmt::format("{}: cannot open for writing", path));
  out << text;
  if (!out) throw FileError(fmt::format("{}: write failed", path));
}

void WriteJsonFile(const std::string& path, const Json& doc) {
  WriteTextFile(path, doc.dump(2) + "\n");
}

namespace {

std::vector<double> NumberArray(const Json& doc, const char* field) {
  if (!doc.contains(field) || !doc.at(field).is_array()) {
    throw Error(fmt::format("missing numeric array '{}'", field));
  }
  std::vector<double> out;
  out.reserve(doc.at(field).size());
  for (const Json& v : doc.at(field)) {
    if (!v.is_number()) throw Error(fmt::format("'{}' holds a non-number", field));
    out.push_back(v.get<double>());
  }
  return out;
}

Shape ShapeArray(const Json& doc, const char* field) {
  if (!doc.contains(field) || !doc.at(field).is_array()) {
    throw Error(fmt::format("missing shape array '{}'", field));
  }
  Shape s;
  for (const Json& v : doc.at(field)) {
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
      throw Error(fmt::format("'{}' must hold positive integers", field));
    }
    s.push_back(v.get<std::size_t>());
  }
  return s;
}

template <typename T>
T WithPath(const std::string& path, T (*parse)(const Json&)) {
  const Json doc = ReadJsonFile(path);
  try {
    return parse(doc);
  } catch (const FileError&) {
    throw;
  } catch (const Error& e) {
    throw FileError(fmt::format("{}: {}", path, e.what()));
  } catch (const Json::exception& e) {
    throw FileError(fmt::format("{}: {}", path, e.what()));
  }
}

}  // namespace

Json TensorToJson(const Tensor& t) {
  return Json{{"shape", t.shape()}, {"data", t.data()}};
}

Tensor TensorFromJson(const Json& doc) {
  if (!doc.is_object()) throw Error("tensor document must be an object");
  return Tensor(ShapeArray(doc, "shape"), NumberArray(doc, "data"));
}

Tensor LoadTensor(const std::string& path) {
  return WithPath<Tensor>(path, &TensorFromJson);
}

Json ModelToJson(const ModelGraph& model) {
  Json layers = Json::array();
  for (const LayerSpec& l : model.layers()) {
    Json j;
    j["kind"] = LayerKindName(l.kind);
    if (l.kind == LayerKind::kActivation) {
      j["activation"] = ActivationName(l.activation);
    } else {
      j["weights"] = l.weights.data();
      j["bias"] = l.bias.data();
      if (l.kind == LayerKind::kConv2d) {
        j["weights_shape"] = l.weights.shape();
        j["padding"] = l.padding;
      }
    }
    layers.push_back(std::move(j));
  }
  return Json{{"input_shape", model.input_shape()},
              {"class_count", model.class_count()},
              {"layers", std::move(layers)}};
}

ModelGraph ModelFromJson(const Json& doc) {
  if (!doc.is_object()) throw Error("model document must be an object");
  const Shape input_shape = ShapeArray(doc, "input_shape");
  if (!doc.contains("class_count") || !doc.at("class_count").is_number_integer()) {
    throw Error("missing integer 'class_count'");
  }
  const auto classes = doc.at("class_count").get<long long>();
  if (classes < 2) throw Error("class_count must be >= 2");
  if (!doc.contains("layers") || !doc.at("layers").is_array()) {
    throw Error("missing 'layers' array");
  }
  std::vector<LayerSpec> layers;
  for (const Json& j : doc.at("layers")) {
    const LayerKind kind = ParseLayerKind(j.at("kind").get<std::string>());
    if (kind == LayerKind::kActivation) {
      layers.push_back(LayerSpec::Act(ParseActivation(j.at("activation").get<std::string>())));
      continue;
    }
    std::vector<double> w = NumberArray(j, "weights");
    std::vector<double> b = NumberArray(j, "bias");
    if (b.empty()) throw Error("layer bias must be non-empty");
    Tensor bias = Tensor::FromVector(std::move(b));
    if (kind == LayerKind::kDense) {
      const std::size_t out = bias.size();
      if (w.empty() || w.size() % out != 0) {
        throw Error(fmt::format("dense weights ({} values) not divisible by {} outputs",
                                w.size(), out));
      }
      const std::size_t in = w.size() / out;
      layers.push_back(LayerSpec::Dense(Tensor(Shape{out, in}, std::move(w)),
                                        std::move(bias)));
    } else {
      const std::size_t padding = j.value("padding", std::size_t{0});
      layers.push_back(LayerSpec::Conv2d(
          Tensor(ShapeArray(j, "weights_shape"), std::move(w)), std::move(bias),
          padding));
    }
  }
  return ModelGraph(input_shape, static_cast<std::size_t>(classes),
                    std::move(layers));
}

ModelGraph LoadModel(const std::string& path) {
  return WithPath<ModelGraph>(path, &ModelFromJson);
}

void SaveModel(const std::string& path, const ModelGraph& model) {
  WriteJsonFile(path, ModelToJson(model));
}

namespace {

const std::set<std::string>& KnownConfigKeys() {
  static const std::set<std::string> keys = {
      "description",        "tau",
      "eta_max",            "delta_euc",
      "lambda",             "gamma_step",
      "gamma_prior",        "max_cg_iters",
      "cg_tol",             "preconditioner",
      "blur_sigma",         "variant",
      "epsilon",            "score_target",
      "step_cap",           "record_states",
      "ig_steps",           "smoothgrad_samples",
      "smoothgrad_sigma",   "metric_steps",
      "mas_kernel",         "mas_sigma",
      "infidelity_samples", "infidelity_sigma",
      "sensitivity_radius", "sensitivity_samples",
  };
  return keys;
}

}  // namespace

RunConfig RunConfigFromJson(const Json& doc) {
  if (!doc.is_object()) throw Error("config document must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (!KnownConfigKeys().contains(key)) {
      throw Error(fmt::format("unknown config key '{}'", key));
    }
  }
  RunConfig c;
  FringeConfig& f = c.fringe;
  f.tau = doc.value("tau", f.tau);
  f.eta_max = doc.value("eta_max", f.eta_max);
  if (doc.contains("delta_euc")) {
    if (doc.at("delta_euc").is_null()) {
      f.delta_euc.reset();
    } else {
      f.delta_euc = doc.at("delta_euc").get<double>();
    }
  }
  f.solve.lambda = doc.value("lambda", f.solve.lambda);
  f.solve.gamma_step = doc.value("gamma_step", f.solve.gamma_step);
  f.solve.gamma_prior = doc.value("gamma_prior", f.solve.gamma_prior);
  f.solve.max_cg_iters = doc.value("max_cg_iters", f.solve.max_cg_iters);
  f.solve.cg_tol = doc.value("cg_tol", f.solve.cg_tol);
  if (doc.contains("preconditioner")) {
    f.solve.preconditioner =
        ParsePreconditioner(doc.at("preconditioner").get<std::string>());
  }
  f.solve.blur_sigma = doc.value("blur_sigma", f.solve.blur_sigma);
  if (doc.contains("variant")) {
    f.variant = ParseVariant(doc.at("variant").get<std::string>());
  }
  f.epsilon = doc.value("epsilon", f.epsilon);
  if (doc.contains("score_target")) {
    f.score_target = ParseScoreTarget(doc.at("score_target").get<std::string>());
  }
  f.step_cap = doc.value("step_cap", f.step_cap);
  f.record_states = doc.value("record_states", f.record_states);
  f.Validate();

  c.ig_steps = doc.value("ig_steps", c.ig_steps);
  c.smoothgrad_samples = doc.value("smoothgrad_samples", c.smoothgrad_samples);
  if (doc.contains("smoothgrad_sigma") && !doc.at("smoothgrad_sigma").is_null()) {
    c.smoothgrad_sigma = doc.at("smoothgrad_sigma").get<double>();
  }
  MetricsConfig& m = c.metrics;
  m.steps = doc.value("metric_steps", m.steps);
  m.mas_kernel = doc.value("mas_kernel", m.mas_kernel);
  m.mas_sigma = doc.value("mas_sigma", m.mas_sigma);
  m.infidelity.samples = doc.value("infidelity_samples", m.infidelity.samples);
  m.infidelity.sigma = doc.value("infidelity_sigma", m.infidelity.sigma);
  m.sensitivity.radius = doc.value("sensitivity_radius", m.sensitivity.radius);
  m.sensitivity.samples = doc.value("sensitivity_samples", m.sensitivity.samples);
  m.infidelity.score = f.score_target;
  m.sensitivity.epsilon = f.epsilon;
  if (c.ig_steps < 1) throw Error("ig_steps must be >= 1");
  if (m.steps < 1) throw Error("metric_steps must be >= 1");
  return c;
}

Json FringeConfigToJson(const FringeConfig& f) {
  Json j;
  j["tau"] = f.tau;
  j["eta_max"] = f.eta_max;
  j["delta_euc"] = f.delta_euc ? Json(*f.delta_euc) : Json(nullptr);
  j["lambda"] = f.solve.lambda;
  j["gamma_step"] = f.solve.gamma_step;
  j["gamma_prior"] = f.solve.gamma_prior;
  j["max_cg_iters"] = f.solve.max_cg_iters;
  j["cg_tol"] = f.solve.cg_tol;
  j["preconditioner"] = PreconditionerName(f.solve.preconditioner);
  j["blur_sigma"] = f.solve.blur_sigma;
  j["variant"] = VariantName(f.variant);
  j["epsilon"] = f.epsilon;
  j["score_target"] = ScoreTargetName(f.score_target);
  j["step_cap"] = f.step_cap;
  j["record_states"] = f.record_states;
  return j;
}

Json RunConfigToJson(const RunConfig& c) {
  Json j = FringeConfigToJson(c.fringe);
  j["ig_steps"] = c.ig_steps;
  j["smoothgrad_samples"] = c.smoothgrad_samples;
  j["smoothgrad_sigma"] =
      c.smoothgrad_sigma ? Json(*c.smoothgrad_sigma) : Json(nullptr);
  j["metric_steps"] = c.metrics.steps;
  j["mas_kernel"] = c.metrics.mas_kernel;
  j["mas_sigma"] = c.metrics.mas_sigma;
  j["infidelity_samples"] = c.metrics.infidelity.samples;
  j["infidelity_sigma"] = c.metrics.infidelity.sigma;
  j["sensitivity_radius"] = c.metrics.sensitivity.radius;
  j["sensitivity_samples"] = c.metrics.sensitivity.samples;
  return j;
}

RunConfig LoadRunConfig(const std::string& path) {
  return WithPath<RunConfig>(path, &RunConfigFromJson);
}

std::string EncodePgm(const SaliencyMap& saliency) {
  const auto& v = saliency.values;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double range = v.empty() ? 0.0 : *hi - *lo;
  std::string out = fmt::format("P5\n{} {}\n255\n", saliency.grid.width,
                                saliency.grid.height);
  out.reserve(out.size() + v.size());
  for (double s : v) {
    const double unit = range > 0.0 ? (s - *lo) / range : 0.0;
    out.push_back(static_cast<char>(
        static_cast<unsigned char>(std::lround(std::clamp(unit, 0.0, 1.0) * 255.0))));
  }
  return out;
}

void WritePgm(const std::string& path, const SaliencyMap& saliency) {
  WriteTextFile(path, EncodePgm(saliency));
}

}  // namespace fringe
