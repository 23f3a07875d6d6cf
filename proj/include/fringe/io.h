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

// File formats.
//
//   tensor  {"shape": [..], "data": [..]}            row-major
//   model   {"input_shape": [..], "class_count": C,
//            "layers": [{"kind", "activation", "weights", "bias",
//                        "weights_shape", "padding"}]}
//   config  flat object of run knobs, see RunConfig
//   heatmap binary PGM (P5), 8-bit, min-max scaled
//
// Doubles are written in shortest round-trip form, so saving and reloading a
// model or tensor reproduces every bit.

#ifndef FRINGE_IO_H_
#define FRINGE_IO_H_

#include <cstddef>
#include <optional>
#include <string>

#include "json.hpp"

#include "fringe/baselines.h"
#include "fringe/driver.h"
#include "fringe/metrics.h"
#include "fringe/model.h"
#include "fringe/tensor.h"

namespace fringe {

using Json = nlohmann::json;

// Raised for unreadable or malformed files; the message names the path.
class FileError : public Error {
 public:
  using Error::Error;
};

Json ReadJsonFile(const std::string& path);
void WriteJsonFile(const std::string& path, const Json& doc);
void WriteTextFile(const std::string& path, const std::string& text);

Json TensorToJson(const Tensor& t);
Tensor TensorFromJson(const Json& doc);
Tensor LoadTensor(const std::string& path);

Json ModelToJson(const ModelGraph& model);
ModelGraph ModelFromJson(const Json& doc);
ModelGraph LoadModel(const std::string& path);
void SaveModel(const std::string& path, const ModelGraph& model);

// Every knob a CLI run can set, read from one flat JSON object.
struct RunConfig {
  FringeConfig fringe;
  std::size_t ig_steps = 64;
  std::size_t smoothgrad_samples = 25;
  std::optional<double> smoothgrad_sigma;  // default: 0.1 * input range
  MetricsConfig metrics;
};

RunConfig RunConfigFromJson(const Json& doc);
Json RunConfigToJson(const RunConfig& cfg);
RunConfig LoadRunConfig(const std::string& path);

Json FringeConfigToJson(const FringeConfig& cfg);

// Saliency as an 8-bit grayscale image; a constant map renders black.
std::string EncodePgm(const SaliencyMap& saliency);
void WritePgm(const std::string& path, const SaliencyMap& saliency);

}  // namespace fringe

#endif  // FRINGE_IO_H_
