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

// Command implementations behind the `fringe` executable.
//
// A manifest names the cases to process and how:
//
//   {
//     "model": "model.json",            // default model for every case
//     "inputs": ["a.json", "b.json"],   // or "cases": [{"model", "input",
//                                       //   "target", "attribution"}]
//     "method": "fringe",               // fringe | fringe_variant:<tag> |
//                                       // ig | smoothgrad | gradient
//     "variant": "full",
//     "config": "config.json",
//     "baseline": "zeros.json",         // ig only; zeros when omitted
//     "out": "out/",
//     "seed": 0
//   }
//
// Relative paths resolve against the manifest's directory.

#ifndef FRINGE_CLI_H_
#define FRINGE_CLI_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fringe/driver.h"
#include "fringe/io.h"
#include "fringe/metrics.h"
#include "fringe/model.h"

namespace fringe {

struct CaseSpec {
  std::string model_path;
  std::string input_path;
  std::optional<std::size_t> target;
  std::optional<std::string> attribution_path;  // evaluate only
};

struct RunManifest {
  std::vector<CaseSpec> cases;
  std::string method = "fringe";
  std::optional<std::string> variant;
  std::optional<std::string> config_path;
  std::optional<std::string> baseline_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
};

RunManifest LoadManifest(const std::string& path);

enum class MethodKind { kFringe, kIg, kSmoothGrad, kGradient };

struct MethodSpec {
  MethodKind kind = MethodKind::kFringe;
  Variant variant = Variant::kFull;

  // "fringe:full", "ig", ... used in file names and reports.
  std::string Tag() const;
};

// Parses "fringe", "fringe_variant:<tag>", "ig", "smoothgrad" or "gradient".
// `variant_override` applies to plain "fringe".
MethodSpec ParseMethod(const std::string& method,
                       const std::optional<std::string>& variant_override,
                       const RunConfig& cfg);

// Runs one attribution method. For the non-path methods the result carries
// only the attribution and target scores.
AttributionResult RunMethod(const MethodSpec& method, const ModelGraph& model,
                            const Tensor& x, std::size_t target,
                            const RunConfig& cfg, std::uint64_t seed,
                            const Tensor* baseline);

Json TrajectoryToJson(const TrajectoryRecord& traj);

// Writes attribution tensors, heatmaps and report.json into out_dir and
// returns the report.
Json CmdAttribute(const RunManifest& manifest);

// Writes <stem>.<method>.metrics.json per case plus summary.csv and
// metrics_report.json.
Json CmdEvaluate(const RunManifest& manifest);

// Sweep document: {"tau": [..], "delta_euc": [x, null, ..]}; any missing
// axis keeps the config value. Writes diagnose.json and diagnose.csv.
Json CmdDiagnose(const RunManifest& manifest, const Json& sweep);

Json MetricsReportToJson(const MetricsReport& rep);

// Copy of a report with every "timing_ms" field removed.
Json StripTiming(const Json& report);

// Entry point used by main(); returns the process exit code.
int RunCli(int argc, char** argv);

}  // namespace fringe

#endif  // FRINGE_CLI_H_
