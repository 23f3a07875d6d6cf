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

// Writes the bundled toy data set: five seeded MLPs, one input each, and a
// manifest listing them.
//
//   make_toy_suite <out_dir>

#include <filesystem>
#include <iostream>

#include <fmt/format.h>

#include "fringe/io.h"
#include "fringe/toy.h"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_toy_suite <out_dir>\n";
    return 2;
  }
  namespace fs = std::filesystem;
  const fs::path out(argv[1]);
  fs::create_directories(out);
  fringe::Json cases = fringe::Json::array();
  const std::vector<fringe::ToyCase> suite = fringe::MakeToySuite();
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const std::string model = fmt::format("model_{}.json", i + 1);
    const std::string input = fmt::format("input_{}.json", i + 1);
    fringe::SaveModel((out / model).string(), suite[i].model);
    fringe::WriteJsonFile((out / input).string(),
                          fringe::TensorToJson(suite[i].input));
    cases.push_back({{"model", model}, {"input", input}, {"target", suite[i].target}});
  }
  fringe::Json manifest = {{"cases", cases},
                           {"method", "fringe"},
                           {"config", "config.json"},
                           {"out", "out"},
                           {"seed", 0}};
  fringe::WriteJsonFile((out / "manifest.json").string(), manifest);
  return 0;
}
