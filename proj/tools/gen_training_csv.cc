// Copyright 2026 The dirtree Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Writes a synthetic, margin-separated training CSV for the page classifier.

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "dirtree/json_io.h"
#include "dirtree/page_features.h"
#include "dirtree/synthetic.h"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic page-classifier training data"};
  std::size_t pos = 100, neg = 100;
  std::uint64_t seed = 1;
  std::string out;
  app.add_option("--pos", pos, "Directory rows");
  app.add_option("--neg", neg, "Other rows");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--out", out, "Output CSV (default: stdout)");
  CLI11_PARSE(app, argc, argv);
  const std::string csv =
      dirtree::features_to_csv(dirtree::synth::margin_dataset(pos, neg, seed));
  if (out.empty()) {
    std::cout << csv;
  } else {
    dirtree::write_file(out, csv);
  }
  return 0;
}
