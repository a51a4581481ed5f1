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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "dirtree/cli.h"
#include "dirtree/errors.h"
#include "dirtree/forest.h"
#include "dirtree/page_features.h"
#include "dirtree/pipeline.h"
#include "dirtree/visual_model.h"

namespace py = pybind11;
using namespace dirtree;

namespace {

Pipeline make_pipeline(const std::optional<std::string>& model_json,
                       const std::optional<std::string>& gazetteer_json, double threshold) {
  Gazetteer gaz = gazetteer_json ? gazetteer_from_json_text(*gazetteer_json) : default_gazetteer();
  std::optional<ForestModel> model;
  if (model_json) model = model_from_json_text(*model_json);
  return Pipeline(std::move(gaz), std::move(model), TreeParams{}, threshold);
}

std::vector<PageResult> run_pages(const std::string& doc_json, const std::string& pages,
                                  const std::optional<std::string>& model_json,
                                  const std::optional<std::string>& gazetteer_json,
                                  double threshold) {
  const auto doc = parse_document(doc_json);
  const Pipeline p = make_pipeline(model_json, gazetteer_json, threshold);
  py::gil_scoped_release release;
  return p.run(doc, parse_page_selection(pages));
}

}  // namespace

PYBIND11_MODULE(_dirtree, m) {
  m.doc() = "Directory extraction from visually rich pages";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

  m.def(
      "validate",
      [](const std::string& doc_json) {
        const auto doc = parse_document(doc_json);
        std::size_t groups = 0;
        for (const auto& page : doc) groups += page.groups.size();
        return std::make_tuple(doc.size(), groups);
      },
      py::arg("doc_json"), "Parses a visual document; returns (pages, groups).");

  m.def(
      "classify",
      [](const std::string& doc_json, const std::string& model_json, double threshold) {
        const auto doc = parse_document(doc_json);
        const Pipeline p = make_pipeline(model_json, std::nullopt, threshold);
        return classifications_to_json(p.classify(doc)).dump();
      },
      py::arg("doc_json"), py::arg("model_json"), py::arg("threshold") = 0.5);

  auto staged = [&m](const char* name, Json (*to_json)(const std::vector<PageResult>&)) {
    m.def(
        name,
        [to_json](const std::string& doc_json, const std::string& pages,
                  const std::optional<std::string>& model_json,
                  const std::optional<std::string>& gazetteer_json, double threshold) {
          return to_json(run_pages(doc_json, pages, model_json, gazetteer_json, threshold)).dump();
        },
        py::arg("doc_json"), py::arg("pages") = "auto", py::arg("model_json") = py::none(),
        py::arg("gazetteer_json") = py::none(), py::arg("threshold") = 0.5);
  };
  staged("segment", &segments_to_json);
  staged("tree", &trees_to_json);
  staged("blocks", &page_blocks_to_json);

  m.def(
      "train",
      [](const std::string& csv_text, std::size_t pos, std::size_t neg, std::uint64_t seed,
         int n_trees, unsigned threads) {
        const Dataset d = features_from_csv(csv_text);
        ForestHyperparams hp;
        hp.seed = seed;
        hp.n_trees = n_trees;
        hp.validate();
        const Dataset sample = resample(d, pos, neg, seed);
        py::gil_scoped_release release;
        return model_to_json_text(train(sample, hp, threads));
      },
      py::arg("csv_text"), py::arg("pos"), py::arg("neg"), py::arg("seed"),
      py::arg("n_trees") = ForestHyperparams{}.n_trees, py::arg("threads") = 0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"dirtree"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        return std::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line tool in process; returns (code, stdout, stderr).");
}
