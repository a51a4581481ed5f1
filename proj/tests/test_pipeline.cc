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

#include <atomic>
#include <string>

#include "catch_amalgamated.hpp"
#include "dirtree/errors.h"
#include "dirtree/json_io.h"
#include "dirtree/page_features.h"
#include "dirtree/pipeline.h"
#include "test_support.h"

using namespace dirtree;
using namespace dirtree::testing;

namespace {

Pipeline shipped_pipeline() {
  return Pipeline(default_gazetteer(), model_from_json_text(read_file(data_path("model.json"))));
}

}  // namespace

TEST_CASE("config parsing") {
  const PipelineConfig empty = config_from_json(Json::object());
  CHECK_FALSE(empty.model_path);
  CHECK(empty.threshold == 0.5);
  CHECK_NOTHROW(empty.validate());

  const PipelineConfig c = config_from_json(Json::parse(
      R"({"threshold":0.7,"output_dir":"out","tree_params":{"align_tol":4,"gap_factor":2}})"));
  CHECK(c.threshold == 0.7);
  CHECK(c.output_dir == "out");
  CHECK(c.tree_params.align_tol == 4);
  CHECK(c.tree_params.gap_factor == 2);
  CHECK(c.tree_params.band_overlap_frac == TreeParams{}.band_overlap_frac);

  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"tree_params":{"colour":1}})")), SchemaError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"threshold":"high"})")), SchemaError);
  CHECK_THROWS_AS(config_from_json(Json::parse("[1]")), SchemaError);
}

TEST_CASE("config validation") {
  PipelineConfig c;
  c.threshold = 1.5;
  CHECK_THROWS_AS(c.validate(), InputError);
  c = PipelineConfig{};
  c.model_path = "/nonexistent/model.json";
  CHECK_THROWS_AS(c.validate(), InputError);
  c = PipelineConfig{};
  c.model_path = data_path("model.json");
  CHECK_NOTHROW(c.validate());
  c.tree_params.gap_factor = -1;
  CHECK_THROWS_AS(c.validate(), InputError);
}

TEST_CASE("page selection parsing") {
  CHECK(parse_page_selection("auto").mode == PageSelection::Mode::kAuto);
  CHECK(parse_page_selection("all").mode == PageSelection::Mode::kAll);
  const PageSelection s = parse_page_selection("5-7,0,2,6");
  CHECK(s.mode == PageSelection::Mode::kList);
  CHECK(s.pages == std::vector<std::size_t>{0, 2, 5, 6, 7});
  for (const char* bad : {"", "x", "1,", "3-1", "-2", "1.5", "2--3"}) {
    INFO(bad);
    CHECK_THROWS_AS(parse_page_selection(bad), InputError);
  }
}

TEST_CASE("page selection against a document") {
  const auto doc = load_fixture("mixed.json");
  const Pipeline p = shipped_pipeline();
  CHECK(p.select(doc, parse_page_selection("all")) == std::vector<std::size_t>{0, 1});
  CHECK(p.select(doc, parse_page_selection("auto")) == std::vector<std::size_t>{1});
  CHECK(p.select(doc, parse_page_selection("0")) == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(p.select(doc, parse_page_selection("0-2")), InputError);

  const Pipeline no_model(default_gazetteer(), std::nullopt);
  CHECK_THROWS_AS(no_model.select(doc, parse_page_selection("auto")), InputError);
  CHECK_NOTHROW(no_model.select(doc, parse_page_selection("all")));
}

TEST_CASE("classification output") {
  const auto doc = load_fixture("mixed.json");
  const auto c = shipped_pipeline().classify(doc);
  REQUIRE(c.size() == 2);
  CHECK_FALSE(c[0].prediction.directory);
  CHECK(c[1].prediction.directory);
  const Json j = classifications_to_json(c);
  CHECK(j["pages"][1]["label"] == "directory");
  CHECK(j["pages"][0]["label"] == "other");
}

TEST_CASE("run matches the composed stages") {
  const auto doc = load_fixture("mixed.json");
  const Pipeline p = shipped_pipeline();
  const auto results = p.run(doc, parse_page_selection("all"));
  REQUIRE(results.size() == doc.size());
  for (const auto& r : results) {
    const auto spans = p.segment(doc[r.page], r.page);
    const ReadingTree t = p.tree(spans);
    CHECK(spans_to_json(r.page, r.spans) == spans_to_json(r.page, spans));
    CHECK(tree_to_json(r.tree) == tree_to_json(t));
    CHECK(r.blocks == directory_blocks(t));
  }
  const auto& blocks = results[1].blocks;
  const auto want = fig1a_expected_blocks();
  REQUIRE(blocks.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(blocks[i].headers == want[i].headers);
  const Json j = page_blocks_to_json(results);
  CHECK(j["blocks"].size() == results[0].blocks.size() + results[1].blocks.size());
  CHECK(trees_to_json(results)["pages"][1]["page"] == 1);
  CHECK(segments_to_json(results)["pages"].size() == 2);
}

TEST_CASE("run is deterministic across thread counts") {
  auto doc = load_fixture("mixed.json");
  const auto more = load_fixture("fig1a.json");
  doc.insert(doc.end(), more.begin(), more.end());
  Pipeline p = shipped_pipeline();
  p.threads = 1;
  const Json one = trees_to_json(p.run(doc, parse_page_selection("all")));
  p.threads = 4;
  const Json four = trees_to_json(p.run(doc, parse_page_selection("all")));
  CHECK(one.dump() == four.dump());
  const auto f1 = p.features(doc);
  p.threads = 1;
  const auto f2 = p.features(doc);
  REQUIRE(f1.size() == f2.size());
  for (std::size_t i = 0; i < f1.size(); ++i) CHECK(f1[i] == f2[i]);
}

TEST_CASE("parallel_map keeps input order") {
  std::atomic<int> calls{0};
  const auto v = parallel_map<std::size_t>(
      1000, [&](std::size_t i) { ++calls; return i * i; }, 8);
  REQUIRE(v.size() == 1000);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == i * i);
  CHECK(calls == 1000);
  CHECK(parallel_map<int>(0, [](std::size_t) { return 1; }).empty());
  CHECK_THROWS_AS(parallel_map<int>(
                      10, [](std::size_t i) -> int {
                        if (i == 7) throw InputError("boom");
                        return 0;
                      },
                      3),
                  InputError);
}
