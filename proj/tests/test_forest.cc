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

#include <algorithm>
#include <map>
#include <functional>
#include <random>
#include <set>

#include "catch_amalgamated.hpp"
#include "dirtree/errors.h"
#include "dirtree/forest.h"
#include "dirtree/metrics.h"
#include "dirtree/synthetic.h"
#include "test_support.h"

using namespace dirtree;
using dirtree::testing::brute_force_split;

namespace {

FeatureRow row(double x0, bool y, int feature = 0) {
  FeatureRow r;
  r.features[static_cast<std::size_t>(feature)] = x0;
  r.directory = y;
  return r;
}

Dataset tiny() {
  return {row(1, false), row(2, false), row(10, true), row(11, true)};
}

ForestHyperparams exact_single_tree() {
  ForestHyperparams hp;
  hp.n_trees = 1;
  hp.max_features_fraction = 1.0;
  hp.min_samples_leaf = 1;
  hp.bootstrap = false;
  return hp;
}

DecisionTree leaf_tree(std::uint32_t neg, std::uint32_t pos) {
  DecisionTree t;
  t.nodes.resize(1);
  t.nodes[0].class_counts = {neg, pos};
  return t;
}

}  // namespace

TEST_CASE("depth-one tree recovers the brute-force optimal split") {
  ForestHyperparams hp = exact_single_tree();
  hp.max_depth = 1;
  const ForestModel m = train(tiny(), hp);
  const auto& nodes = m.trees.at(0).nodes;
  REQUIRE(nodes.size() == 3);
  const auto oracle = brute_force_split(tiny(), 0);
  REQUIRE(oracle.optimal_thresholds.size() == 1);
  CHECK(oracle.best_impurity == 0);
  CHECK(nodes[0].feature == 0);
  CHECK(nodes[0].threshold == oracle.optimal_thresholds[0]);
  CHECK(nodes[0].threshold > 2);
  CHECK(nodes[0].threshold < 10);
  CHECK(nodes[nodes[0].left].class_counts == std::array<std::uint32_t, 2>{2, 0});
  CHECK(nodes[nodes[0].right].class_counts == std::array<std::uint32_t, 2>{0, 2});
  // All the impurity decrease comes from feature 0.
  CHECK(importances(m)[0] == Catch::Approx(1.0));
}

TEST_CASE("root split matches brute force on random one-feature data") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    Dataset d;
    const int n = 4 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      d.push_back(row(static_cast<double>(rng() % 20), rng() % 2 == 0, 3));
    }
    d.push_back(row(0, true, 3));
    d.push_back(row(0, false, 3));
    ForestHyperparams hp = exact_single_tree();
    hp.max_depth = 1;
    const auto oracle = brute_force_split(d, 3);
    const ForestModel m = train(d, hp);
    const TreeNode& root = m.trees[0].nodes[0];
    if (oracle.optimal_thresholds.empty()) {
      CHECK(root.is_leaf());
      continue;
    }
    REQUIRE_FALSE(root.is_leaf());
    CHECK(root.feature == 3);
    // Ties resolve to the lowest optimal threshold.
    CHECK(root.threshold == oracle.optimal_thresholds.front());
  }
}

TEST_CASE("identical rows with mixed labels give a single mixed leaf") {
  Dataset d{row(5, true), row(5, false), row(5, true)};
  const ForestModel m = train(d, exact_single_tree());
  REQUIRE(m.trees[0].nodes.size() == 1);
  CHECK(m.trees[0].nodes[0].class_counts == std::array<std::uint32_t, 2>{1, 2});
  // No impurity decrease anywhere: importances fall back to uniform.
  for (double v : importances(m)) CHECK(v == Catch::Approx(1.0 / 15));
}

TEST_CASE("resampling hits the requested class counts") {
  Dataset d;
  for (int i = 0; i < 83; ++i) d.push_back(row(i, true));
  for (int i = 0; i < 8472; ++i) d.push_back(row(1000 + i, false));
  const Dataset r = resample(d, 83, 800, 17);
  REQUIRE(r.size() == 883);
  std::map<double, int> seen;
  std::size_t pos = 0;
  for (const FeatureRow& x : r) {
    pos += x.directory;
    ++seen[x.features[0]];
  }
  CHECK(pos == 83);
  // Both classes fit their supply, so no row repeats.
  CHECK(seen.size() == 883);
}

TEST_CASE("resampling to the current counts permutes the input") {
  Dataset d;
  for (int i = 0; i < 10; ++i) d.push_back(row(i, i % 3 == 0));
  const Dataset r = resample(d, 4, 6, 5);
  std::vector<double> a, b;
  for (const auto& x : d) a.push_back(x.features[0]);
  for (const auto& x : r) b.push_back(x.features[0]);
  CHECK(std::is_permutation(a.begin(), a.end(), b.begin(), b.end()));
}

TEST_CASE("oversampling matches a seeded reference draw") {
  Dataset d;
  for (int i = 0; i < 83; ++i) d.push_back(row(i, true));
  for (int i = 0; i < 1000; ++i) d.push_back(row(1000 + i, false));
  const std::uint64_t seed = 2024;
  const Dataset r = resample(d, 166, 2000, seed);

  // Reference: positives then negatives drawn uniformly with replacement.
  std::mt19937_64 rng(seed);
  std::multiset<double> expected;
  for (int i = 0; i < 166; ++i) expected.insert(static_cast<double>(rng() % 83));
  for (int i = 0; i < 2000; ++i) expected.insert(1000.0 + static_cast<double>(rng() % 1000));
  std::multiset<double> got;
  for (const auto& x : r) got.insert(x.features[0]);
  CHECK(got == expected);
  CHECK(std::count_if(r.begin(), r.end(), [](const FeatureRow& x) { return x.directory; }) == 166);
}

TEST_CASE("resampling and training need both classes") {
  Dataset only_pos{row(1, true), row(2, true)};
  CHECK_THROWS_AS(resample(only_pos, 1, 1, 0), EmptyClassError);
  CHECK_THROWS_AS(train(only_pos, ForestHyperparams{}), EmptyClassError);
  CHECK_THROWS_AS(train(Dataset{}, ForestHyperparams{}), EmptyClassError);
}

TEST_CASE("prediction averages leaf scores with ties going positive") {
  ForestModel one;
  one.trees = {leaf_tree(0, 5)};
  CHECK(predict(one, FeatureVector{}).score == 1.0);

  ForestModel two;
  two.trees = {leaf_tree(0, 3), leaf_tree(4, 0)};
  const Prediction p = predict(two, FeatureVector{});
  CHECK(p.score == 0.5);
  CHECK(p.directory);
  CHECK_FALSE(predict(two, FeatureVector{}, 0.6).directory);
}

TEST_CASE("a single importance-bearing feature gets all the mass") {
  Dataset d;
  for (int i = 0; i < 40; ++i) d.push_back(row(i < 20 ? i : i + 10, i >= 20, 9));
  ForestHyperparams hp;
  hp.seed = 3;
  const ForestModel m = train(d, hp);
  const auto& imp = importances(m);
  CHECK(imp[9] == Catch::Approx(1.0));
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    if (f != 9) CHECK(imp[f] == 0);
  }
}

TEST_CASE("fully grown single tree fits distinct training rows exactly") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    Dataset d;
    std::set<std::vector<double>> xs;
    while (d.size() < 20) {
      FeatureRow r;
      for (int k = 0; k < 3; ++k) r.features[k] = static_cast<double>(rng() % 6);
      if (!xs.insert({r.features[0], r.features[1], r.features[2]}).second) continue;
      r.directory = rng() % 2 == 0;
      d.push_back(r);
    }
    d.push_back(row(100, true));
    d.push_back(row(101, false));
    const ForestModel m = train(d, exact_single_tree());
    for (const FeatureRow& r : d) CHECK(predict(m, r.features).directory == r.directory);
  }
}

TEST_CASE("trained trees respect structural invariants") {
  const Dataset d = synth::margin_dataset(40, 200, 9);
  ForestHyperparams hp;
  hp.seed = 12;
  hp.min_samples_leaf = 3;
  const ForestModel m = train(d, hp);
  REQUIRE(m.trees.size() == 20);
  double sum = 0;
  for (double v : importances(m)) {
    CHECK(v >= 0);
    sum += v;
  }
  CHECK(std::abs(sum - 1.0) <= 1e-9);
  for (const DecisionTree& t : m.trees) {
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
      const TreeNode& n = t.nodes[i];
      if (n.is_leaf()) {
        CHECK(n.class_counts[0] + n.class_counts[1] >= 3u);
      } else {
        CHECK(n.feature < 15);
        CHECK(n.left > i);
        CHECK(n.right > i);
      }
    }
  }
}

TEST_CASE("training is deterministic and independent of thread count") {
  const Dataset d = synth::margin_dataset(30, 120, 4);
  ForestHyperparams hp;
  hp.seed = 77;
  const std::string a = model_to_json_text(train(d, hp, 1));
  CHECK(a == model_to_json_text(train(d, hp, 1)));
  CHECK(a == model_to_json_text(train(d, hp, 3)));
  hp.seed = 78;
  CHECK(a != model_to_json_text(train(d, hp, 1)));
}

TEST_CASE("adding trees leaves earlier trees unchanged") {
  const Dataset d = synth::margin_dataset(30, 120, 4);
  ForestHyperparams hp;
  hp.seed = 1;
  hp.n_trees = 5;
  const ForestModel small = train(d, hp);
  hp.n_trees = 10;
  const ForestModel big = train(d, hp);
  for (int t = 0; t < 5; ++t) CHECK(small.trees[t] == big.trees[t]);
}

TEST_CASE("prediction ignores tree order") {
  const Dataset d = synth::margin_dataset(30, 120, 6);
  ForestModel m = train(d, ForestHyperparams{});
  ForestModel shuffled = m;
  std::reverse(shuffled.trees.begin(), shuffled.trees.end());
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    FeatureVector x;
    for (double& v : x) v = synth::uniform(rng, 0, 50);
    CHECK(predict(m, x).score == predict(shuffled, x).score);
  }
}

TEST_CASE("serialization round-trip preserves predictions exactly") {
  const Dataset d = synth::margin_dataset(30, 120, 2);
  ForestHyperparams hp;
  hp.max_depth = 4;
  const ForestModel m = train(d, hp);
  const std::string text = model_to_json_text(m);
  const ForestModel back = model_from_json_text(text);
  CHECK(model_to_json_text(back) == text);
  CHECK(back.hyperparams.max_depth == 4);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    FeatureVector x;
    for (double& v : x) v = synth::uniform(rng, 0, 400);
    CHECK(predict(back, x).score == predict(m, x).score);
  }
  CHECK_THROWS_AS(model_from_json_text("{}"), InputError);
  CHECK_THROWS_AS(model_from_json_text("not json"), InputError);
}

TEST_CASE("desk-scale model fits its own training rows") {
  const Dataset d = synth::margin_dataset(83, 800, 21);
  const ForestModel m = train(d, ForestHyperparams{});
  std::map<std::size_t, bool> preds, golds;
  for (std::size_t i = 0; i < d.size(); ++i) {
    preds[i] = predict(m, d[i].features).directory;
    golds[i] = d[i].directory;
  }
  const double f1 = eval_classifier(preds, golds).f1;
  CHECK(f1 >= 0.85);
  CHECK(f1 <= 1.0);
}

TEST_CASE("hyperparameter validation") {
  ForestHyperparams hp;
  CHECK(hp.features_per_split() == 12);
  hp.max_features_fraction = 1.0 / 15;
  CHECK(hp.features_per_split() == 1);
  for (auto mutate : std::vector<std::function<void(ForestHyperparams&)>>{
           [](ForestHyperparams& h) { h.n_trees = 0; },
           [](ForestHyperparams& h) { h.max_depth = 0; },
           [](ForestHyperparams& h) { h.max_features_fraction = 0; },
           [](ForestHyperparams& h) { h.max_features_fraction = 1.5; },
           [](ForestHyperparams& h) { h.min_samples_leaf = 0; }}) {
    ForestHyperparams bad;
    mutate(bad);
    CHECK_THROWS_AS(bad.validate(), InputError);
  }
}
