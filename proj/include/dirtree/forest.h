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

#ifndef DIRTREE_FOREST_H_
#define DIRTREE_FOREST_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dirtree/page_features.h"

namespace dirtree {

using Dataset = std::vector<FeatureRow>;

// Defaults: unlimited depth, 0.8 of the features per split, at least 2
// samples per leaf, 20 trees.
struct ForestHyperparams {
  int n_trees = 20;
  std::optional<int> max_depth;  // nullopt = grow until pure
  double max_features_fraction = 0.8;
  int min_samples_leaf = 2;
  bool bootstrap = true;  // false trains every tree on the full dataset
  std::uint64_t seed = 0;

  // Throws InputError when a field is out of range.
  void validate() const;
  // ceil(max_features_fraction * kNumFeatures), at least 1.
  std::size_t features_per_split() const;
};

// Flat node storage; children always have larger indices than their parent.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  std::array<std::uint32_t, 2> class_counts{};  // [non-directory, directory]

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  // Fraction of directory samples in the leaf reached by `x`. Samples with
  // x[feature] <= threshold go left.
  double leaf_score(const FeatureVector& x) const;
  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

struct ForestModel {
  ForestHyperparams hyperparams;
  std::vector<DecisionTree> trees;
  std::array<double, kNumFeatures> feature_importances{};
};

struct Prediction {
  bool directory = false;
  double score = 0;
};

// Draws exactly target_pos directory rows and target_neg other rows and
// shuffles them. A class is sampled without replacement when the target
// fits its supply and with replacement otherwise. Random draws come from
// std::mt19937_64(seed) as `rng() % n`, so results are portable.
Dataset resample(const Dataset& d, std::size_t target_pos,
                 std::size_t target_neg, std::uint64_t seed);

// CART trees on bootstrap samples with Gini impurity. Deterministic given
// hp.seed; tree i uses seed mix_seed(hp.seed + i) so it does not depend on
// how many trees are trained. `threads` == 0 picks hardware concurrency; the
// result is identical for any thread count.
ForestModel train(const Dataset& d, const ForestHyperparams& hp,
                  unsigned threads = 0);

// Mean leaf score over the trees. Label is directory iff score >= threshold.
Prediction predict(const ForestModel& m, const FeatureVector& x,
                   double threshold = 0.5);

// Normalized mean decrease in Gini impurity.
const std::array<double, kNumFeatures>& importances(const ForestModel& m);

std::uint64_t mix_seed(std::uint64_t x);

std::string model_to_json_text(const ForestModel& m);
ForestModel model_from_json_text(std::string_view text);

}  // namespace dirtree

#endif  // DIRTREE_FOREST_H_
