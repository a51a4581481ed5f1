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

#include "dirtree/forest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "dirtree/errors.h"
#include "dirtree/json_io.h"

namespace dirtree {

namespace {

constexpr int kModelVersion = 1;

double gini(double neg, double pos) {
  const double n = neg + pos;
  if (n == 0) return 0;
  return 1.0 - (neg * neg + pos * pos) / (n * n);
}

struct Sample {
  const FeatureVector* x;
  bool y;
};

struct SplitChoice {
  int feature = -1;
  double threshold = 0;
  double child_impurity = 0;  // sum of n_child * gini(child)
};

class TreeGrower {
 public:
  TreeGrower(const ForestHyperparams& hp, std::mt19937_64& rng,
             std::array<double, kNumFeatures>& importance)
      : hp_(hp), rng_(rng), importance_(importance) {}

  DecisionTree grow(std::vector<Sample> samples) {
    DecisionTree tree;
    tree.nodes.emplace_back();
    build(tree, 0, samples, 0);
    return tree;
  }

 private:
  void build(DecisionTree& tree, std::size_t node_index,
             std::vector<Sample>& samples, int depth) {
    std::array<std::uint32_t, 2> counts{};
    for (const Sample& s : samples) ++counts[s.y ? 1 : 0];
    tree.nodes[node_index].class_counts = counts;

    const bool pure = counts[0] == 0 || counts[1] == 0;
    const bool depth_done = hp_.max_depth && depth >= *hp_.max_depth;
    if (pure || depth_done ||
        samples.size() < 2 * static_cast<std::size_t>(hp_.min_samples_leaf)) {
      return;
    }
    const SplitChoice best = find_split(samples);
    if (best.feature < 0) return;

    const double n = static_cast<double>(samples.size());
    importance_[best.feature] +=
        n * gini(counts[0], counts[1]) - best.child_impurity;

    std::vector<Sample> left, right;
    for (const Sample& s : samples) {
      ((*s.x)[best.feature] <= best.threshold ? left : right).push_back(s);
    }
    samples.clear();
    samples.shrink_to_fit();

    const auto left_index = static_cast<std::uint32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[node_index].feature = best.feature;
    tree.nodes[node_index].threshold = best.threshold;
    tree.nodes[node_index].left = left_index;
    build(tree, left_index, left, depth + 1);
    const auto right_index = static_cast<std::uint32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[node_index].right = right_index;
    build(tree, right_index, right, depth + 1);
  }

  std::vector<int> sample_features() {
    std::array<int, kNumFeatures> all;
    std::iota(all.begin(), all.end(), 0);
    const std::size_t k = hp_.features_per_split();
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + rng_() % (kNumFeatures - i);
      std::swap(all[i], all[j]);
    }
    std::vector<int> chosen(all.begin(), all.begin() + k);
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  }

  // Lowest weighted Gini; ties go to the lower feature index, then the
  // lower threshold.
  SplitChoice find_split(const std::vector<Sample>& samples) {
    SplitChoice best;
    const std::size_t n = samples.size();
    const std::size_t min_leaf = static_cast<std::size_t>(hp_.min_samples_leaf);
    std::array<double, 2> total{};
    for (const Sample& s : samples) total[s.y ? 1 : 0] += 1;

    std::vector<std::pair<double, bool>> column(n);
    for (int f : sample_features()) {
      for (std::size_t i = 0; i < n; ++i) {
        column[i] = {(*samples[i].x)[f], samples[i].y};
      }
      std::sort(column.begin(), column.end());
      std::array<double, 2> left{};
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left[column[i].second ? 1 : 0] += 1;
        const double a = column[i].first, b = column[i + 1].first;
        if (a == b) continue;
        const std::size_t nl = i + 1, nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const std::array<double, 2> right{total[0] - left[0], total[1] - left[1]};
        const double impurity = static_cast<double>(nl) * gini(left[0], left[1]) +
                                static_cast<double>(nr) * gini(right[0], right[1]);
        double threshold = a + (b - a) / 2;
        if (threshold >= b) threshold = a;
        if (best.feature < 0 || impurity < best.child_impurity) {
          best = {f, threshold, impurity};
        }
      }
    }
    return best;
  }

  const ForestHyperparams& hp_;
  std::mt19937_64& rng_;
  std::array<double, kNumFeatures>& importance_;
};

void check_both_classes(const Dataset& d) {
  const bool has_pos = std::any_of(d.begin(), d.end(),
                                   [](const FeatureRow& r) { return r.directory; });
  const bool has_neg = std::any_of(d.begin(), d.end(),
                                   [](const FeatureRow& r) { return !r.directory; });
  if (!has_pos || !has_neg) {
    throw EmptyClassError("dataset must contain both directory and "
                          "non-directory rows");
  }
}

std::vector<std::size_t> draw(const std::vector<std::size_t>& pool,
                              std::size_t target, std::mt19937_64& rng) {
  std::vector<std::size_t> out;
  out.reserve(target);
  if (target <= pool.size()) {
    std::vector<std::size_t> p = pool;
    for (std::size_t i = 0; i < target; ++i) {
      const std::size_t j = i + rng() % (p.size() - i);
      std::swap(p[i], p[j]);
      out.push_back(p[i]);
    }
  } else {
    for (std::size_t i = 0; i < target; ++i) out.push_back(pool[rng() % pool.size()]);
  }
  return out;
}

Json node_to_json(const TreeNode& n) {
  if (n.is_leaf()) return Json{{"counts", {n.class_counts[0], n.class_counts[1]}}};
  return Json{{"feature", n.feature},
              {"threshold", n.threshold},
              {"left", n.left},
              {"right", n.right},
              {"counts", {n.class_counts[0], n.class_counts[1]}}};
}

}  // namespace

void ForestHyperparams::validate() const {
  if (n_trees < 1) throw InputError("n_trees must be positive");
  if (max_depth && *max_depth < 1) throw InputError("max_depth must be positive");
  if (!(max_features_fraction > 0 && max_features_fraction <= 1)) {
    throw InputError("max_features_fraction must be in (0, 1]");
  }
  if (min_samples_leaf < 1) throw InputError("min_samples_leaf must be positive");
}

std::size_t ForestHyperparams::features_per_split() const {
  // The epsilon keeps 0.8 * 15 from rounding up to 13.
  const double k = std::ceil(max_features_fraction * kNumFeatures - 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(k), 1, kNumFeatures);
}

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double DecisionTree::leaf_score(const FeatureVector& x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
  }
  const auto& c = nodes[i].class_counts;
  const double n = static_cast<double>(c[0]) + c[1];
  return n == 0 ? 0.0 : c[1] / n;
}

Dataset resample(const Dataset& d, std::size_t target_pos,
                 std::size_t target_neg, std::uint64_t seed) {
  check_both_classes(d);
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < d.size(); ++i) (d[i].directory ? pos : neg).push_back(i);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> picked = draw(pos, target_pos, rng);
  const std::vector<std::size_t> picked_neg = draw(neg, target_neg, rng);
  picked.insert(picked.end(), picked_neg.begin(), picked_neg.end());
  for (std::size_t i = picked.size(); i > 1; --i) {
    std::swap(picked[i - 1], picked[rng() % i]);
  }
  Dataset out;
  out.reserve(picked.size());
  for (std::size_t i : picked) out.push_back(d[i]);
  return out;
}

ForestModel train(const Dataset& d, const ForestHyperparams& hp,
                  unsigned threads) {
  hp.validate();
  check_both_classes(d);
  const auto n_trees = static_cast<std::size_t>(hp.n_trees);
  ForestModel model;
  model.hyperparams = hp;
  model.trees.resize(n_trees);
  std::vector<std::array<double, kNumFeatures>> per_tree(n_trees);

  auto train_one = [&](std::size_t t) {
    std::mt19937_64 rng(mix_seed(hp.seed + t));
    std::vector<Sample> bootstrap;
    bootstrap.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      const FeatureRow& row = hp.bootstrap ? d[rng() % d.size()] : d[i];
      bootstrap.push_back({&row.features, row.directory});
    }
    per_tree[t].fill(0);
    TreeGrower grower(hp, rng, per_tree[t]);
    model.trees[t] = grower.grow(std::move(bootstrap));
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_trees));
  if (threads <= 1) {
    for (std::size_t t = 0; t < n_trees; ++t) train_one(t);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        for (std::size_t t = w; t < n_trees; t += threads) train_one(t);
      });
    }
  }

  std::array<double, kNumFeatures> mean{};
  for (const auto& imp : per_tree) {
    const double sum = std::accumulate(imp.begin(), imp.end(), 0.0);
    if (sum <= 0) continue;
    for (std::size_t f = 0; f < kNumFeatures; ++f) mean[f] += imp[f] / sum;
  }
  const double total = std::accumulate(mean.begin(), mean.end(), 0.0);
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    // No tree ever reduced impurity: spread the mass evenly.
    model.feature_importances[f] =
        total > 0 ? mean[f] / total : 1.0 / static_cast<double>(kNumFeatures);
  }
  return model;
}

Prediction predict(const ForestModel& m, const FeatureVector& x,
                   double threshold) {
  if (m.trees.empty()) throw InvariantError("model has no trees");
  std::vector<double> scores;
  scores.reserve(m.trees.size());
  for (const DecisionTree& t : m.trees) scores.push_back(t.leaf_score(x));
  // Summing in sorted order makes the score independent of tree order.
  std::sort(scores.begin(), scores.end());
  const double sum = std::accumulate(scores.begin(), scores.end(), 0.0);
  Prediction p;
  p.score = std::clamp(sum / static_cast<double>(scores.size()), 0.0, 1.0);
  p.directory = p.score >= threshold;
  return p;
}

const std::array<double, kNumFeatures>& importances(const ForestModel& m) {
  return m.feature_importances;
}

std::string model_to_json_text(const ForestModel& m) {
  const ForestHyperparams& hp = m.hyperparams;
  Json jhp{{"n_trees", hp.n_trees},
           {"max_depth", hp.max_depth ? Json(*hp.max_depth) : Json(nullptr)},
           {"max_features_fraction", hp.max_features_fraction},
           {"min_samples_leaf", hp.min_samples_leaf},
           {"bootstrap", hp.bootstrap},
           {"seed", hp.seed}};
  Json order = Json::array();
  for (std::string_view name : feature_names()) order.push_back(name);
  Json trees = Json::array();
  for (const DecisionTree& t : m.trees) {
    Json nodes = Json::array();
    for (const TreeNode& n : t.nodes) nodes.push_back(node_to_json(n));
    trees.push_back(Json{{"nodes", nodes}});
  }
  Json j{{"version", kModelVersion},
         {"hyperparams", jhp},
         {"feature_order", order},
         {"importances", m.feature_importances},
         {"trees", trees}};
  return j.dump(1) + "\n";
}

ForestModel model_from_json_text(std::string_view text) {
  using namespace json_field;
  const Json j = parse_json_text(text, "model");
  if (integer(j, "version", "$") != kModelVersion) {
    throw SchemaError("$.version", "unsupported model version");
  }
  ForestModel m;
  const Json& jhp = require(j, "hyperparams", "$");
  m.hyperparams.n_trees = static_cast<int>(integer(jhp, "n_trees", "$.hyperparams"));
  const Json& depth = require(jhp, "max_depth", "$.hyperparams");
  if (!depth.is_null()) {
    m.hyperparams.max_depth = static_cast<int>(integer(jhp, "max_depth", "$.hyperparams"));
  }
  m.hyperparams.max_features_fraction =
      number(jhp, "max_features_fraction", "$.hyperparams");
  m.hyperparams.min_samples_leaf =
      static_cast<int>(integer(jhp, "min_samples_leaf", "$.hyperparams"));
  if (jhp.contains("bootstrap")) {
    m.hyperparams.bootstrap = boolean(jhp, "bootstrap", "$.hyperparams");
  }
  const Json& seed = require(jhp, "seed", "$.hyperparams");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
    throw SchemaError("$.hyperparams.seed", "expected an unsigned integer");
  }
  m.hyperparams.seed = seed.get<std::uint64_t>();
  try {
    m.hyperparams.validate();
  } catch (const InputError& e) {
    throw SchemaError("$.hyperparams", e.what());
  }

  const Json& order = array(j, "feature_order", "$");
  if (order.size() != kNumFeatures) {
    throw SchemaError("$.feature_order", "expected 15 feature names");
  }
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    if (!order[i].is_string() || order[i].get<std::string>() != feature_names()[i]) {
      throw SchemaError("$.feature_order[" + std::to_string(i) + "]",
                        "feature order does not match this build");
    }
  }
  const Json& imp = array(j, "importances", "$");
  if (imp.size() != kNumFeatures) throw SchemaError("$.importances", "expected 15 values");
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    if (!imp[i].is_number()) {
      throw SchemaError("$.importances[" + std::to_string(i) + "]", "expected a number");
    }
    m.feature_importances[i] = imp[i].get<double>();
  }

  const Json& trees = array(j, "trees", "$");
  if (trees.size() != static_cast<std::size_t>(m.hyperparams.n_trees)) {
    throw SchemaError("$.trees", "tree count differs from hyperparams.n_trees");
  }
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const std::string tp = "$.trees[" + std::to_string(t) + "]";
    const Json& nodes = array(trees[t], "nodes", tp);
    if (nodes.empty()) throw SchemaError(tp + ".nodes", "tree has no nodes");
    DecisionTree tree;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const std::string np = tp + ".nodes[" + std::to_string(i) + "]";
      TreeNode n;
      const Json& counts = array(nodes[i], "counts", np);
      if (counts.size() != 2 || !counts[0].is_number_unsigned() ||
          !counts[1].is_number_unsigned()) {
        throw SchemaError(np + ".counts", "expected two unsigned counts");
      }
      n.class_counts = {counts[0].get<std::uint32_t>(), counts[1].get<std::uint32_t>()};
      if (nodes[i].contains("feature")) {
        const long long f = integer(nodes[i], "feature", np);
        const long long l = integer(nodes[i], "left", np);
        const long long r = integer(nodes[i], "right", np);
        const auto size = static_cast<long long>(nodes.size());
        if (f < 0 || f >= static_cast<long long>(kNumFeatures)) {
          throw SchemaError(np + ".feature", "out of range");
        }
        if (l <= static_cast<long long>(i) || l >= size ||
            r <= static_cast<long long>(i) || r >= size || l == r) {
          throw SchemaError(np, "child indices must point forward");
        }
        n.feature = static_cast<int>(f);
        n.threshold = number(nodes[i], "threshold", np);
        n.left = static_cast<std::uint32_t>(l);
        n.right = static_cast<std::uint32_t>(r);
      }
      tree.nodes.push_back(n);
    }
    m.trees.push_back(std::move(tree));
  }
  return m;
}

}  // namespace dirtree
