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

#ifndef DIRTREE_METRICS_H_
#define DIRTREE_METRICS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dirtree/json_io.h"
#include "dirtree/segmenter.h"
#include "dirtree/tree_builder.h"

namespace dirtree {

struct PRF {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

// 0/0 counts as 0 for precision, recall and F1.
PRF prf_from_counts(std::size_t tp, std::size_t fp, std::size_t fn);
PRF operator+(const PRF& a, const PRF& b);  // sums counts, recomputes rates

// Collapses whitespace runs to one space and trims.
std::string normalize_ws(std::string_view s);

// Directory is the positive class. Keys are page indices; the key sets must
// match or PageSetMismatch is thrown.
PRF eval_classifier(const std::map<std::size_t, bool>& preds,
                    const std::map<std::size_t, bool>& golds);

struct SpanItem {
  std::size_t group = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  SpanLabel label = SpanLabel::kBody;
  friend auto operator<=>(const SpanItem&, const SpanItem&) = default;
};

// Exact (group, start, end, label) matches; Neither items are not scored.
PRF eval_segmentation_page(const std::vector<SpanItem>& pred,
                           const std::vector<SpanItem>& gold);

struct SegmentationReport {
  PRF overall;
  std::map<std::size_t, PRF> per_page;
};

SegmentationReport eval_segmentation(
    const std::map<std::size_t, std::vector<SpanItem>>& pred,
    const std::map<std::size_t, std::vector<SpanItem>>& gold);

struct TreeScores {
  PRF dir_block;      // whole header stack plus body
  PRF body_parent;    // body with its immediate parent header
  PRF block_nodes;    // node positions across aligned blocks

  TreeScores& operator+=(const TreeScores& o);
};

TreeScores eval_tree(const ReadingTree& pred, const ReadingTree& gold);

struct TreeReport {
  TreeScores overall;
  std::map<std::size_t, TreeScores> per_page;
};

TreeReport eval_trees(const std::map<std::size_t, ReadingTree>& pred,
                      const std::map<std::size_t, ReadingTree>& gold);

// Gold annotations for one page.
struct GoldSpan {
  std::size_t group = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  SpanLabel label = SpanLabel::kBody;
  std::optional<std::size_t> parent;  // index into spans; nullopt = root
  std::optional<std::string> text;    // optional inline text
};

struct GoldPage {
  std::size_t page = 0;
  bool is_directory = false;
  std::vector<GoldSpan> spans;
};

std::vector<GoldPage> gold_from_json(const Json& j);
Json gold_to_json(const std::vector<GoldPage>& pages);

// Builds the gold reading tree. Span text comes from `page` when given,
// otherwise from the inline "text" fields. Throws SchemaError when the
// parents do not describe a valid tree.
ReadingTree gold_tree(const GoldPage& gold, const VisualPage* page);

Json prf_to_json(const PRF& p);

}  // namespace dirtree

#endif  // DIRTREE_METRICS_H_
