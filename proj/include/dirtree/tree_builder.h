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

#ifndef DIRTREE_TREE_BUILDER_H_
#define DIRTREE_TREE_BUILDER_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dirtree/json_io.h"
#include "dirtree/segmenter.h"

namespace dirtree {

// Geometry thresholds of the tree construction. Lengths are in points
// except gap_factor, which is in units of the page's median line height.
struct TreeParams {
  double band_overlap_frac = 0.5;
  double align_tol = 5;
  double gap_factor = 1.5;
  double min_x_overlap_frac = 0.3;
  double size_cluster_tol = 0.5;

  // Throws InputError when a value is out of range.
  void validate() const;
};

enum class CasingClass { kAllCaps, kTitle, kOther };
CasingClass casing_class(std::string_view text);

// Cluster id per span (dense from 1), nullopt for non-header spans. Headers
// are split by font size (single linkage within size_cluster_tol), then by
// the exact (bold, italic, color, casing) tuple.
std::vector<std::optional<int>> cluster_headers(std::span<const LabeledSpan> spans,
                                                const TreeParams& p);

// Indices of the non-Neither spans in reading order: horizontal bands top
// to bottom, left to right inside a band. Two spans are linked when their
// vertical overlap is at least band_overlap_frac of the shorter one; bands
// are the connected components of that relation.
std::vector<std::size_t> reading_sequence(std::span<const LabeledSpan> spans,
                                          const TreeParams& p);

// Per-page state shared by the parenting predicates.
struct TreeContext {
  std::span<const LabeledSpan> spans;
  std::vector<std::optional<int>> clusters;
  double median_line_height = 0;
  TreeParams params;
};

TreeContext make_tree_context(std::span<const LabeledSpan> spans,
                              const TreeParams& p);

// Whether header `c` may claim the unparented span `n`: n starts below c,
// is horizontally inside c's reach (enough x overlap, or to the right of
// c's left edge), and is not a header of c's own cluster. Nearer headers
// are visited first, so an already dominated span is never offered.
bool can_parent(const TreeContext& ctx, std::size_t c, std::size_t n);

// Closest header above span `x` that overlaps it horizontally, nullopt when
// only the synthetic root qualifies.
std::optional<std::size_t> nearest_header_above(const TreeContext& ctx,
                                                std::size_t x);

// Whether body `b` continues the entry of body `c`.
bool same_entry(const TreeContext& ctx, std::size_t c, std::size_t b);

enum class NodeKind { kRoot, kHeader, kBody };
std::string_view node_kind_name(NodeKind kind);  // "Root", "Header", "Body"


struct ReadingNode {
  NodeKind kind = NodeKind::kBody;
  std::string text;
  BBox bbox;
  std::optional<std::size_t> parent;  // nullopt only for the root
  std::vector<std::size_t> children;  // in reading order
  std::optional<int> cluster;         // headers only
  std::optional<LabeledSpan> span;    // absent for the root
};

// Node 0 is the synthetic root; nodes 1..n follow the reading sequence.
struct ReadingTree {
  std::vector<ReadingNode> nodes;
};

ReadingTree build_tree(std::span<const LabeledSpan> spans, const TreeParams& p);

struct DirectoryBlock {
  std::vector<std::string> headers;  // root-to-leaf
  std::string body;
  friend bool operator==(const DirectoryBlock&, const DirectoryBlock&) = default;
};

// One block per body chain head, in reading order. Headers left without
// children are not part of any block.
std::vector<DirectoryBlock> directory_blocks(const ReadingTree& t);
// Body node ids of each block, aligned with directory_blocks().
std::vector<std::vector<std::size_t>> block_members(const ReadingTree& t);

// Human-readable descriptions of every violated tree invariant; empty for a
// valid tree.
std::vector<std::string> validate_tree(const ReadingTree& t);

Json tree_to_json(const ReadingTree& t);
ReadingTree tree_from_json(const Json& j);
Json blocks_to_json(const std::vector<DirectoryBlock>& blocks);

}  // namespace dirtree

#endif  // DIRTREE_TREE_BUILDER_H_
