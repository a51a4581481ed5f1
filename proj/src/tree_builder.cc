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

#include "dirtree/tree_builder.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "dirtree/errors.h"

namespace dirtree {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

bool is_header(const LabeledSpan& s) { return s.label == SpanLabel::kHeader; }
bool is_body(const LabeledSpan& s) { return s.label == SpanLabel::kBody; }

bool overlaps_enough(const BBox& wide, const BBox& narrow, double frac) {
  return x_overlap(wide, narrow) >= frac * narrow.width();
}

// Chain head of every body node: the nearest ancestor-or-self body whose
// parent is not a body.
std::size_t chain_head(const ReadingTree& t, std::size_t id) {
  std::size_t cur = id;
  for (std::size_t steps = 0; steps <= t.nodes.size(); ++steps) {
    const auto& parent = t.nodes[cur].parent;
    if (!parent || t.nodes[*parent].kind != NodeKind::kBody) return cur;
    cur = *parent;
  }
  throw InvariantError("cycle in body chain");
}

}  // namespace

void TreeParams::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0; };
  if (!positive(band_overlap_frac) || band_overlap_frac > 1) {
    throw InputError("band_overlap_frac must be in (0, 1]");
  }
  if (!positive(min_x_overlap_frac) || min_x_overlap_frac > 1) {
    throw InputError("min_x_overlap_frac must be in (0, 1]");
  }
  if (!positive(align_tol)) throw InputError("align_tol must be positive");
  if (!positive(gap_factor)) throw InputError("gap_factor must be positive");
  if (!positive(size_cluster_tol)) throw InputError("size_cluster_tol must be positive");
}

CasingClass casing_class(std::string_view text) {
  bool any_upper = false, any_lower = false;
  char first_alpha = 0;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (!std::isalpha(c)) continue;
    if (!first_alpha) first_alpha = ch;
    any_upper |= std::isupper(c) != 0;
    any_lower |= std::islower(c) != 0;
  }
  if (any_upper && !any_lower) return CasingClass::kAllCaps;
  if (first_alpha && std::isupper(static_cast<unsigned char>(first_alpha))) {
    return CasingClass::kTitle;
  }
  return CasingClass::kOther;
}

std::vector<std::optional<int>> cluster_headers(std::span<const LabeledSpan> spans,
                                                const TreeParams& p) {
  std::vector<std::optional<int>> out(spans.size());
  std::vector<double> sizes;
  for (const LabeledSpan& s : spans) {
    if (is_header(s)) sizes.push_back(s.style_summary.font_size);
  }
  if (sizes.empty()) return out;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  // Single linkage over sorted sizes: a new size group starts at each gap
  // wider than the tolerance.
  std::map<double, int> size_group;
  int group = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i > 0 && sizes[i] - sizes[i - 1] > p.size_cluster_tol) ++group;
    size_group[sizes[i]] = group;
  }
  using Key = std::tuple<int, bool, bool, std::uint32_t, int>;
  std::map<Key, int> ids;
  std::vector<std::optional<Key>> keys(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (!is_header(spans[i])) continue;
    const StyleInfo& st = spans[i].style_summary;
    keys[i] = Key{size_group.at(st.font_size), st.bold, st.italic, st.color,
                  static_cast<int>(casing_class(spans[i].text))};
    ids.emplace(*keys[i], 0);
  }
  int next = 1;
  for (auto& [key, id] : ids) id = next++;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (keys[i]) out[i] = ids.at(*keys[i]);
  }
  return out;
}

std::vector<std::size_t> reading_sequence(std::span<const LabeledSpan> spans,
                                          const TreeParams& p) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (spans[i].label != SpanLabel::kNeither) idx.push_back(i);
  }
  // Union-find over the band relation.
  std::vector<std::size_t> parent(spans.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const BBox& ba = spans[idx[a]].bbox;
      const BBox& bb = spans[idx[b]].bbox;
      const double shorter = std::min(ba.height(), bb.height());
      const double overlap = y_overlap(ba, bb);
      const bool linked = shorter > 0 ? overlap >= p.band_overlap_frac * shorter
                                      : overlap > 0 || ba.top == bb.top;
      if (linked) parent[find(idx[a])] = find(idx[b]);
    }
  }
  std::map<std::size_t, double> band_top;
  for (std::size_t i : idx) {
    const std::size_t r = find(i);
    auto [it, inserted] = band_top.emplace(r, spans[i].bbox.top);
    if (!inserted) it->second = std::min(it->second, spans[i].bbox.top);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const std::size_t ra = find(a), rb = find(b);
    const auto ka = std::make_tuple(band_top.at(ra), ra);
    const auto kb = std::make_tuple(band_top.at(rb), rb);
    if (ra != rb) return ka < kb;
    const BBox& x = spans[a].bbox;
    const BBox& y = spans[b].bbox;
    return std::tie(x.left, x.top) < std::tie(y.left, y.top);
  });
  return idx;
}

TreeContext make_tree_context(std::span<const LabeledSpan> spans,
                              const TreeParams& p) {
  TreeContext ctx;
  ctx.spans = spans;
  ctx.params = p;
  ctx.clusters = cluster_headers(spans, p);
  std::vector<double> heights;
  for (const LabeledSpan& s : spans) {
    if (s.label != SpanLabel::kNeither && s.line_height > 0) {
      heights.push_back(s.line_height);
    }
  }
  ctx.median_line_height = median(heights);
  return ctx;
}

bool can_parent(const TreeContext& ctx, std::size_t c, std::size_t n) {
  const LabeledSpan& head = ctx.spans[c];
  const LabeledSpan& node = ctx.spans[n];
  const TreeParams& p = ctx.params;
  if (!is_header(head) || c == n) return false;
  if (!(node.bbox.top > head.bbox.top + p.align_tol)) return false;
  const bool horizontal =
      overlaps_enough(head.bbox, node.bbox, p.min_x_overlap_frac) ||
      node.bbox.left >= head.bbox.left - p.align_tol;
  if (!horizontal) return false;
  if (is_header(node) && ctx.clusters[c] == ctx.clusters[n]) return false;
  return true;
}

std::optional<std::size_t> nearest_header_above(const TreeContext& ctx,
                                                std::size_t x) {
  const LabeledSpan& span = ctx.spans[x];
  const TreeParams& p = ctx.params;
  std::optional<std::size_t> best;
  double best_dist = 0;
  for (std::size_t h = 0; h < ctx.spans.size(); ++h) {
    const LabeledSpan& cand = ctx.spans[h];
    if (h == x || !is_header(cand)) continue;
    if (!(cand.bbox.top + p.align_tol < span.bbox.top)) continue;
    if (!overlaps_enough(cand.bbox, span.bbox, p.min_x_overlap_frac)) continue;
    const double dist = span.bbox.top - cand.bbox.bottom;
    if (!best || dist < best_dist) {
      best = h;
      best_dist = dist;
    }
  }
  return best;
}

bool same_entry(const TreeContext& ctx, std::size_t c, std::size_t b) {
  const LabeledSpan& upper = ctx.spans[c];
  const LabeledSpan& lower = ctx.spans[b];
  const TreeParams& p = ctx.params;
  if (!is_body(upper) || !is_body(lower) || c == b) return false;
  if (upper.page_index == lower.page_index &&
      upper.group_index == lower.group_index) {
    return true;
  }
  if (nearest_header_above(ctx, c) != nearest_header_above(ctx, b)) return false;
  if (v_gap(upper.bbox, lower.bbox) > p.gap_factor * ctx.median_line_height) {
    return false;
  }
  if (std::abs(upper.bbox.left - lower.bbox.left) > p.align_tol) return false;
  for (std::size_t h = 0; h < ctx.spans.size(); ++h) {
    const LabeledSpan& cand = ctx.spans[h];
    if (!is_header(cand)) continue;
    const bool between = cand.bbox.top >= upper.bbox.bottom - p.align_tol &&
                         cand.bbox.bottom <= lower.bbox.top + p.align_tol;
    if (!between) continue;
    if (overlaps_enough(cand.bbox, lower.bbox, p.min_x_overlap_frac) ||
        overlaps_enough(cand.bbox, upper.bbox, p.min_x_overlap_frac)) {
      return false;
    }
  }
  return true;
}

std::string_view node_kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::kRoot:
      return "Root";
    case NodeKind::kHeader:
      return "Header";
    case NodeKind::kBody:
      return "Body";
  }
  return "Body";
}

ReadingTree build_tree(std::span<const LabeledSpan> spans, const TreeParams& p) {
  p.validate();
  const TreeContext ctx = make_tree_context(spans, p);
  const std::vector<std::size_t> seq = reading_sequence(spans, p);
  const std::size_t n = seq.size();

  // Parents in sequence positions; n means "not assigned yet".
  std::vector<std::size_t> parent(n, n);
  std::vector<std::size_t> traversed;
  traversed.reserve(n);
  for (std::size_t k = n; k-- > 0;) {
    const std::size_t c = seq[k];
    if (is_body(spans[c])) {
      for (std::size_t t : traversed) {
        if (parent[t] == n && is_body(spans[seq[t]]) && same_entry(ctx, c, seq[t])) {
          parent[t] = k;
        }
      }
    } else if (is_header(spans[c])) {
      for (std::size_t t : traversed) {
        if (parent[t] == n && can_parent(ctx, c, seq[t])) parent[t] = k;
      }
    }
    traversed.push_back(k);
  }

  ReadingTree tree;
  tree.nodes.resize(n + 1);
  tree.nodes[0].kind = NodeKind::kRoot;
  for (std::size_t k = 0; k < n; ++k) {
    const LabeledSpan& s = spans[seq[k]];
    ReadingNode& node = tree.nodes[k + 1];
    node.kind = is_header(s) ? NodeKind::kHeader : NodeKind::kBody;
    node.text = s.text;
    node.bbox = s.bbox;
    node.cluster = ctx.clusters[seq[k]];
    node.span = s;
    node.parent = parent[k] == n ? 0 : parent[k] + 1;
  }

  // Headers that ended up without children hang off the root as leaves.
  auto child_count = [&](std::size_t id) {
    return std::count_if(tree.nodes.begin() + 1, tree.nodes.end(),
                         [&](const ReadingNode& x) { return x.parent == id; });
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t id = 1; id <= n; ++id) {
      ReadingNode& node = tree.nodes[id];
      if (node.kind == NodeKind::kHeader && node.parent != 0u && child_count(id) == 0) {
        node.parent = 0;
        changed = true;
      }
    }
  }
  for (std::size_t id = 1; id <= n; ++id) {
    tree.nodes[*tree.nodes[id].parent].children.push_back(id);
  }
  return tree;
}

std::vector<std::vector<std::size_t>> block_members(const ReadingTree& t) {
  std::map<std::size_t, std::vector<std::size_t>> chains;
  for (std::size_t id = 1; id < t.nodes.size(); ++id) {
    if (t.nodes[id].kind == NodeKind::kBody) chains[chain_head(t, id)].push_back(id);
  }
  std::vector<std::vector<std::size_t>> out;
  for (auto& [head, members] : chains) out.push_back(std::move(members));
  return out;
}

std::vector<DirectoryBlock> directory_blocks(const ReadingTree& t) {
  std::vector<DirectoryBlock> out;
  for (const auto& members : block_members(t)) {
    DirectoryBlock block;
    std::vector<std::string> path;
    std::size_t cur = members.front();
    for (std::size_t steps = 0; steps <= t.nodes.size(); ++steps) {
      const auto& parent = t.nodes[cur].parent;
      if (!parent || *parent == 0) break;
      cur = *parent;
      if (t.nodes[cur].kind == NodeKind::kHeader) path.push_back(t.nodes[cur].text);
    }
    block.headers.assign(path.rbegin(), path.rend());
    for (std::size_t id : members) {
      if (!block.body.empty()) block.body.push_back(' ');
      block.body += t.nodes[id].text;
    }
    out.push_back(std::move(block));
  }
  return out;
}

std::vector<std::string> validate_tree(const ReadingTree& t) {
  std::vector<std::string> v;
  const std::size_t n = t.nodes.size();
  if (n == 0) return {"tree has no root"};
  if (t.nodes[0].kind != NodeKind::kRoot || t.nodes[0].parent) {
    v.push_back("node 0 is not a parentless root");
  }
  for (std::size_t id = 0; id < n; ++id) {
    const ReadingNode& node = t.nodes[id];
    const std::string name = "node " + std::to_string(id);
    if (id > 0 && node.kind == NodeKind::kRoot) v.push_back(name + ": extra root");
    if (node.span && node.span->label == SpanLabel::kNeither) {
      v.push_back(name + ": Neither span in tree");
    }
    for (std::size_t c : node.children) {
      if (c >= n || t.nodes[c].parent != id) {
        v.push_back(name + ": child " + std::to_string(c) + " does not point back");
      }
    }
    if (id == 0) continue;
    if (!node.parent || *node.parent >= n) {
      v.push_back(name + ": missing parent");
      continue;
    }
    const ReadingNode& par = t.nodes[*node.parent];
    if (std::count(par.children.begin(), par.children.end(), id) != 1) {
      v.push_back(name + ": not listed exactly once by its parent");
    }
    // Walk up; more than n steps means a cycle.
    std::size_t cur = id, steps = 0;
    while (cur != 0 && steps <= n) {
      const auto& up = t.nodes[cur].parent;
      if (!up || *up >= n) break;
      cur = *up;
      ++steps;
    }
    if (cur != 0) v.push_back(name + ": does not reach the root");
    if (node.children.empty() && node.kind == NodeKind::kHeader && *node.parent != 0) {
      v.push_back(name + ": header leaf below a non-root node");
    }
    if (par.kind == NodeKind::kBody && node.kind != NodeKind::kBody) {
      v.push_back(name + ": body node has a non-body child");
    }
    if (node.kind == NodeKind::kHeader && par.kind == NodeKind::kHeader &&
        node.cluster && node.cluster == par.cluster) {
      v.push_back(name + ": header shares cluster with its parent header");
    }
  }
  if (!v.empty()) return v;
  std::vector<int> seen(n, 0);
  for (const auto& members : block_members(t)) {
    for (std::size_t id : members) ++seen[id];
  }
  for (std::size_t id = 1; id < n; ++id) {
    if (t.nodes[id].kind == NodeKind::kBody && seen[id] != 1) {
      v.push_back("node " + std::to_string(id) + ": body appears in " +
                  std::to_string(seen[id]) + " blocks");
    }
  }
  return v;
}

Json tree_to_json(const ReadingTree& t) {
  Json nodes = Json::array();
  for (std::size_t id = 0; id < t.nodes.size(); ++id) {
    const ReadingNode& node = t.nodes[id];
    Json j{{"id", id},
           {"label", node_kind_name(node.kind)},
           {"text", node.text},
           {"parent", node.parent ? Json(*node.parent) : Json(nullptr)},
           {"children", node.children},
           {"cluster", node.cluster ? Json(*node.cluster) : Json(nullptr)},
           {"bbox", bbox_to_json(node.bbox)}};
    if (node.span) {
      j["group"] = node.span->group_index;
      j["start"] = node.span->start;
      j["end"] = node.span->end;
    }
    nodes.push_back(std::move(j));
  }
  return Json{{"nodes", nodes}};
}

ReadingTree tree_from_json(const Json& j) {
  using namespace json_field;
  const Json& nodes = array(j, "nodes", "$");
  ReadingTree t;
  t.nodes.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string p = "$.nodes[" + std::to_string(i) + "]";
    const Json& jn = nodes[i];
    if (integer(jn, "id", p) != static_cast<long long>(i)) {
      throw SchemaError(p + ".id", "ids must be 0..n-1 in order");
    }
    ReadingNode& node = t.nodes[i];
    const std::string label = string(jn, "label", p);
    if (label == "Root") {
      node.kind = NodeKind::kRoot;
    } else if (label == "Header") {
      node.kind = NodeKind::kHeader;
    } else if (label == "Body") {
      node.kind = NodeKind::kBody;
    } else {
      throw SchemaError(p + ".label", "expected Root, Header or Body");
    }
    node.text = string(jn, "text", p);
    const Json& parent = require(jn, "parent", p);
    if (!parent.is_null()) {
      const long long v = integer(jn, "parent", p);
      if (v < 0 || v >= static_cast<long long>(nodes.size())) {
        throw SchemaError(p + ".parent", "out of range");
      }
      node.parent = static_cast<std::size_t>(v);
    }
    const Json& children = array(jn, "children", p);
    for (std::size_t c = 0; c < children.size(); ++c) {
      if (!children[c].is_number_unsigned() ||
          children[c].get<std::size_t>() >= nodes.size()) {
        throw SchemaError(p + ".children[" + std::to_string(c) + "]", "out of range");
      }
      node.children.push_back(children[c].get<std::size_t>());
    }
    if (jn.contains("cluster") && !jn["cluster"].is_null()) {
      node.cluster = static_cast<int>(integer(jn, "cluster", p));
    }
    if (jn.contains("bbox")) node.bbox = bbox_from_json(jn["bbox"], p + ".bbox");
    if (jn.contains("group")) {
      LabeledSpan s;
      s.group_index = static_cast<std::size_t>(integer(jn, "group", p));
      s.start = static_cast<std::size_t>(integer(jn, "start", p));
      s.end = static_cast<std::size_t>(integer(jn, "end", p));
      s.label = node.kind == NodeKind::kHeader ? SpanLabel::kHeader : SpanLabel::kBody;
      s.bbox = node.bbox;
      s.text = node.text;
      node.span = std::move(s);
    }
  }
  if (t.nodes.empty()) throw SchemaError("$.nodes", "tree has no root");
  if (const auto problems = validate_tree(t); !problems.empty()) {
    throw SchemaError("$.nodes", problems.front());
  }
  return t;
}

Json blocks_to_json(const std::vector<DirectoryBlock>& blocks) {
  Json out = Json::array();
  for (const DirectoryBlock& b : blocks) {
    out.push_back(Json{{"headers", b.headers}, {"body", b.body}});
  }
  return out;
}

}  // namespace dirtree
