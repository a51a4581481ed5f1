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
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "catch_amalgamated.hpp"
#include "dirtree/errors.h"
#include "dirtree/metrics.h"
#include "dirtree/synthetic.h"
#include "dirtree/tree_builder.h"
#include "test_support.h"

using namespace dirtree;
using namespace dirtree::testing;

namespace {

constexpr SpanLabel H = SpanLabel::kHeader;
constexpr SpanLabel B = SpanLabel::kBody;

StyleInfo style(double size, bool bold, bool italic, std::uint32_t color = 0) {
  return StyleInfo{"Arial", size, bold, italic, color};
}

std::size_t node_of(const ReadingTree& t, const std::string& prefix) {
  for (std::size_t i = 1; i < t.nodes.size(); ++i) {
    if (t.nodes[i].text.rfind(prefix, 0) == 0) return i;
  }
  FAIL("no node starting with " << prefix);
  return 0;
}

std::size_t depth(const ReadingTree& t, std::size_t id) {
  std::size_t d = 0;
  while (t.nodes[id].parent) {
    id = *t.nodes[id].parent;
    ++d;
  }
  return d;
}

}  // namespace

TEST_CASE("distinct header styles form distinct clusters") {
  const std::vector<LabeledSpan> spans{
      span_at(0, H, {0, 0, 50, 12}, "Board", style(12, true, false)),
      span_at(1, H, {0, 20, 50, 30}, "Board", style(10, false, true))};
  const auto c = cluster_headers(spans, TreeParams{});
  REQUIRE(c[0]);
  REQUIRE(c[1]);
  CHECK(*c[0] != *c[1]);
}

TEST_CASE("sizes within tolerance share a cluster by single linkage") {
  const TreeParams p;
  auto clusters_for = [&](std::vector<double> sizes) {
    std::vector<LabeledSpan> spans;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      spans.push_back(span_at(i, H, {0, 20.0 * i, 50, 20.0 * i + 10}, "Same Text",
                              style(sizes[i], true, false)));
    }
    return cluster_headers(spans, p);
  };
  auto c = clusters_for({10.0, 10.4});
  CHECK(c[0] == c[1]);
  c = clusters_for({10.0, 10.4, 10.8});  // chained through 10.4
  CHECK(c[0] == c[2]);
  c = clusters_for({10.0, 10.6});
  CHECK(c[0] != c[1]);

  // Oracle: union-find over all size pairs within tolerance.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> sizes;
    for (int i = 0; i < 8; ++i) sizes.push_back(8 + 0.1 * static_cast<double>(rng() % 60));
    std::vector<int> parent(8);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (int a = 0; a < 8; ++a) {
      for (int b = 0; b < 8; ++b) {
        if (std::abs(sizes[a] - sizes[b]) <= p.size_cluster_tol) parent[find(a)] = find(b);
      }
    }
    const auto got = clusters_for(sizes);
    for (int a = 0; a < 8; ++a) {
      for (int b = 0; b < 8; ++b) CHECK((got[a] == got[b]) == (find(a) == find(b)));
    }
  }
}

TEST_CASE("fig1a panel header and sub-headers fall in different clusters") {
  const auto spans = fig1a_spans();
  const auto c = cluster_headers(spans, TreeParams{});
  std::map<std::string, std::optional<int>> by_text;
  for (std::size_t i = 0; i < spans.size(); ++i) by_text[spans[i].text] = c[i];
  CHECK(by_text["Legal Counsel to the Fund and Master Fund"] !=
        by_text["(as per Hong Kong Legal Matters)"]);
  CHECK(by_text["(as per Hong Kong Legal Matters)"] == by_text["(as per Cayman Legal Matters)"]);
  CHECK_FALSE(by_text["Oddo Asset Management SA 12, boulevard de la Madeleine 75440 Paris Cedex 09 France"]);
}

TEST_CASE("casing classes") {
  CHECK(casing_class("DIRECTORY") == CasingClass::kAllCaps);
  CHECK(casing_class("Auditor of the Fund") == CasingClass::kTitle);
  CHECK(casing_class("(as per Hong Kong)") == CasingClass::kOther);
  CHECK(casing_class("12") == CasingClass::kOther);
}

TEST_CASE("reading sequence of a single span") {
  const std::vector<LabeledSpan> spans{span_at(0, B, {0, 0, 10, 10}, "x")};
  CHECK(reading_sequence(spans, TreeParams{}) == std::vector<std::size_t>{0});
}

TEST_CASE("side-by-side spans share a band when they overlap enough") {
  // Right span sits 4pt higher: 6 of 10 points overlap (60%).
  std::vector<LabeledSpan> spans{span_at(0, B, {300, 100, 400, 110}, "right"),
                                 span_at(1, B, {10, 104, 100, 114}, "left")};
  CHECK(reading_sequence(spans, TreeParams{}) == std::vector<std::size_t>{1, 0});
  // 40% overlap: separate bands, the higher one first.
  spans[1].bbox = {10, 106, 100, 116};
  CHECK(reading_sequence(spans, TreeParams{}) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("reading sequence matches a band oracle on random pages") {
  std::mt19937_64 rng(17);
  const TreeParams p;
  for (int trial = 0; trial < 200; ++trial) {
    const auto spans = synth::random_span_page(rng);
    const auto seq = reading_sequence(spans, p);
    REQUIRE(seq.size() == spans.size());
    // Connected components by depth-first search over the band relation.
    const std::size_t n = spans.size();
    std::vector<int> comp(n, -1);
    int next = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (comp[s] >= 0) continue;
      std::vector<std::size_t> stack{s};
      comp[s] = next;
      while (!stack.empty()) {
        const std::size_t a = stack.back();
        stack.pop_back();
        for (std::size_t b = 0; b < n; ++b) {
          if (comp[b] >= 0) continue;
          const double shorter = std::min(spans[a].bbox.height(), spans[b].bbox.height());
          if (y_overlap(spans[a].bbox, spans[b].bbox) >= p.band_overlap_frac * shorter) {
            comp[b] = next;
            stack.push_back(b);
          }
        }
      }
      ++next;
    }
    // Each band is contiguous in the sequence and ordered by left edge.
    std::set<int> closed;
    for (std::size_t k = 0; k < seq.size(); ++k) {
      const int c = comp[seq[k]];
      if (k > 0 && comp[seq[k - 1]] != c) {
        CHECK(closed.count(c) == 0);
        closed.insert(comp[seq[k - 1]]);
      }
      if (k > 0 && comp[seq[k - 1]] == c) {
        CHECK(spans[seq[k - 1]].bbox.left <= spans[seq[k]].bbox.left);
      }
    }
  }
}

TEST_CASE("reversed reading sequence follows the fig1a walkthrough") {
  const auto spans = fig1a_spans();
  auto seq = reading_sequence(spans, TreeParams{});
  std::reverse(seq.begin(), seq.end());
  const auto want = fig1a_walkthrough();
  REQUIRE(seq.size() >= want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(spans[seq[i]].text == want[i]);
  CHECK(spans[seq.back()].text == "DIRECTORY");
}

TEST_CASE("dominance predicate") {
  std::vector<LabeledSpan> spans{
      span_at(0, H, {60, 100, 200, 112}, "Legal Counsel", style(10, true, false)),
      // Body below, 40% of its width under the header.
      span_at(1, B, {140, 130, 240, 142}, "Body text"),
      span_at(2, B, {60, 60, 200, 72}, "Above"),
      span_at(3, H, {60, 160, 200, 172}, "Legal Counsel", style(10, true, false)),
      span_at(4, H, {60, 190, 200, 202}, "(as per)", style(10, false, true))};
  const TreeContext ctx = make_tree_context(spans, TreeParams{});
  CHECK(can_parent(ctx, 0, 1));
  CHECK_FALSE(can_parent(ctx, 0, 2));
  CHECK_FALSE(can_parent(ctx, 0, 3));  // same cluster
  CHECK(can_parent(ctx, 0, 4));
  CHECK_FALSE(can_parent(ctx, 1, 4));  // bodies never parent
}

TEST_CASE("same-entry predicate") {
  std::vector<LabeledSpan> spans{
      span_at(0, H, {60, 100, 200, 112}, "Auditor", style(10, true, false)),
      span_at(1, B, {60, 118, 250, 130}, "Line one"),
      span_at(2, B, {60, 132.4, 250, 144.4}, "Line two"),  // 1.2 line heights below
      span_at(3, B, {60, 170, 250, 182}, "Far below"),
      span_at(4, B, {80, 146, 250, 158}, "Indented")};
  spans[2].line_height = spans[1].line_height = 12;
  const TreeContext ctx = make_tree_context(spans, TreeParams{});
  CHECK(same_entry(ctx, 1, 2));
  CHECK_FALSE(same_entry(ctx, 2, 3));  // gap beyond 1.5 line heights
  CHECK_FALSE(same_entry(ctx, 2, 4));  // misaligned left edges

  std::vector<LabeledSpan> one_group{span_at(7, B, {60, 118, 250, 130}, "a"),
                                     span_at(7, B, {300, 400, 400, 412}, "b")};
  CHECK(same_entry(make_tree_context(one_group, TreeParams{}), 0, 1));

  std::vector<LabeledSpan> split{span_at(0, B, {60, 118, 250, 130}, "a"),
                                 span_at(1, H, {60, 131, 250, 141}, "Hdr", style(10, true, false)),
                                 span_at(2, B, {60, 142, 250, 154}, "b")};
  CHECK_FALSE(same_entry(make_tree_context(split, TreeParams{}), 0, 2));
}

TEST_CASE("fig1a RAM and BANQUE bodies stay separate entries") {
  const auto spans = fig1a_spans();
  const TreeContext ctx = make_tree_context(spans, TreeParams{});
  std::size_t ram = 0, banque = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (spans[i].text.rfind("RAM", 0) == 0) ram = i;
    if (spans[i].text.rfind("BANQUE", 0) == 0) banque = i;
  }
  CHECK_FALSE(same_entry(ctx, ram, banque));
  CHECK_FALSE(same_entry(ctx, banque, ram));
}

TEST_CASE("trivial trees") {
  const ReadingTree empty = build_tree({}, TreeParams{});
  REQUIRE(empty.nodes.size() == 1);
  CHECK(directory_blocks(empty).empty());

  const std::vector<LabeledSpan> one{span_at(0, B, {0, 0, 10, 10}, "only")};
  const ReadingTree t = build_tree(one, TreeParams{});
  REQUIRE(t.nodes.size() == 2);
  CHECK(t.nodes[0].children == std::vector<std::size_t>{1});

  // Two bodies without headers: separate root children unless same entry.
  const std::vector<LabeledSpan> apart{span_at(0, B, {0, 0, 100, 10}, "a"),
                                       span_at(1, B, {300, 200, 400, 210}, "b")};
  const ReadingTree ta = build_tree(apart, TreeParams{});
  CHECK(ta.nodes[0].children.size() == 2);
  const std::vector<LabeledSpan> close{span_at(0, B, {0, 0, 100, 10}, "a"),
                                       span_at(1, B, {0, 12, 100, 22}, "b")};
  const ReadingTree tc = build_tree(close, TreeParams{});
  CHECK(tc.nodes[0].children.size() == 1);
  const auto blocks = directory_blocks(tc);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].headers.empty());
  CHECK(blocks[0].body == "a b");
}

TEST_CASE("fig1a tree has the expected shape") {
  const auto spans = fig1a_spans();
  const ReadingTree t = build_tree(spans, TreeParams{});
  CHECK(validate_tree(t).empty());
  CHECK(tree_problems(t, spans).empty());
  const std::size_t dir = node_of(t, "DIRECTORY");
  CHECK(depth(t, dir) == 1);
  const std::size_t counsel = node_of(t, "Legal Counsel");
  CHECK(t.nodes[counsel].parent == dir);
  const auto& subs = t.nodes[counsel].children;
  REQUIRE(subs.size() == 3);
  for (std::size_t s : subs) {
    CHECK(t.nodes[s].kind == NodeKind::kHeader);
    REQUIRE(t.nodes[s].children.size() == 1);
    const auto& leaf = t.nodes[t.nodes[s].children[0]];
    CHECK(leaf.kind == NodeKind::kBody);
    CHECK(leaf.children.empty());
  }
  CHECK(t.nodes[subs[0]].text == "(as per Hong Kong Legal Matters)");
  CHECK(t.nodes[subs[1]].text == "(as per Singapore Legal Matters)");
  CHECK(t.nodes[subs[2]].text == "(as per Cayman Legal Matters)");
}

TEST_CASE("fig1a yields the six directory blocks") {
  const ReadingTree t = build_tree(fig1a_spans(), TreeParams{});
  const auto got = directory_blocks(t);
  const auto want = fig1a_expected_blocks();
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(got[i].headers == want[i].headers);
    CHECK(normalize_ws(got[i].body) == normalize_ws(want[i].body));
  }
  CHECK(got[1].body ==
        "Deutsche Bank (Suisse) S.A. 4th Floor Bahnhofquai 9/11, CH-8023 Zurich, Switzerland");
}

TEST_CASE("removing one entry leaves the other blocks intact") {
  auto spans = fig1a_spans();
  const auto full = directory_blocks(build_tree(spans, TreeParams{}));
  spans.erase(std::remove_if(spans.begin(), spans.end(),
                             [](const LabeledSpan& s) { return s.text.rfind("Oddo", 0) == 0; }),
              spans.end());
  const ReadingTree t = build_tree(spans, TreeParams{});
  CHECK(validate_tree(t).empty());
  const auto fewer = directory_blocks(t);
  REQUIRE(fewer.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(fewer[i] == full[i]);
  // The now childless sub-header hangs off the root.
  CHECK(t.nodes[node_of(t, "(as per Cayman")].parent == 0u);
}

TEST_CASE("validate_tree reports broken trees") {
  const ReadingTree good = build_tree(fig1a_spans(), TreeParams{});
  REQUIRE(validate_tree(good).empty());

  ReadingTree cyc = good;
  const std::size_t dir = node_of(cyc, "DIRECTORY");
  const std::size_t child = cyc.nodes[dir].children[0];
  cyc.nodes[dir].parent = child;
  CHECK_FALSE(validate_tree(cyc).empty());

  ReadingTree body_parent = good;
  const std::size_t office = node_of(body_parent, "Registered Office");
  const std::size_t kpmg = node_of(body_parent, "KPMG");
  auto& kids = body_parent.nodes[*body_parent.nodes[office].parent].children;
  kids.erase(std::find(kids.begin(), kids.end(), office));
  body_parent.nodes[office].parent = kpmg;
  body_parent.nodes[kpmg].children.push_back(office);
  CHECK_FALSE(validate_tree(body_parent).empty());
  CHECK_FALSE(tree_problems(body_parent, fig1a_spans()).empty());

  ReadingTree same = good;
  const std::size_t hk = node_of(same, "(as per Hong Kong");
  same.nodes[hk].cluster = same.nodes[*same.nodes[hk].parent].cluster;
  CHECK_FALSE(validate_tree(same).empty());
}

TEST_CASE("random pages build valid, deterministic trees") {
  std::mt19937_64 rng(99);
  const TreeParams p;
  for (int i = 0; i < 300; ++i) {
    const auto spans = synth::random_span_page(rng);
    const ReadingTree t = build_tree(spans, p);
    INFO("page " << i);
    CHECK(validate_tree(t).empty());
    CHECK(tree_problems(t, spans).empty());
    CHECK(tree_to_json(t) == tree_to_json(build_tree(spans, p)));
    // Parent locality for bodies hanging directly under a header.
    const TreeContext ctx = make_tree_context(spans, p);
    std::map<std::tuple<std::size_t, std::size_t>, std::size_t> index;
    for (std::size_t k = 0; k < spans.size(); ++k) index[{spans[k].group_index, spans[k].start}] = k;
    for (std::size_t id = 1; id < t.nodes.size(); ++id) {
      const ReadingNode& node = t.nodes[id];
      if (node.kind != NodeKind::kBody || *node.parent == 0) continue;
      const ReadingNode& parent = t.nodes[*node.parent];
      if (parent.kind != NodeKind::kHeader) continue;
      CHECK(can_parent(ctx, index.at({parent.span->group_index, parent.span->start}),
                       index.at({node.span->group_index, node.span->start})));
    }
  }
}

TEST_CASE("tree JSON round-trips") {
  const ReadingTree t = build_tree(fig1a_spans(), TreeParams{});
  const ReadingTree back = tree_from_json(tree_to_json(t));
  CHECK(tree_to_json(back) == tree_to_json(t));
  CHECK(directory_blocks(back) == directory_blocks(t));
  Json bad = tree_to_json(t);
  bad["nodes"][3]["parent"] = 99;
  CHECK_THROWS_AS(tree_from_json(bad), InputError);
}

TEST_CASE("tree parameters are validated") {
  for (auto mutate : std::vector<std::function<void(TreeParams&)>>{
           [](TreeParams& p) { p.band_overlap_frac = 0; },
           [](TreeParams& p) { p.band_overlap_frac = 1.5; },
           [](TreeParams& p) { p.align_tol = -1; },
           [](TreeParams& p) { p.gap_factor = 0; },
           [](TreeParams& p) { p.min_x_overlap_frac = 2; },
           [](TreeParams& p) { p.size_cluster_tol = 0; }}) {
    TreeParams p;
    mutate(p);
    CHECK_THROWS_AS(p.validate(), InputError);
  }
}
