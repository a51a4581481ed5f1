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

#include "dirtree/metrics.h"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <set>
#include <tuple>

#include "dirtree/errors.h"

namespace dirtree {

namespace {

constexpr const char* kRootMarker = "<ROOT>";

template <typename T>
PRF multiset_prf(std::vector<T> pred, std::vector<T> gold) {
  std::sort(pred.begin(), pred.end());
  std::sort(gold.begin(), gold.end());
  std::vector<T> common;
  std::set_intersection(pred.begin(), pred.end(), gold.begin(), gold.end(),
                        std::back_inserter(common));
  return prf_from_counts(common.size(), pred.size() - common.size(),
                         gold.size() - common.size());
}

template <typename K, typename V>
void check_same_pages(const std::map<K, V>& a, const std::map<K, V>& b) {
  const bool same = a.size() == b.size() &&
                    std::equal(a.begin(), a.end(), b.begin(),
                               [](const auto& x, const auto& y) { return x.first == y.first; });
  if (!same) throw PageSetMismatch("predicted and gold page sets differ");
}

struct NormBlock {
  std::vector<std::string> headers;
  std::string body;
};

std::vector<NormBlock> normalized_blocks(const ReadingTree& t) {
  std::vector<NormBlock> out;
  for (const DirectoryBlock& b : directory_blocks(t)) {
    NormBlock nb;
    for (const std::string& h : b.headers) nb.headers.push_back(normalize_ws(h));
    nb.body = normalize_ws(b.body);
    out.push_back(std::move(nb));
  }
  return out;
}

std::vector<std::string> node_list(const NormBlock& b) {
  std::vector<std::string> nodes = b.headers;
  nodes.push_back(b.body);
  return nodes;
}

PRF aligned_node_prf(const std::vector<NormBlock>& pred,
                     const std::vector<NormBlock>& gold) {
  std::size_t pred_nodes = 0, gold_nodes = 0;
  for (const auto& b : pred) pred_nodes += b.headers.size() + 1;
  for (const auto& b : gold) gold_nodes += b.headers.size() + 1;

  // score[p][g]: positions where the two node lists agree.
  std::vector<std::vector<std::size_t>> score(pred.size(),
                                              std::vector<std::size_t>(gold.size()));
  for (std::size_t p = 0; p < pred.size(); ++p) {
    const auto pn = node_list(pred[p]);
    for (std::size_t g = 0; g < gold.size(); ++g) {
      const auto gn = node_list(gold[g]);
      for (std::size_t i = 0; i < std::min(pn.size(), gn.size()); ++i) {
        score[p][g] += pn[i] == gn[i];
      }
    }
  }
  std::vector<bool> pred_used(pred.size()), gold_used(gold.size());
  std::size_t tp = 0;
  for (;;) {
    std::size_t best = 0, bp = 0, bg = 0;
    bool found = false;
    for (std::size_t g = 0; g < gold.size(); ++g) {
      if (gold_used[g]) continue;
      for (std::size_t p = 0; p < pred.size(); ++p) {
        if (pred_used[p] || score[p][g] == 0) continue;
        if (!found || score[p][g] > best) {
          found = true;
          best = score[p][g];
          bp = p;
          bg = g;
        }
      }
    }
    if (!found) break;
    pred_used[bp] = gold_used[bg] = true;
    tp += best;
  }
  return prf_from_counts(tp, pred_nodes - tp, gold_nodes - tp);
}

}  // namespace

PRF prf_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  PRF r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  r.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0;
  r.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0;
  r.f1 = r.precision + r.recall > 0
             ? 2 * r.precision * r.recall / (r.precision + r.recall)
             : 0;
  return r;
}

PRF operator+(const PRF& a, const PRF& b) {
  return prf_from_counts(a.tp + b.tp, a.fp + b.fp, a.fn + b.fn);
}

std::string normalize_ws(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

PRF eval_classifier(const std::map<std::size_t, bool>& preds,
                    const std::map<std::size_t, bool>& golds) {
  check_same_pages(preds, golds);
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& [page, predicted] : preds) {
    const bool gold = golds.at(page);
    tp += predicted && gold;
    fp += predicted && !gold;
    fn += !predicted && gold;
  }
  return prf_from_counts(tp, fp, fn);
}

PRF eval_segmentation_page(const std::vector<SpanItem>& pred,
                           const std::vector<SpanItem>& gold) {
  auto scored = [](const std::vector<SpanItem>& items) {
    std::vector<SpanItem> out;
    std::copy_if(items.begin(), items.end(), std::back_inserter(out),
                 [](const SpanItem& s) { return s.label != SpanLabel::kNeither; });
    return out;
  };
  return multiset_prf(scored(pred), scored(gold));
}

SegmentationReport eval_segmentation(
    const std::map<std::size_t, std::vector<SpanItem>>& pred,
    const std::map<std::size_t, std::vector<SpanItem>>& gold) {
  check_same_pages(pred, gold);
  SegmentationReport report;
  for (const auto& [page, items] : pred) {
    const PRF p = eval_segmentation_page(items, gold.at(page));
    report.per_page[page] = p;
    report.overall = report.overall + p;
  }
  return report;
}

TreeScores& TreeScores::operator+=(const TreeScores& o) {
  dir_block = dir_block + o.dir_block;
  body_parent = body_parent + o.body_parent;
  block_nodes = block_nodes + o.block_nodes;
  return *this;
}

TreeScores eval_tree(const ReadingTree& pred, const ReadingTree& gold) {
  const auto pb = normalized_blocks(pred);
  const auto gb = normalized_blocks(gold);
  using BlockItem = std::pair<std::vector<std::string>, std::string>;
  using ParentItem = std::pair<std::string, std::string>;
  auto block_items = [](const std::vector<NormBlock>& blocks) {
    std::vector<BlockItem> out;
    for (const auto& b : blocks) out.emplace_back(b.headers, b.body);
    return out;
  };
  auto parent_items = [](const std::vector<NormBlock>& blocks) {
    std::vector<ParentItem> out;
    for (const auto& b : blocks) {
      out.emplace_back(b.body, b.headers.empty() ? kRootMarker : b.headers.back());
    }
    return out;
  };
  TreeScores s;
  s.dir_block = multiset_prf(block_items(pb), block_items(gb));
  s.body_parent = multiset_prf(parent_items(pb), parent_items(gb));
  s.block_nodes = aligned_node_prf(pb, gb);
  return s;
}

TreeReport eval_trees(const std::map<std::size_t, ReadingTree>& pred,
                      const std::map<std::size_t, ReadingTree>& gold) {
  check_same_pages(pred, gold);
  TreeReport report;
  for (const auto& [page, tree] : pred) {
    const TreeScores s = eval_tree(tree, gold.at(page));
    report.per_page[page] = s;
    report.overall += s;
  }
  return report;
}

std::vector<GoldPage> gold_from_json(const Json& j) {
  using namespace json_field;
  std::vector<GoldPage> out;
  const Json& pages = array(j, "pages", "$");
  for (std::size_t i = 0; i < pages.size(); ++i) {
    const std::string p = "$.pages[" + std::to_string(i) + "]";
    GoldPage gp;
    const long long page = integer(pages[i], "page", p);
    if (page < 0) throw SchemaError(p + ".page", "negative page index");
    gp.page = static_cast<std::size_t>(page);
    gp.is_directory = boolean(pages[i], "is_directory", p);
    if (pages[i].contains("spans")) {
      const Json& spans = array(pages[i], "spans", p);
      for (std::size_t k = 0; k < spans.size(); ++k) {
        const std::string sp = p + ".spans[" + std::to_string(k) + "]";
        const Json& js = spans[k];
        GoldSpan s;
        const long long g = integer(js, "group", sp), st = integer(js, "start", sp),
                        en = integer(js, "end", sp);
        if (g < 0 || st < 0 || en <= st) throw SchemaError(sp, "bad span range");
        s.group = static_cast<std::size_t>(g);
        s.start = static_cast<std::size_t>(st);
        s.end = static_cast<std::size_t>(en);
        const auto label = span_label_from_name(string(js, "label", sp));
        if (!label) throw SchemaError(sp + ".label", "expected Header, Body or Neither");
        s.label = *label;
        if (js.contains("parent") && !js["parent"].is_null()) {
          const long long par = integer(js, "parent", sp);
          if (par < 0 || par >= static_cast<long long>(spans.size()) ||
              par == static_cast<long long>(k)) {
            throw SchemaError(sp + ".parent", "out of range");
          }
          s.parent = static_cast<std::size_t>(par);
        }
        if (js.contains("text")) s.text = string(js, "text", sp);
        gp.spans.push_back(std::move(s));
      }
    }
    out.push_back(std::move(gp));
  }
  return out;
}

Json gold_to_json(const std::vector<GoldPage>& pages) {
  Json jp = Json::array();
  for (const GoldPage& g : pages) {
    Json spans = Json::array();
    for (const GoldSpan& s : g.spans) {
      Json js{{"group", s.group},
              {"start", s.start},
              {"end", s.end},
              {"label", span_label_name(s.label)},
              {"parent", s.parent ? Json(*s.parent) : Json(nullptr)}};
      if (s.text) js["text"] = *s.text;
      spans.push_back(std::move(js));
    }
    jp.push_back(Json{{"page", g.page}, {"is_directory", g.is_directory}, {"spans", spans}});
  }
  return Json{{"pages", jp}};
}

ReadingTree gold_tree(const GoldPage& gold, const VisualPage* page) {
  const std::string where = "gold page " + std::to_string(gold.page);
  std::vector<std::size_t> node_of(gold.spans.size(), 0);
  ReadingTree t;
  t.nodes.emplace_back();
  t.nodes[0].kind = NodeKind::kRoot;
  for (std::size_t i = 0; i < gold.spans.size(); ++i) {
    const GoldSpan& s = gold.spans[i];
    if (s.label == SpanLabel::kNeither) continue;
    ReadingNode node;
    node.kind = s.label == SpanLabel::kHeader ? NodeKind::kHeader : NodeKind::kBody;
    if (page) {
      try {
        const LabeledSpan span =
            make_span(*page, gold.page, s.group, s.start, s.end, s.label,
                      SegmentRule::kFallbackBody);
        node.text = span.text;
        node.bbox = span.bbox;
      } catch (const InputError& e) {
        throw SchemaError(where + " span " + std::to_string(i), e.what());
      }
    } else if (s.text) {
      node.text = *s.text;
    } else {
      throw SchemaError(where + " span " + std::to_string(i),
                        "no text: pass the document or inline \"text\"");
    }
    node_of[i] = t.nodes.size();
    t.nodes.push_back(std::move(node));
  }
  for (std::size_t i = 0; i < gold.spans.size(); ++i) {
    if (!node_of[i]) continue;
    const auto& par = gold.spans[i].parent;
    if (par && !node_of[*par]) {
      throw SchemaError(where + " span " + std::to_string(i),
                        "parent is a Neither span");
    }
    t.nodes[node_of[i]].parent = par ? node_of[*par] : 0;
  }
  for (std::size_t id = 1; id < t.nodes.size(); ++id) {
    t.nodes[*t.nodes[id].parent].children.push_back(id);
  }
  if (const auto problems = validate_tree(t); !problems.empty()) {
    throw SchemaError(where, "invalid gold tree: " + problems.front());
  }
  return t;
}

Json prf_to_json(const PRF& p) {
  return Json{{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1},
              {"tp", p.tp},               {"fp", p.fp},         {"fn", p.fn}};
}

}  // namespace dirtree
