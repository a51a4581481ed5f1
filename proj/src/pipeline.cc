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

#include "dirtree/pipeline.h"

#include <algorithm>
#include <charconv>
#include <filesystem>

#include "dirtree/errors.h"
#include "dirtree/page_features.h"

namespace dirtree {

namespace {

std::size_t parse_index(std::string_view s, std::string_view whole) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError("bad page list '" + std::string(whole) + "'");
  }
  return v;
}

void require_file(const std::optional<std::string>& path, const char* what) {
  if (path && !std::filesystem::is_regular_file(*path)) {
    throw InputError(std::string(what) + " file not found: " + *path);
  }
}

}  // namespace

void PipelineConfig::validate() const {
  require_file(gazetteer_path, "gazetteer");
  require_file(model_path, "model");
  tree_params.validate();
  if (!(threshold >= 0 && threshold <= 1)) {
    throw InputError("threshold must lie in [0, 1]");
  }
}

PipelineConfig config_from_json(const Json& j) {
  using namespace json_field;
  if (!j.is_object()) throw SchemaError("$", "expected an object");
  PipelineConfig c;
  if (j.contains("gazetteer")) c.gazetteer_path = string(j, "gazetteer", "$");
  if (j.contains("model")) c.model_path = string(j, "model", "$");
  if (j.contains("threshold")) c.threshold = number(j, "threshold", "$");
  if (j.contains("output_dir")) c.output_dir = string(j, "output_dir", "$");
  if (j.contains("tree_params")) {
    const Json& t = require(j, "tree_params", "$");
    const std::string p = "$.tree_params";
    if (!t.is_object()) throw SchemaError(p, "expected an object");
    TreeParams& tp = c.tree_params;
    for (const auto& [key, field] :
         {std::pair{"band_overlap_frac", &tp.band_overlap_frac},
          std::pair{"align_tol", &tp.align_tol},
          std::pair{"gap_factor", &tp.gap_factor},
          std::pair{"min_x_overlap_frac", &tp.min_x_overlap_frac},
          std::pair{"size_cluster_tol", &tp.size_cluster_tol}}) {
      if (t.contains(key)) *field = number(t, key, p);
    }
    for (const auto& [key, value] : t.items()) {
      static const std::vector<std::string> known{
          "band_overlap_frac", "align_tol", "gap_factor", "min_x_overlap_frac",
          "size_cluster_tol"};
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw SchemaError(p + "." + key, "unknown tree parameter");
      }
    }
  }
  return c;
}

PageSelection parse_page_selection(std::string_view text) {
  PageSelection sel;
  if (text == "auto") return sel;
  if (text == "all") {
    sel.mode = PageSelection::Mode::kAll;
    return sel;
  }
  sel.mode = PageSelection::Mode::kList;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    if (const auto dash = item.find('-'); dash != std::string_view::npos) {
      const std::size_t lo = parse_index(item.substr(0, dash), text);
      const std::size_t hi = parse_index(item.substr(dash + 1), text);
      if (hi < lo) throw InputError("bad page range '" + std::string(item) + "'");
      for (std::size_t i = lo; i <= hi; ++i) sel.pages.push_back(i);
    } else {
      sel.pages.push_back(parse_index(item, text));
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  std::sort(sel.pages.begin(), sel.pages.end());
  sel.pages.erase(std::unique(sel.pages.begin(), sel.pages.end()), sel.pages.end());
  return sel;
}

Pipeline::Pipeline(Gazetteer gaz, std::optional<ForestModel> model,
                   TreeParams params, double threshold)
    : annotator_(std::move(gaz)),
      model_(std::move(model)),
      params_(params),
      threshold_(threshold) {
  params_.validate();
}

std::vector<AnnotationSet> Pipeline::annotate(const std::vector<VisualPage>& doc) const {
  return parallel_map<AnnotationSet>(
      doc.size(), [&](std::size_t i) { return dirtree::annotate(doc[i], annotator_, i); },
      threads);
}

std::vector<FeatureVector> Pipeline::features(const std::vector<VisualPage>& doc) const {
  return parallel_map<FeatureVector>(
      doc.size(),
      [&](std::size_t i) {
        return extract_features(doc[i], dirtree::annotate(doc[i], annotator_, i), i);
      },
      threads);
}

std::vector<PageClassification> Pipeline::classify(
    const std::vector<VisualPage>& doc) const {
  if (!model_) throw InputError("page classification needs a model (--model)");
  const auto feats = features(doc);
  std::vector<PageClassification> out;
  for (std::size_t i = 0; i < feats.size(); ++i) {
    out.push_back({i, predict(*model_, feats[i], threshold_)});
  }
  return out;
}

std::vector<std::size_t> Pipeline::select(const std::vector<VisualPage>& doc,
                                          const PageSelection& sel) const {
  std::vector<std::size_t> pages;
  switch (sel.mode) {
    case PageSelection::Mode::kAll:
      for (std::size_t i = 0; i < doc.size(); ++i) pages.push_back(i);
      break;
    case PageSelection::Mode::kList:
      for (std::size_t p : sel.pages) {
        if (p >= doc.size()) {
          throw InputError("page " + std::to_string(p) + " out of range (document has " +
                           std::to_string(doc.size()) + " pages)");
        }
      }
      pages = sel.pages;
      break;
    case PageSelection::Mode::kAuto:
      for (const auto& c : classify(doc)) {
        if (c.prediction.directory) pages.push_back(c.page);
      }
      break;
  }
  return pages;
}

std::vector<LabeledSpan> Pipeline::segment(const VisualPage& page,
                                           std::size_t page_index) const {
  return segment_page(page, dirtree::annotate(page, annotator_, page_index), page_index);
}

ReadingTree Pipeline::tree(const std::vector<LabeledSpan>& spans) const {
  return build_tree(spans, params_);
}

std::vector<PageResult> Pipeline::run(const std::vector<VisualPage>& doc,
                                      const PageSelection& sel) const {
  const auto pages = select(doc, sel);
  return parallel_map<PageResult>(
      pages.size(),
      [&](std::size_t k) {
        PageResult r;
        r.page = pages[k];
        r.spans = segment(doc[r.page], r.page);
        r.tree = tree(r.spans);
        r.blocks = directory_blocks(r.tree);
        return r;
      },
      threads);
}

Json classifications_to_json(const std::vector<PageClassification>& c) {
  Json pages = Json::array();
  for (const auto& p : c) {
    pages.push_back(Json{{"page", p.page},
                         {"label", p.prediction.directory ? "directory" : "other"},
                         {"score", p.prediction.score}});
  }
  return Json{{"pages", pages}};
}

Json segments_to_json(const std::vector<PageResult>& r) {
  Json pages = Json::array();
  for (const auto& p : r) {
    pages.push_back(spans_to_json(p.page, p.spans));
  }
  return Json{{"pages", pages}};
}

Json trees_to_json(const std::vector<PageResult>& r) {
  Json pages = Json::array();
  for (const auto& p : r) {
    Json t = tree_to_json(p.tree);
    t["page"] = p.page;
    pages.push_back(std::move(t));
  }
  return Json{{"pages", pages}};
}

Json page_blocks_to_json(const std::vector<PageResult>& r) {
  Json blocks = Json::array();
  for (const auto& p : r) {
    for (Json b : blocks_to_json(p.blocks)) {
      b["page"] = p.page;
      blocks.push_back(std::move(b));
    }
  }
  return Json{{"blocks", blocks}};
}

}  // namespace dirtree
