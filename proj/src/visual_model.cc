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

#include "dirtree/visual_model.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "dirtree/errors.h"
#include "dirtree/json_io.h"

namespace dirtree {

namespace {

constexpr double kContainTol = 0.01;

std::string where(std::size_t page, std::size_t group) {
  std::ostringstream ss;
  ss << "page " << page << " group " << group;
  return ss.str();
}

void check_box(const BBox& b, const std::string& what) {
  for (double v : {b.left, b.top, b.right, b.bottom}) {
    if (!std::isfinite(v) || v < 0) {
      throw GeometryError(what + ": coordinates must be finite and >= 0");
    }
  }
  if (b.left > b.right || b.top > b.bottom) {
    throw GeometryError(what + ": inverted bbox");
  }
}

StyleInfo style_from_json(const Json& j, const std::string& path) {
  StyleInfo s;
  s.font_family = json_field::string(j, "font_family", path);
  s.font_size = json_field::number(j, "font_size", path);
  if (!(s.font_size > 0) || !std::isfinite(s.font_size)) {
    throw SchemaError(path + ".font_size", "must be > 0");
  }
  s.bold = json_field::boolean(j, "bold", path);
  s.italic = json_field::boolean(j, "italic", path);
  long long color = json_field::integer(j, "color", path);
  if (color < 0 || color > 0xFFFFFF) {
    throw SchemaError(path + ".color", "must be in [0, 0xFFFFFF]");
  }
  s.color = static_cast<std::uint32_t>(color);
  return s;
}

Json style_to_json(const StyleInfo& s) {
  return Json{{"font_family", s.font_family}, {"font_size", s.font_size},
              {"bold", s.bold},   {"italic", s.italic},
              {"color", s.color}};
}

}  // namespace

bool BBox::contains(const BBox& o, double tol) const {
  return o.left >= left - tol && o.top >= top - tol && o.right <= right + tol &&
         o.bottom <= bottom + tol;
}

BBox union_of(const BBox& a, const BBox& b) {
  return BBox{std::min(a.left, b.left), std::min(a.top, b.top),
              std::max(a.right, b.right), std::max(a.bottom, b.bottom)};
}

double x_overlap(const BBox& a, const BBox& b) {
  return std::max(0.0, std::min(a.right, b.right) - std::max(a.left, b.left));
}

double v_gap(const BBox& a, const BBox& b) { return b.top - a.bottom; }

double y_overlap(const BBox& a, const BBox& b) {
  return std::max(0.0, std::min(a.bottom, b.bottom) - std::max(a.top, b.top));
}

std::size_t utf8_length(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

GroupTextLayout group_text_layout(const Group& g) {
  GroupTextLayout out;
  for (std::size_t li = 0; li < g.lines.size(); ++li) {
    const Line& line = g.lines[li];
    for (std::size_t si = 0; si < line.segments.size(); ++si) {
      if (!out.text.empty()) out.text.push_back(' ');
      std::size_t start = out.text.size();
      out.text += line.segments[si].text;
      out.segments.push_back({li, si, start, out.text.size()});
    }
  }
  return out;
}

std::string group_text(const Group& g) { return group_text_layout(g).text; }

void normalize_page(VisualPage& page, std::size_t page_index) {
  const std::string page_where = "page " + std::to_string(page_index);
  if (!std::isfinite(page.width) || !std::isfinite(page.height) ||
      page.width <= 0 || page.height <= 0) {
    throw GeometryError(page_where + ": page size must be positive");
  }
  const BBox page_box{0, 0, page.width, page.height};
  for (std::size_t ti = 0; ti < page.table_regions.size(); ++ti) {
    check_box(page.table_regions[ti],
              page_where + " table_region " + std::to_string(ti));
  }
  for (std::size_t gi = 0; gi < page.groups.size(); ++gi) {
    Group& g = page.groups[gi];
    const std::string gw = where(page_index, gi);
    if (g.border_sides < 0 || g.border_sides > 4) {
      throw GeometryError(gw + ": border_sides must be in [0,4]");
    }
    if (g.lines.empty()) throw GeometryError(gw + ": group has no lines");
    check_box(g.bbox, gw);
    if (!page_box.contains(g.bbox, kContainTol)) {
      throw GeometryError(gw + ": bbox lies outside the page");
    }
    std::stable_sort(g.lines.begin(), g.lines.end(),
                     [](const Line& a, const Line& b) {
                       return a.bbox.top < b.bbox.top;
                     });
    std::optional<BBox> group_union;
    for (std::size_t li = 0; li < g.lines.size(); ++li) {
      Line& line = g.lines[li];
      const std::string lw = gw + " line " + std::to_string(li);
      if (line.segments.empty()) throw GeometryError(lw + ": line is empty");
      check_box(line.bbox, lw);
      if (!g.bbox.contains(line.bbox, kContainTol)) {
        throw GeometryError(gw + ": line " + std::to_string(li) +
                            " bbox lies outside the group bbox");
      }
      std::stable_sort(line.segments.begin(), line.segments.end(),
                       [](const Segment& a, const Segment& b) {
                         return a.bbox.left < b.bbox.left;
                       });
      BBox line_union = line.segments.front().bbox;
      for (std::size_t si = 0; si < line.segments.size(); ++si) {
        const Segment& s = line.segments[si];
        const std::string sw = lw + " segment " + std::to_string(si);
        if (s.text.empty()) throw GeometryError(sw + ": empty text");
        check_box(s.bbox, sw);
        if (!line.bbox.contains(s.bbox, kContainTol)) {
          throw GeometryError(sw + ": bbox lies outside the line bbox");
        }
        line_union = union_of(line_union, s.bbox);
      }
      line.bbox = line_union;
      group_union = group_union ? union_of(*group_union, line.bbox) : line.bbox;
    }
    g.bbox = *group_union;
  }
}

std::vector<VisualPage> document_from_json(const Json& doc) {
  using namespace json_field;
  std::vector<VisualPage> pages;
  const Json& jpages = array(doc, "pages", "$");
  for (std::size_t pi = 0; pi < jpages.size(); ++pi) {
    const std::string pp = "$.pages[" + std::to_string(pi) + "]";
    const Json& jp = jpages[pi];
    VisualPage page;
    page.width = number(jp, "width", pp);
    page.height = number(jp, "height", pp);
    if (jp.contains("table_regions")) {
      const Json& jt = array(jp, "table_regions", pp);
      for (std::size_t ti = 0; ti < jt.size(); ++ti) {
        page.table_regions.push_back(bbox_from_json(
            jt[ti], pp + ".table_regions[" + std::to_string(ti) + "]"));
      }
    }
    const Json& jgroups = array(jp, "groups", pp);
    for (std::size_t gi = 0; gi < jgroups.size(); ++gi) {
      const std::string gp = pp + ".groups[" + std::to_string(gi) + "]";
      const Json& jg = jgroups[gi];
      Group g;
      g.bbox = bbox_from_json(require(jg, "bbox", gp), gp + ".bbox");
      g.is_page_header = boolean(jg, "is_page_header", gp);
      g.is_page_footer = boolean(jg, "is_page_footer", gp);
      if (jg.contains("border_sides")) {
        long long sides = integer(jg, "border_sides", gp);
        if (sides < 0 || sides > 4) {
          throw SchemaError(gp + ".border_sides", "must be in [0,4]");
        }
        g.border_sides = static_cast<int>(sides);
      }
      const Json& jlines = array(jg, "lines", gp);
      for (std::size_t li = 0; li < jlines.size(); ++li) {
        const std::string lp = gp + ".lines[" + std::to_string(li) + "]";
        const Json& jl = jlines[li];
        Line line;
        line.bbox = bbox_from_json(require(jl, "bbox", lp), lp + ".bbox");
        const Json& jsegs = array(jl, "segments", lp);
        for (std::size_t si = 0; si < jsegs.size(); ++si) {
          const std::string sp = lp + ".segments[" + std::to_string(si) + "]";
          const Json& js = jsegs[si];
          Segment s;
          s.text = string(js, "text", sp);
          if (s.text.empty()) throw SchemaError(sp + ".text", "must be non-empty");
          s.bbox = bbox_from_json(require(js, "bbox", sp), sp + ".bbox");
          s.style = style_from_json(require(js, "style", sp), sp + ".style");
          line.segments.push_back(std::move(s));
        }
        g.lines.push_back(std::move(line));
      }
      page.groups.push_back(std::move(g));
    }
    normalize_page(page, pi);
    pages.push_back(std::move(page));
  }
  return pages;
}

Json document_to_json(const std::vector<VisualPage>& pages) {
  Json jpages = Json::array();
  for (const VisualPage& page : pages) {
    Json jtables = Json::array();
    for (const BBox& t : page.table_regions) jtables.push_back(bbox_to_json(t));
    Json jgroups = Json::array();
    for (const Group& g : page.groups) {
      Json jlines = Json::array();
      for (const Line& line : g.lines) {
        Json jsegs = Json::array();
        for (const Segment& s : line.segments) {
          jsegs.push_back(Json{{"text", s.text},
                               {"bbox", bbox_to_json(s.bbox)},
                               {"style", style_to_json(s.style)}});
        }
        jlines.push_back(
            Json{{"bbox", bbox_to_json(line.bbox)}, {"segments", jsegs}});
      }
      jgroups.push_back(Json{{"bbox", bbox_to_json(g.bbox)},
                             {"is_page_header", g.is_page_header},
                             {"is_page_footer", g.is_page_footer},
                             {"border_sides", g.border_sides},
                             {"lines", jlines}});
    }
    jpages.push_back(Json{{"width", page.width},
                          {"height", page.height},
                          {"table_regions", jtables},
                          {"groups", jgroups}});
  }
  return Json{{"pages", jpages}};
}

std::vector<VisualPage> parse_document(std::string_view json_text) {
  return document_from_json(parse_json_text(json_text, "document"));
}

std::string serialize_document(const std::vector<VisualPage>& pages) {
  return document_to_json(pages).dump(2);
}

}  // namespace dirtree
