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

#ifndef DIRTREE_VISUAL_MODEL_H_
#define DIRTREE_VISUAL_MODEL_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dirtree {

// Axis-aligned box in page points. Origin is the top-left corner of the page
// and y grows downward, so "bottom-up" means decreasing y.
struct BBox {
  double left = 0;
  double top = 0;
  double right = 0;
  double bottom = 0;

  double width() const { return right - left; }
  double height() const { return bottom - top; }
  double area() const { return width() * height(); }

  bool contains(const BBox& other, double tol = 0) const;
  friend bool operator==(const BBox&, const BBox&) = default;
};

BBox union_of(const BBox& a, const BBox& b);

// Horizontal overlap length, never negative.
double x_overlap(const BBox& a, const BBox& b);
// Vertical gap from the bottom of `a` to the top of `b`. Negative when the
// boxes overlap vertically.
double v_gap(const BBox& a, const BBox& b);
// Vertical overlap length, never negative.
double y_overlap(const BBox& a, const BBox& b);

struct StyleInfo {
  std::string font_family;
  double font_size = 0;
  bool bold = false;
  bool italic = false;
  std::uint32_t color = 0;  // 0xRRGGBB

  friend bool operator==(const StyleInfo&, const StyleInfo&) = default;
};

// A run of words sharing one style.
struct Segment {
  std::string text;
  BBox bbox;
  StyleInfo style;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct Line {
  std::vector<Segment> segments;  // sorted by bbox.left
  BBox bbox;

  friend bool operator==(const Line&, const Line&) = default;
};

struct Group {
  std::vector<Line> lines;  // sorted by bbox.top
  BBox bbox;
  bool is_page_header = false;
  bool is_page_footer = false;
  int border_sides = 0;  // sides enclosed by ruling borders, 0..4

  bool is_furniture() const { return is_page_header || is_page_footer; }
  friend bool operator==(const Group&, const Group&) = default;
};

struct VisualPage {
  double width = 0;
  double height = 0;
  std::vector<Group> groups;
  std::vector<BBox> table_regions;

  friend bool operator==(const VisualPage&, const VisualPage&) = default;
};

// Location of one segment inside the text returned by group_text().
struct SegmentSpan {
  std::size_t line = 0;
  std::size_t segment = 0;
  std::size_t start = 0;  // byte offset, half-open
  std::size_t end = 0;
};

struct GroupTextLayout {
  std::string text;
  std::vector<SegmentSpan> segments;
};

// Segment texts joined by single spaces, lines top-to-bottom and segments
// left-to-right. Offsets everywhere in the library are UTF-8 byte offsets
// into this string.
std::string group_text(const Group& g);
GroupTextLayout group_text_layout(const Group& g);

// Sorts lines/segments into reading order, checks every invariant and
// tightens line/group boxes to the union of their children. Throws
// GeometryError naming the page and group on violation.
void normalize_page(VisualPage& page, std::size_t page_index);

// Parses the visual JSON document format. Throws SchemaError (with a JSON
// path) or GeometryError.
std::vector<VisualPage> parse_document(std::string_view json_text);
std::string serialize_document(const std::vector<VisualPage>& pages);

// Number of UTF-8 code points in `s`.
std::size_t utf8_length(std::string_view s);

}  // namespace dirtree

#endif  // DIRTREE_VISUAL_MODEL_H_
