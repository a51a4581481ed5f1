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

#ifndef DIRTREE_SEGMENTER_H_
#define DIRTREE_SEGMENTER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dirtree/annotator.h"
#include "dirtree/json_io.h"
#include "dirtree/visual_model.h"

namespace dirtree {

enum class SpanLabel { kHeader, kBody, kNeither };

std::string_view span_label_name(SpanLabel label);  // "Header", ...
std::optional<SpanLabel> span_label_from_name(std::string_view name);

// Branches of the header/body segmentation rules, in precedence order.
enum class SegmentRule {
  kPageFurniture,
  kEntityBody,
  kEntityHeader,
  kTrailingPunctuation,
  kRoleOrAddressType,
  kStyleColor,
  kStyleBoldItalic,
  kStyleFontSize,
  kStyleFontFamily,
  kFallbackBody,
};

std::string_view rule_name(SegmentRule rule);
std::optional<SegmentRule> rule_from_name(std::string_view name);

struct LabeledSpan {
  std::size_t page_index = 0;
  std::size_t group_index = 0;
  std::size_t start = 0;  // byte offsets into group_text(), half-open
  std::size_t end = 0;
  SpanLabel label = SpanLabel::kBody;
  BBox bbox;               // union of the covered segment boxes
  StyleInfo style_summary;  // covering most characters
  SegmentRule fired_rule = SegmentRule::kFallbackBody;
  std::string text;        // group_text().substr(start, end - start)
  double line_height = 0;  // median height of the covered lines
};

// Character-weighted modes over the page, page header/footer excluded.
// Font sizes are binned to 0.5pt. Ties go to the smaller size, the
// lexicographically smaller family and the numerically smaller color.
struct PageStyleStats {
  std::uint32_t predominant_color = 0;
  double majority_font_size = 0;
  std::string majority_font_family;
};

double font_size_bin(double size);

// Throws EmptyPageError if the page has no text outside header/footer.
PageStyleStats page_style_stats(const VisualPage& page);

// Builds a span over [start, end) of a group, filling in geometry, style,
// text and line height from the page. Throws InputError on bad offsets.
LabeledSpan make_span(const VisualPage& page, std::size_t page_index,
                      std::size_t group_index, std::size_t start,
                      std::size_t end, SpanLabel label, SegmentRule rule);

// Labels every group of a directory page as Header/Body/Neither spans. For
// each group the first matching rule wins:
//   1. page header/footer group -> Neither
//   2. first ORG/PERSON entity: Body from its start to the group end when
//      text follows it, otherwise the entity alone is a Header
//   3. remaining text ending in ':' or '-' -> Header (not for Tel:, Email:,
//      Fax:)
//   4. remaining text containing a ROLE or ADDRESS_TYPE -> Header
//   5. remaining text styled differently from the page (color, bold or
//      italic, larger size, other family) -> Header
//   6. anything left -> Body
// Spans are maximal same-label runs that tile each group's text exactly.
std::vector<LabeledSpan> segment_page(const VisualPage& page,
                                      const AnnotationSet& anns,
                                      std::size_t page_index = 0);

Json spans_to_json(std::size_t page_index, const std::vector<LabeledSpan>& spans);
// Rebuilds spans from the JSON written by spans_to_json.
std::vector<LabeledSpan> spans_from_json(const Json& j, const VisualPage& page,
                                         std::size_t page_index);

}  // namespace dirtree

#endif  // DIRTREE_SEGMENTER_H_
