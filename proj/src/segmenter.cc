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

#include "dirtree/segmenter.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>

#include "dirtree/errors.h"

namespace dirtree {

namespace {

constexpr std::array<std::string_view, 3> kSpanLabelNames = {"Header", "Body",
                                                             "Neither"};
constexpr std::array<std::string_view, 10> kRuleNames = {
    "page_furniture",      "entity_body",       "entity_header",
    "trailing_punctuation", "role_or_address_type", "style_color",
    "style_bold_italic",   "style_font_size",   "style_font_family",
    "fallback_body"};

bool all_space(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

std::string_view trim_view(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

template <typename K>
K weighted_mode(const std::map<K, std::size_t>& weights) {
  // std::map iterates keys ascending, so strict > keeps the smallest key on
  // ties.
  K best{};
  std::size_t best_w = 0;
  bool first = true;
  for (const auto& [key, w] : weights) {
    if (first || w > best_w) {
      best = key;
      best_w = w;
      first = false;
    }
  }
  return best;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

struct Piece {
  std::size_t start;
  std::size_t end;
  SpanLabel label;
  SegmentRule rule;
};

bool ends_header_punctuation(std::string_view text) {
  const std::string_view t = trim_view(text);
  if (t.empty()) return false;
  if (t.back() != ':' && t.back() != '-') return false;
  const std::size_t sp = t.find_last_of(" \t\n");
  const std::string last = lower(sp == std::string_view::npos ? t : t.substr(sp + 1));
  return last != "tel:" && last != "email:" && last != "fax:";
}

}  // namespace

std::string_view span_label_name(SpanLabel label) {
  return kSpanLabelNames[static_cast<std::size_t>(label)];
}

std::optional<SpanLabel> span_label_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kSpanLabelNames.size(); ++i) {
    if (kSpanLabelNames[i] == name) return static_cast<SpanLabel>(i);
  }
  return std::nullopt;
}

std::string_view rule_name(SegmentRule rule) {
  return kRuleNames[static_cast<std::size_t>(rule)];
}

std::optional<SegmentRule> rule_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kRuleNames.size(); ++i) {
    if (kRuleNames[i] == name) return static_cast<SegmentRule>(i);
  }
  return std::nullopt;
}

double font_size_bin(double size) { return std::round(size * 2) / 2; }

PageStyleStats page_style_stats(const VisualPage& page) {
  std::map<std::uint32_t, std::size_t> colors;
  std::map<double, std::size_t> sizes;
  std::map<std::string, std::size_t> families;
  std::size_t total = 0;
  for (const Group& g : page.groups) {
    if (g.is_furniture()) continue;
    for (const Line& line : g.lines) {
      for (const Segment& s : line.segments) {
        const std::size_t w = utf8_length(s.text);
        colors[s.style.color] += w;
        sizes[font_size_bin(s.style.font_size)] += w;
        families[s.style.font_family] += w;
        total += w;
      }
    }
  }
  if (total == 0) throw EmptyPageError("page has no text outside header/footer");
  return PageStyleStats{weighted_mode(colors), weighted_mode(sizes),
                        weighted_mode(families)};
}

LabeledSpan make_span(const VisualPage& page, std::size_t page_index,
                      std::size_t group_index, std::size_t start,
                      std::size_t end, SpanLabel label, SegmentRule rule) {
  if (group_index >= page.groups.size()) {
    throw InputError("span references missing group " + std::to_string(group_index));
  }
  const Group& g = page.groups[group_index];
  const GroupTextLayout layout = group_text_layout(g);
  if (start >= end || end > layout.text.size()) {
    throw InputError("span [" + std::to_string(start) + ", " + std::to_string(end) +
                     ") out of range for group " + std::to_string(group_index));
  }
  LabeledSpan span;
  span.page_index = page_index;
  span.group_index = group_index;
  span.start = start;
  span.end = end;
  span.label = label;
  span.fired_rule = rule;
  span.text = layout.text.substr(start, end - start);

  std::optional<BBox> box;
  std::vector<std::pair<const StyleInfo*, std::size_t>> style_weights;
  std::vector<std::size_t> lines;
  for (const SegmentSpan& ss : layout.segments) {
    const std::size_t lo = std::max(start, ss.start), hi = std::min(end, ss.end);
    if (lo >= hi) continue;
    const Segment& seg = g.lines[ss.line].segments[ss.segment];
    box = box ? union_of(*box, seg.bbox) : seg.bbox;
    const std::size_t w =
        utf8_length(std::string_view(layout.text).substr(lo, hi - lo));
    auto it = std::find_if(style_weights.begin(), style_weights.end(),
                           [&](const auto& p) { return *p.first == seg.style; });
    if (it == style_weights.end()) {
      style_weights.emplace_back(&seg.style, w);
    } else {
      it->second += w;
    }
    if (lines.empty() || lines.back() != ss.line) lines.push_back(ss.line);
  }
  if (!box) {
    // Only separator whitespace is covered; borrow the nearest segment.
    const auto it = std::find_if(layout.segments.begin(), layout.segments.end(),
                                 [&](const SegmentSpan& ss) { return ss.start >= end; });
    const SegmentSpan& ss = it != layout.segments.end() ? *it : layout.segments.back();
    const Segment& seg = g.lines[ss.line].segments[ss.segment];
    box = seg.bbox;
    style_weights.emplace_back(&seg.style, 0);
    lines.push_back(ss.line);
  }
  span.bbox = *box;
  const auto dominant = std::max_element(
      style_weights.begin(), style_weights.end(),
      [](const auto& a, const auto& b) { return a.second < b.second; });
  span.style_summary = *dominant->first;
  std::vector<double> heights;
  for (std::size_t li : lines) heights.push_back(g.lines[li].bbox.height());
  span.line_height = median(heights);
  return span;
}

std::vector<LabeledSpan> segment_page(const VisualPage& page,
                                      const AnnotationSet& anns,
                                      std::size_t page_index) {
  const PageStyleStats stats = page_style_stats(page);
  std::vector<LabeledSpan> out;
  for (std::size_t gi = 0; gi < page.groups.size(); ++gi) {
    const Group& g = page.groups[gi];
    const GroupTextLayout layout = group_text_layout(g);
    const std::string& text = layout.text;
    const std::size_t len = text.size();
    std::vector<Piece> pieces;

    if (g.is_furniture()) {
      pieces.push_back({0, len, SpanLabel::kNeither, SegmentRule::kPageFurniture});
    } else {
      const auto group_anns = anns.for_group({page_index, gi});
      const Annotation* entity = nullptr;
      for (const Annotation& a : group_anns) {
        if (a.label != AnnotationLabel::kOrg && a.label != AnnotationLabel::kPerson) continue;
        if (a.end > len) continue;
        if (!entity || a.start < entity->start ||
            (a.start == entity->start && a.end > entity->end)) {
          entity = &a;
        }
      }
      std::size_t remaining_end = len;
      if (entity) {
        const bool text_follows =
            !all_space(std::string_view(text).substr(entity->end));
        pieces.push_back({entity->start, len,
                          text_follows ? SpanLabel::kBody : SpanLabel::kHeader,
                          text_follows ? SegmentRule::kEntityBody
                                       : SegmentRule::kEntityHeader});
        remaining_end = entity->start;
      }
      if (remaining_end > 0) {
        const std::string_view rest = std::string_view(text).substr(0, remaining_end);
        if (all_space(rest) && !pieces.empty()) {
          pieces.front().start = 0;
        } else {
          Piece p{0, remaining_end, SpanLabel::kBody, SegmentRule::kFallbackBody};
          const bool has_role = std::any_of(
              group_anns.begin(), group_anns.end(), [&](const Annotation& a) {
                return (a.label == AnnotationLabel::kRole ||
                        a.label == AnnotationLabel::kAddressType) &&
                       a.end <= remaining_end;
              });
          if (ends_header_punctuation(rest)) {
            p = {0, remaining_end, SpanLabel::kHeader, SegmentRule::kTrailingPunctuation};
          } else if (has_role) {
            p = {0, remaining_end, SpanLabel::kHeader, SegmentRule::kRoleOrAddressType};
          } else {
            const StyleInfo style =
                make_span(page, page_index, gi, 0, remaining_end, SpanLabel::kBody,
                          SegmentRule::kFallbackBody)
                    .style_summary;
            if (style.color != stats.predominant_color) {
              p = {0, remaining_end, SpanLabel::kHeader, SegmentRule::kStyleColor};
            } else if (style.bold || style.italic) {
              p = {0, remaining_end, SpanLabel::kHeader, SegmentRule::kStyleBoldItalic};
            } else if (font_size_bin(style.font_size) > stats.majority_font_size) {
              p = {0, remaining_end, SpanLabel::kHeader, SegmentRule::kStyleFontSize};
            } else if (style.font_family != stats.majority_font_family) {
              p = {0, remaining_end, SpanLabel::kHeader, SegmentRule::kStyleFontFamily};
            }
          }
          pieces.insert(pieces.begin(), p);
        }
      }
    }

    // Merge same-label neighbours; the merged span keeps the
    // higher-precedence rule.
    std::vector<Piece> merged;
    for (const Piece& p : pieces) {
      if (!merged.empty() && merged.back().label == p.label) {
        merged.back().end = p.end;
        merged.back().rule = std::min(merged.back().rule, p.rule);
      } else {
        merged.push_back(p);
      }
    }
    for (const Piece& p : merged) {
      out.push_back(make_span(page, page_index, gi, p.start, p.end, p.label, p.rule));
    }
  }
  return out;
}

Json spans_to_json(std::size_t page_index, const std::vector<LabeledSpan>& spans) {
  Json js = Json::array();
  for (const LabeledSpan& s : spans) {
    js.push_back(Json{{"group", s.group_index},
                      {"start", s.start},
                      {"end", s.end},
                      {"label", span_label_name(s.label)},
                      {"fired_rule", rule_name(s.fired_rule)},
                      {"bbox", bbox_to_json(s.bbox)},
                      {"text", s.text}});
  }
  return Json{{"page", page_index}, {"spans", js}};
}

std::vector<LabeledSpan> spans_from_json(const Json& j, const VisualPage& page,
                                         std::size_t page_index) {
  using namespace json_field;
  const Json& js = array(j, "spans", "$");
  std::vector<LabeledSpan> out;
  for (std::size_t i = 0; i < js.size(); ++i) {
    const std::string p = "$.spans[" + std::to_string(i) + "]";
    const long long group = integer(js[i], "group", p);
    const long long start = integer(js[i], "start", p);
    const long long end = integer(js[i], "end", p);
    if (group < 0 || start < 0 || end < 0) throw SchemaError(p, "negative index");
    const auto label = span_label_from_name(string(js[i], "label", p));
    if (!label) throw SchemaError(p + ".label", "expected Header, Body or Neither");
    SegmentRule rule = SegmentRule::kFallbackBody;
    if (js[i].contains("fired_rule")) {
      const auto r = rule_from_name(string(js[i], "fired_rule", p));
      if (!r) throw SchemaError(p + ".fired_rule", "unknown rule");
      rule = *r;
    }
    try {
      out.push_back(make_span(page, page_index, static_cast<std::size_t>(group),
                              static_cast<std::size_t>(start),
                              static_cast<std::size_t>(end), *label, rule));
    } catch (const InputError& e) {
      throw SchemaError(p, e.what());
    }
  }
  return out;
}

}  // namespace dirtree
