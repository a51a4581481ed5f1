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

#include "dirtree/synthetic.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>

#include "dirtree/page_features.h"

namespace dirtree::synth {

namespace {

template <typename T, std::size_t N>
const T& pick(std::mt19937_64& rng, const std::array<T, N>& items) {
  return items[rng() % N];
}

constexpr std::array<std::string_view, 28> kWords{
    "Registered Office", "Auditor", "Administrator of the Fund", "Deutsche Bank",
    "KPMG", "S.A.", "Luxembourg", "L-2449", "14, boulevard Royal", "Tel:",
    "+352 26 26 26 1", "Email:", "info@example.com", "Depositary", "Fund",
    "Société anonyme", "Zurich", "Avenue", "and", "of", "the", "Directors:",
    "Paris", "Legal Counsel", "(as per Cayman Legal Matters)", "Notes -",
    "EUR 1,000", "31 December 2020"};

constexpr std::array<double, 6> kSizes{8, 9, 10, 10.2, 12, 16};
constexpr std::array<std::uint32_t, 3> kColors{0x000000, 0x1f3864, 0x7f7f7f};
constexpr std::array<std::string_view, 3> kFamilies{"Arial", "Times", "Helvetica"};

StyleInfo random_style(std::mt19937_64& rng, bool plain) {
  StyleInfo s;
  s.font_family = plain ? "Arial" : std::string(pick(rng, kFamilies));
  s.font_size = plain ? 10 : pick(rng, kSizes);
  s.bold = !plain && rng() % 3 == 0;
  s.italic = !plain && rng() % 4 == 0;
  s.color = plain ? 0 : pick(rng, kColors);
  return s;
}

std::string random_phrase(std::mt19937_64& rng, int max_words) {
  std::string out;
  const long long n = uniform_int(rng, 1, max_words);
  for (long long i = 0; i < n; ++i) {
    if (!out.empty()) out += ' ';
    out += pick(rng, kWords);
  }
  return out;
}

}  // namespace

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

long long uniform_int(std::mt19937_64& rng, long long lo, long long hi) {
  return lo + static_cast<long long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

Dataset margin_dataset(std::size_t n_pos, std::size_t n_neg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Dataset d;
  auto row = [&](bool dir) {
    FeatureRow r;
    r.directory = dir;
    auto& f = r.features;
    auto set = [&](int k, long long lo, long long hi) {
      f[k - 1] = static_cast<double>(uniform_int(rng, lo, hi));
    };
    if (dir) {
      set(1, 0, 2);     // currency
      set(2, 0, 2);     // dates
      set(3, 0, 4);     // emails
      set(4, 0, 8);     // phones
      set(5, 0, 3);     // facilities
      set(6, 8, 40);    // groups
      f[6] = uniform(rng, 0, 0.1);
      set(8, 3, 16);    // roles
      set(9, 40, 320);  // words
      set(10, 3, 12);   // address groups
      set(11, 0, 3);    // bordered groups
      set(12, 3, 12);   // org groups
      set(13, 2, 10);   // role groups
    } else {
      set(1, 0, 25);
      set(2, 0, 12);
      set(3, 0, 1);
      set(4, 0, 1);
      set(5, 0, 1);
      set(6, 3, 30);
      f[6] = uniform(rng, 0, 0.6);
      set(8, 0, 3);
      set(9, 250, 900);
      set(10, 0, 1);
      set(11, 0, 4);
      set(12, 0, 1);
      set(13, 0, 1);
    }
    f[13] = f[11] / f[5];
    f[14] = f[12] / f[5];
    return r;
  };
  for (std::size_t i = 0; i < n_pos; ++i) d.push_back(row(true));
  for (std::size_t i = 0; i < n_neg; ++i) d.push_back(row(false));
  return d;
}

std::vector<LabeledSpan> random_span_page(std::mt19937_64& rng) {
  const long long n = uniform_int(rng, 1, 40);
  std::vector<LabeledSpan> spans;
  for (long long i = 0; i < n; ++i) {
    LabeledSpan s;
    s.group_index = static_cast<std::size_t>(i);
    s.label = rng() % 5 < 2 ? SpanLabel::kHeader : SpanLabel::kBody;
    if (i > 0 && rng() % 10 == 0) {
      // Exact duplicate geometry stresses tie handling.
      s.bbox = spans[rng() % spans.size()].bbox;
    } else {
      // Snap to a coarse grid so aligned columns and rows are common.
      const double left = 20.0 * static_cast<double>(uniform_int(rng, 1, 25));
      const double top = 12.0 * static_cast<double>(uniform_int(rng, 2, 65));
      s.bbox = {left, top, left + uniform(rng, 20, 260), top + uniform(rng, 6, 48)};
    }
    s.style_summary = random_style(rng, rng() % 2 == 0);
    s.text = random_phrase(rng, 4);
    if (rng() % 4 == 0) {
      for (char& c : s.text) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    s.end = s.text.size();
    s.line_height = uniform(rng, 8, 14);
    s.fired_rule = s.label == SpanLabel::kHeader ? SegmentRule::kStyleBoldItalic
                                                 : SegmentRule::kFallbackBody;
    spans.push_back(std::move(s));
  }
  return spans;
}

VisualPage random_visual_page(std::mt19937_64& rng) {
  VisualPage page;
  page.width = 595;
  page.height = 842;
  const long long n_groups = uniform_int(rng, 1, 15);
  for (long long g = 0; g < n_groups; ++g) {
    Group group;
    const double left = uniform(rng, 20, 300);
    double top = uniform(rng, 20, 760);
    const long long n_lines = uniform_int(rng, 1, 4);
    for (long long l = 0; l < n_lines; ++l) {
      Line line;
      double x = left;
      const double h = uniform(rng, 8, 14);
      const long long n_segs = uniform_int(rng, 1, 3);
      for (long long k = 0; k < n_segs; ++k) {
        Segment seg;
        seg.text = random_phrase(rng, 3);
        const double w = 5.0 * static_cast<double>(utf8_length(seg.text));
        seg.bbox = {x, top, x + w, top + h};
        seg.style = random_style(rng, rng() % 3 != 0);
        x += w + 3;
        line.segments.push_back(std::move(seg));
      }
      top += h + 2;
      group.lines.push_back(std::move(line));
    }
    // Group 0 always holds body text so the page has a majority style.
    group.is_page_header = g > 0 && rng() % 12 == 0;
    group.is_page_footer = g > 0 && !group.is_page_header && rng() % 12 == 0;
    group.border_sides = static_cast<int>(rng() % 5);
    page.groups.push_back(std::move(group));
  }
  // Boxes are tightened to their children.
  for (Group& g : page.groups) {
    BBox b = g.lines.front().segments.front().bbox;
    for (const Line& l : g.lines) {
      for (const Segment& s : l.segments) b = union_of(b, s.bbox);
    }
    g.bbox = b;
    for (Line& l : g.lines) {
      BBox lb = l.segments.front().bbox;
      for (const Segment& s : l.segments) lb = union_of(lb, s.bbox);
      l.bbox = lb;
    }
  }
  for (const Group& g : page.groups) {
    page.width = std::max(page.width, g.bbox.right + 20);
    page.height = std::max(page.height, g.bbox.bottom + 20);
  }
  normalize_page(page, 0);
  return page;
}

}  // namespace dirtree::synth
