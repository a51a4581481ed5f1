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

#include "dirtree/page_features.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "dirtree/errors.h"

namespace dirtree {

namespace {

double area_in_page(const BBox& b, const VisualPage& page) {
  const BBox page_box{0, 0, page.width, page.height};
  return x_overlap(b, page_box) * y_overlap(b, page_box);
}

// Area of the union of the table regions clipped to the page. Regions are
// few, so a coordinate-compression sweep is plenty.
double table_area(const VisualPage& page) {
  std::vector<double> xs, ys;
  std::vector<BBox> boxes;
  for (const BBox& b : page.table_regions) {
    BBox c{std::clamp(b.left, 0.0, page.width), std::clamp(b.top, 0.0, page.height),
           std::clamp(b.right, 0.0, page.width),
           std::clamp(b.bottom, 0.0, page.height)};
    if (area_in_page(c, page) <= 0) continue;
    boxes.push_back(c);
    xs.insert(xs.end(), {c.left, c.right});
    ys.insert(ys.end(), {c.top, c.bottom});
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  double total = 0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const double cx = (xs[i] + xs[i + 1]) / 2, cy = (ys[j] + ys[j + 1]) / 2;
      bool covered = std::any_of(boxes.begin(), boxes.end(), [&](const BBox& b) {
        return cx >= b.left && cx <= b.right && cy >= b.top && cy <= b.bottom;
      });
      if (covered) total += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
    }
  }
  return total;
}

std::size_t count_label(std::span<const Annotation> anns, AnnotationLabel label) {
  return static_cast<std::size_t>(std::count_if(
      anns.begin(), anns.end(), [&](const Annotation& a) { return a.label == label; }));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

const std::array<std::string_view, kNumFeatures>& feature_names() {
  static const std::array<std::string_view, kNumFeatures> names = {
      "currency_patterns", "date_patterns",   "email_patterns",
      "phone_patterns",    "fac_entities",    "groups",
      "table_fraction",    "role_entities",   "words",
      "address_groups",    "bordered_groups", "org_groups",
      "role_groups",       "org_group_ratio", "role_group_ratio"};
  return names;
}

FeatureVector extract_features(const VisualPage& page, const AnnotationSet& anns,
                               std::size_t page_index) {
  FeatureVector f{};
  for (std::size_t gi = 0; gi < page.groups.size(); ++gi) {
    const Group& g = page.groups[gi];
    const auto ga = anns.for_group({page_index, gi});
    f[0] += count_label(ga, AnnotationLabel::kCurrency);
    f[1] += count_label(ga, AnnotationLabel::kDate);
    f[2] += count_label(ga, AnnotationLabel::kEmail);
    f[3] += count_label(ga, AnnotationLabel::kPhone);
    f[4] += count_label(ga, AnnotationLabel::kFac);
    const std::size_t roles = count_label(ga, AnnotationLabel::kRole);
    const std::size_t orgs = count_label(ga, AnnotationLabel::kOrg);
    f[7] += roles;
    if (!g.is_furniture()) {
      for (const Line& line : g.lines) {
        for (const Segment& s : line.segments) f[8] += tokenize(s.text).size();
      }
    }
    if (is_address_candidate(ga)) f[9] += 1;
    if (g.border_sides == 4) f[10] += 1;
    if (orgs >= 1 && orgs <= 3) f[11] += 1;
    if (roles >= 1 && roles <= 4) f[12] += 1;
  }
  f[5] = static_cast<double>(page.groups.size());
  const double page_area = page.width * page.height;
  f[6] = page_area > 0 ? std::clamp(table_area(page) / page_area, 0.0, 1.0) : 0.0;
  if (f[5] > 0) {
    f[13] = f[11] / f[5];
    f[14] = f[12] / f[5];
  }
  return f;
}

std::string features_to_csv(const std::vector<FeatureRow>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < kNumFeatures; ++i) out << 'f' << (i + 1) << ',';
  out << "label\n";
  out << std::setprecision(17);
  for (const FeatureRow& row : rows) {
    for (double v : row.features) out << v << ',';
    out << (row.directory ? 1 : 0) << '\n';
  }
  return out.str();
}

std::vector<FeatureRow> features_from_csv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  std::vector<FeatureRow> rows;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    const std::string where = "csv line " + std::to_string(line_no);
    if (!header_seen) {
      header_seen = true;
      if (cells.size() != kNumFeatures + 1 || cells.back() != "label") {
        throw SchemaError(where, "expected header f1..f15,label");
      }
      continue;
    }
    if (cells.size() != kNumFeatures + 1) {
      throw SchemaError(where, "expected 16 columns");
    }
    FeatureRow row;
    for (std::size_t i = 0; i < kNumFeatures; ++i) {
      const std::string& c = cells[i];
      double v = 0;
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || ptr != c.data() + c.size() || !std::isfinite(v)) {
        throw SchemaError(where + " column f" + std::to_string(i + 1),
                          "not a number: '" + c + "'");
      }
      row.features[i] = v;
    }
    const std::string& label = cells.back();
    if (label == "1" || label == "true" || label == "directory") {
      row.directory = true;
    } else if (label == "0" || label == "false" || label == "non-directory") {
      row.directory = false;
    } else {
      throw SchemaError(where + " column label", "unknown label '" + label + "'");
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dirtree
