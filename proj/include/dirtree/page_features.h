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

#ifndef DIRTREE_PAGE_FEATURES_H_
#define DIRTREE_PAGE_FEATURES_H_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "dirtree/annotator.h"
#include "dirtree/visual_model.h"

namespace dirtree {

inline constexpr std::size_t kNumFeatures = 15;

// Page-level features for directory page identification, in this fixed
// order (index i holds feature f(i+1)):
//   f1  currency patterns        f9  words (page header/footer excluded)
//   f2  date patterns            f10 groups with an address candidate
//   f3  email patterns           f11 groups bordered on all 4 sides
//   f4  phone patterns           f12 groups with 1..3 ORG entities
//   f5  FAC entities             f13 groups with 1..4 ROLE entities
//   f6  groups (all)             f14 f12 / f6
//   f7  table area / page area   f15 f13 / f6
//   f8  ROLE entities
using FeatureVector = std::array<double, kNumFeatures>;

// Stable machine names for the features, recorded in model files.
const std::array<std::string_view, kNumFeatures>& feature_names();

FeatureVector extract_features(const VisualPage& page, const AnnotationSet& anns,
                               std::size_t page_index = 0);

struct FeatureRow {
  FeatureVector features{};
  bool directory = false;
};

// CSV with header "f1,...,f15,label" and label 1 (directory) or 0.
std::string features_to_csv(const std::vector<FeatureRow>& rows);
// Accepts label values 1/0, true/false and directory/non-directory.
std::vector<FeatureRow> features_from_csv(std::string_view csv);

}  // namespace dirtree

#endif  // DIRTREE_PAGE_FEATURES_H_
