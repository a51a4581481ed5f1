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

#ifndef DIRTREE_ANNOTATOR_H_
#define DIRTREE_ANNOTATOR_H_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dirtree/visual_model.h"

namespace dirtree {

enum class AnnotationLabel {
  kOrg,
  kPerson,
  kRole,
  kAddressType,
  kGpe,
  kPostcode,
  kCardinal,
  kFac,
  kCurrency,
  kDate,
  kEmail,
  kPhone,
};

inline constexpr std::array<AnnotationLabel, 12> kAllAnnotationLabels = {
    AnnotationLabel::kOrg,      AnnotationLabel::kPerson,
    AnnotationLabel::kRole,     AnnotationLabel::kAddressType,
    AnnotationLabel::kGpe,      AnnotationLabel::kPostcode,
    AnnotationLabel::kCardinal, AnnotationLabel::kFac,
    AnnotationLabel::kCurrency, AnnotationLabel::kDate,
    AnnotationLabel::kEmail,    AnnotationLabel::kPhone,
};

// "ORG", "ADDRESS_TYPE", ...
std::string_view label_name(AnnotationLabel label);
std::optional<AnnotationLabel> label_from_name(std::string_view name);

struct Annotation {
  AnnotationLabel label;
  std::size_t start = 0;  // byte offsets into group_text(), half-open
  std::size_t end = 0;
  std::string surface;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct GroupKey {
  std::size_t page = 0;
  std::size_t group = 0;
  friend auto operator<=>(const GroupKey&, const GroupKey&) = default;
};

class AnnotationSet {
 public:
  void set(GroupKey key, std::vector<Annotation> anns);
  // Empty for groups without annotations.
  std::span<const Annotation> for_group(GroupKey key) const;
  const std::map<GroupKey, std::vector<Annotation>>& groups() const {
    return groups_;
  }
  std::size_t total() const;
  bool empty() const { return total() == 0; }

 private:
  std::map<GroupKey, std::vector<Annotation>> groups_;
};

// Phrase lists driving the default annotator. Matching is ASCII
// case-insensitive on word boundaries.
struct Gazetteer {
  std::vector<std::string> roles;
  std::vector<std::string> address_types;
  std::vector<std::string> orgs;
  std::vector<std::string> org_suffixes;
  std::vector<std::string> gpe;
  // Optional extensions of the file format.
  std::vector<std::string> persons;
  std::vector<std::string> facilities;
  std::vector<std::string> fac_suffixes;

  // Trims phrases, drops empty ones and removes case-insensitive duplicates.
  void normalize();
};

Gazetteer gazetteer_from_json_text(std::string_view json_text);
std::string gazetteer_to_json_text(const Gazetteer& gaz);
// The gazetteer shipped as data/gazetteer.json, compiled in.
const Gazetteer& default_gazetteer();

// Entity recognizer interface. Implementations must be pure functions of the
// text: the same text always yields the same annotations.
class Annotator {
 public:
  virtual ~Annotator() = default;
  virtual std::vector<Annotation> annotate_text(std::string_view text) const = 0;
};

// Regex patterns for EMAIL/PHONE/DATE/CURRENCY/POSTCODE/CARDINAL plus
// gazetteer phrases for ROLE/ADDRESS_TYPE/GPE/ORG/PERSON/FAC, with an extra
// capitalized-words + suffix heuristic for ORG and FAC.
class GazetteerAnnotator : public Annotator {
 public:
  explicit GazetteerAnnotator(Gazetteer gaz);
  std::vector<Annotation> annotate_text(std::string_view text) const override;
  const Gazetteer& gazetteer() const { return gaz_; }

 private:
  Gazetteer gaz_;
};

AnnotationSet annotate(const VisualPage& page, const Annotator& annotator,
                       std::size_t page_index = 0);
AnnotationSet annotate(const VisualPage& page, const Gazetteer& gaz,
                       std::size_t page_index = 0);

// At least two distinct labels among GPE, POSTCODE and CARDINAL.
bool is_address_candidate(std::span<const Annotation> group_annotations);
bool is_address_candidate(const AnnotationSet& anns, GroupKey key);

// Whitespace-separated tokens with their byte ranges.
struct Token {
  std::size_t start = 0;
  std::size_t end = 0;
};
std::vector<Token> tokenize(std::string_view text);

}  // namespace dirtree

#endif  // DIRTREE_ANNOTATOR_H_
