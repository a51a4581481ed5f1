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

#include <algorithm>
#include <random>
#include <regex>
#include <string>

#include "catch_amalgamated.hpp"
#include "dirtree/annotator.h"
#include "dirtree/errors.h"
#include "dirtree/synthetic.h"
#include "test_support.h"

using namespace dirtree;

namespace {

std::vector<Annotation> ann(std::string_view text) {
  return GazetteerAnnotator(default_gazetteer()).annotate_text(text);
}

std::vector<Annotation> only(const std::vector<Annotation>& all, AnnotationLabel label) {
  std::vector<Annotation> out;
  std::copy_if(all.begin(), all.end(), std::back_inserter(out),
               [&](const Annotation& a) { return a.label == label; });
  return out;
}

}  // namespace

TEST_CASE("phone number after a Tel: label") {
  const auto phones = only(ann("Tel: +352 26 26 26 1"), AnnotationLabel::kPhone);
  REQUIRE(phones.size() == 1);
  CHECK(phones[0].surface == "+352 26 26 26 1");
  CHECK(phones[0].start == 5);
  CHECK(phones[0].end == 20);
}

TEST_CASE("address type without an organization") {
  const auto all = ann("Registered Office of the Fund");
  const auto types = only(all, AnnotationLabel::kAddressType);
  REQUIRE(types.size() == 1);
  CHECK(types[0].surface == "Registered Office");
  CHECK(only(all, AnnotationLabel::kOrg).empty());
}

TEST_CASE("empty gazetteer and no pattern hits give nothing") {
  const GazetteerAnnotator empty{Gazetteer{}};
  CHECK(empty.annotate_text("plain words only here").empty());
  VisualPage page = dirtree::testing::page_with_groups(
      {{"plain words only", dirtree::testing::plain_style()}}, 0);
  CHECK(annotate(page, empty, 0).empty());
}

TEST_CASE("email pattern") {
  const auto emails = only(ann("Email: fund.admin@example.lu for queries"), AnnotationLabel::kEmail);
  REQUIRE(emails.size() == 1);
  CHECK(emails[0].surface == "fund.admin@example.lu");
}

TEST_CASE("postcodes with hyphen, en dash and five digits") {
  for (const std::string code : {"L-2449", "CH-8023", "L–1855", "75440"}) {
    const auto hits = only(ann("Street 1, " + code + " City"), AnnotationLabel::kPostcode);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].surface == code);
  }
}

TEST_CASE("organizations from the gazetteer and from suffixes") {
  const auto orgs = only(ann("KPMG Luxembourg Société Coopérative 39, Avenue John F. Kennedy"),
                         AnnotationLabel::kOrg);
  REQUIRE_FALSE(orgs.empty());
  CHECK(orgs[0].start == 0);
  const auto suffix = only(ann("Oddo Asset Management SA 12, boulevard"), AnnotationLabel::kOrg);
  REQUIRE(suffix.size() == 1);
  CHECK(suffix[0].surface == "Oddo Asset Management SA");
}

TEST_CASE("address candidate requires two distinct indicator labels") {
  const GazetteerAnnotator a(default_gazetteer());
  CHECK(is_address_candidate(a.annotate_text("14, boulevard Royal L-2449 LUXEMBOURG")));
  CHECK_FALSE(is_address_candidate(a.annotate_text("DIRECTORY")));
  CHECK_FALSE(is_address_candidate(a.annotate_text("LUXEMBOURG")));
}

TEST_CASE("address candidate is monotone in its annotations") {
  std::vector<Annotation> base{{AnnotationLabel::kGpe, 0, 3, "abc"},
                               {AnnotationLabel::kCardinal, 4, 6, "12"}};
  REQUIRE(is_address_candidate(base));
  for (AnnotationLabel extra : kAllAnnotationLabels) {
    auto more = base;
    more.push_back({extra, 7, 8, "x"});
    CHECK(is_address_candidate(more));
  }
}

TEST_CASE("annotations slice their text exactly and never overlap within a label") {
  std::mt19937_64 rng(99);
  const GazetteerAnnotator a(default_gazetteer());
  for (int i = 0; i < 200; ++i) {
    const VisualPage page = synth::random_visual_page(rng);
    for (std::size_t g = 0; g < page.groups.size(); ++g) {
      const std::string text = group_text(page.groups[g]);
      const auto anns = a.annotate_text(text);
      CHECK(anns == a.annotate_text(text));
      for (const Annotation& x : anns) {
        REQUIRE(x.start < x.end);
        REQUIRE(x.end <= text.size());
        CHECK(text.substr(x.start, x.end - x.start) == x.surface);
        for (const Annotation& y : anns) {
          if (&x == &y || x.label != y.label) continue;
          CHECK((x.end <= y.start || y.end <= x.start));
        }
      }
    }
  }
}

TEST_CASE("gazetteer round-trips through JSON") {
  const Gazetteer& g = default_gazetteer();
  const Gazetteer back = gazetteer_from_json_text(gazetteer_to_json_text(g));
  CHECK(gazetteer_to_json_text(back) == gazetteer_to_json_text(g));
  CHECK_THROWS_AS(gazetteer_from_json_text(R"({"roles": 3})"), InputError);
}

TEST_CASE("label names round-trip") {
  for (AnnotationLabel l : kAllAnnotationLabels) {
    CHECK(label_from_name(label_name(l)) == l);
  }
  CHECK_FALSE(label_from_name("NOPE").has_value());
}
