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

#include "dirtree/annotator.h"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>

#include "dirtree/errors.h"
#include "dirtree/json_io.h"
#include "default_gazetteer.inc"

namespace dirtree {

namespace {

constexpr std::array<std::string_view, 12> kLabelNames = {
    "ORG",      "PERSON", "ROLE",     "ADDRESS_TYPE", "GPE",   "POSTCODE",
    "CARDINAL", "FAC",    "CURRENCY", "DATE",         "EMAIL", "PHONE"};

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

struct Range {
  std::size_t start;
  std::size_t end;
};

// Occurrences of `phrase` in `lowered` respecting word boundaries at the
// phrase edges that are word characters.
void find_phrase(std::string_view lowered, const std::string& phrase_lower,
                 std::vector<Range>& out) {
  if (phrase_lower.empty()) return;
  const bool word_start = is_word_byte(phrase_lower.front());
  const bool word_end = is_word_byte(phrase_lower.back());
  std::size_t pos = lowered.find(phrase_lower);
  while (pos != std::string_view::npos) {
    const std::size_t end = pos + phrase_lower.size();
    bool ok = true;
    if (word_start && pos > 0 && is_word_byte(lowered[pos - 1])) ok = false;
    if (word_end && end < lowered.size() && is_word_byte(lowered[end])) {
      ok = false;
    }
    if (ok) out.push_back({pos, end});
    pos = lowered.find(phrase_lower, pos + 1);
  }
}

// Longest match first; among equal lengths the earliest. Result sorted by
// start and free of overlaps.
std::vector<Range> select_longest(std::vector<Range> cands) {
  std::sort(cands.begin(), cands.end(), [](const Range& a, const Range& b) {
    const std::size_t la = a.end - a.start, lb = b.end - b.start;
    if (la != lb) return la > lb;
    return a.start < b.start;
  });
  std::vector<Range> chosen;
  for (const Range& c : cands) {
    bool overlaps = std::any_of(chosen.begin(), chosen.end(), [&](const Range& r) {
      return c.start < r.end && r.start < c.end;
    });
    if (!overlaps) chosen.push_back(c);
  }
  std::sort(chosen.begin(), chosen.end(),
            [](const Range& a, const Range& b) { return a.start < b.start; });
  return chosen;
}

std::vector<Range> match_phrases(std::string_view lowered,
                                 const std::vector<std::string>& phrases) {
  std::vector<Range> out;
  for (const std::string& p : phrases) find_phrase(lowered, ascii_lower(p), out);
  return out;
}

std::vector<Range> match_regex(const std::string& text, const std::regex& re) {
  std::vector<Range> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
       it != std::sregex_iterator(); ++it) {
    if (it->length(0) == 0) continue;
    const auto start = static_cast<std::size_t>(it->position(0));
    out.push_back({start, start + static_cast<std::size_t>(it->length(0))});
  }
  return out;
}

const std::regex& email_re() {
  static const std::regex re(R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})");
  return re;
}

const std::regex& phone_re() {
  static const std::regex re(R"((?:\+|\()?\d[\d ()\-]{5,}\d)");
  return re;
}

const std::regex& postcode_re() {
  // Letter prefix with hyphen or en dash ("L-2449", "CH-8023", "L – 1115"),
  // or a bare five digit code.
  static const std::regex re(
      "\\b[A-Z]{1,2} ?(?:-|\xE2\x80\x93) ?\\d{3,5}\\b|\\b\\d{5}\\b");
  return re;
}

const std::regex& currency_re() {
  static const std::regex re(
      "(?:\\$|\xE2\x82\xAC|\xC2\xA3|\xC2\xA5) ?\\d[\\d,]*(?:\\.\\d+)?"
      "|\\b(?:USD|EUR|GBP|CHF|JPY|HKD|SGD|AUD|CAD) ?\\d[\\d,]*(?:\\.\\d+)?"
      "|\\b\\d[\\d,]*(?:\\.\\d+)? ?(?:USD|EUR|GBP|CHF|JPY|HKD|SGD|AUD|CAD)\\b");
  return re;
}

const std::regex& date_re() {
  static const std::string month =
      "(?:jan(?:uary)?|feb(?:ruary)?|mar(?:ch)?|apr(?:il)?|may|june?|july?|"
      "aug(?:ust)?|sep(?:t(?:ember)?)?|oct(?:ober)?|nov(?:ember)?|"
      "dec(?:ember)?)";
  static const std::regex re(
      "\\b\\d{4}-\\d{2}-\\d{2}\\b"
      "|\\b\\d{1,2}[./-]\\d{1,2}[./-](?:\\d{4}|\\d{2})\\b"
      "|\\b\\d{1,2}(?:st|nd|rd|th)? " + month + "\\.?,? \\d{4}\\b"
      "|\\b" + month + "\\.? \\d{1,2}(?:st|nd|rd|th)?,? \\d{4}\\b"
      "|\\b" + month + "\\.? \\d{4}\\b",
      std::regex::icase);
  return re;
}

std::vector<Range> match_phones(const std::string& text) {
  std::vector<Range> out;
  for (Range r : match_regex(text, phone_re())) {
    // Drop an unbalanced trailing or leading parenthesis.
    std::string_view s(text.data() + r.start, r.end - r.start);
    if (s.front() == '(' && s.find(')') == std::string_view::npos) ++r.start;
    const auto digits = std::count_if(text.begin() + r.start, text.begin() + r.end,
                                      [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    if (digits >= 7) out.push_back(r);
  }
  return out;
}

std::vector<Range> match_cardinals(std::string_view text,
                                   const std::vector<Token>& tokens) {
  std::vector<Range> out;
  for (const Token& t : tokens) {
    std::size_t b = t.start, e = t.end;
    while (b < e && (text[b] == '(' || text[b] == '"')) ++b;
    while (e > b && std::string_view(",.;:)\"").find(text[e - 1]) !=
                        std::string_view::npos) {
      --e;
    }
    if (b == e) continue;
    bool digits = std::all_of(text.begin() + b, text.begin() + e, [](char c) {
      return std::isdigit(static_cast<unsigned char>(c));
    });
    if (digits) out.push_back({b, e});
  }
  return out;
}

bool is_capitalized(std::string_view tok) {
  std::size_t i = 0;
  while (i < tok.size() && (tok[i] == '(' || tok[i] == '"' || tok[i] == '\'')) ++i;
  if (i == tok.size()) return false;
  return std::isupper(static_cast<unsigned char>(tok[i])) != 0;
}

bool is_connector(std::string_view tok) {
  static const std::set<std::string, std::less<>> kConnectors = {
      "&", "and", "de", "du", "des", "la", "le", "of", "et", "und", "von"};
  return kConnectors.count(ascii_lower(tok)) > 0;
}

bool ends_clause(std::string_view tok) {
  const char c = tok.back();
  return c == ',' || c == ';' || c == ':';
}

// Capitalized word run ending in a suffix phrase ("Oddo Asset Management
// SA"). The run stops at clause punctuation and at `stops` (role phrases).
std::vector<Range> match_suffixed_names(std::string_view text,
                                        const std::vector<Token>& tokens,
                                        std::string_view lowered,
                                        const std::vector<std::string>& suffixes,
                                        const std::vector<Range>& stops) {
  std::vector<Range> out;
  auto stopped = [&](const Token& t) {
    return std::any_of(stops.begin(), stops.end(), [&](const Range& r) {
      return t.start < r.end && r.start < t.end;
    });
  };
  for (const Range& suf : match_phrases(lowered, suffixes)) {
    auto it = std::find_if(tokens.begin(), tokens.end(),
                           [&](const Token& t) { return t.start == suf.start; });
    if (it == tokens.end()) continue;
    std::size_t first = static_cast<std::size_t>(it - tokens.begin());
    std::size_t k = first;
    std::size_t capitalized = 0;
    while (k > 0) {
      const Token& prev = tokens[k - 1];
      std::string_view tok = text.substr(prev.start, prev.end - prev.start);
      if (ends_clause(tok) || stopped(prev)) break;
      if (is_capitalized(tok)) {
        ++capitalized;
        --k;
        continue;
      }
      // A connector counts only when a capitalized word precedes it.
      if (is_connector(tok) && k >= 2) {
        std::string_view before =
            text.substr(tokens[k - 2].start, tokens[k - 2].end - tokens[k - 2].start);
        if (is_capitalized(before) && !ends_clause(before) &&
            !stopped(tokens[k - 2])) {
          k -= 1;
          continue;
        }
      }
      break;
    }
    if (capitalized == 0) continue;
    out.push_back({tokens[k].start, suf.end});
  }
  return out;
}

void emit(std::vector<Annotation>& out, AnnotationLabel label,
          const std::vector<Range>& ranges, std::string_view text) {
  for (const Range& r : select_longest(ranges)) {
    out.push_back({label, r.start, r.end,
                   std::string(text.substr(r.start, r.end - r.start))});
  }
}

std::vector<std::string> string_list(const Json& j, const std::string& key,
                                     bool required) {
  std::vector<std::string> out;
  if (!j.contains(key)) {
    if (required) throw SchemaError("$." + key, "missing field");
    return out;
  }
  const Json& arr = json_field::array(j, key, "$");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) {
      throw SchemaError("$." + key + "[" + std::to_string(i) + "]",
                        "expected a string");
    }
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

void dedupe(std::vector<std::string>& phrases) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const std::string& p : phrases) {
    std::string t = trim(p);
    if (t.empty()) continue;
    if (seen.insert(ascii_lower(t)).second) out.push_back(std::move(t));
  }
  phrases = std::move(out);
}

}  // namespace

std::string_view label_name(AnnotationLabel label) {
  return kLabelNames[static_cast<std::size_t>(label)];
}

std::optional<AnnotationLabel> label_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kLabelNames.size(); ++i) {
    if (kLabelNames[i] == name) return static_cast<AnnotationLabel>(i);
  }
  return std::nullopt;
}

void AnnotationSet::set(GroupKey key, std::vector<Annotation> anns) {
  if (anns.empty()) {
    groups_.erase(key);
  } else {
    groups_[key] = std::move(anns);
  }
}

std::span<const Annotation> AnnotationSet::for_group(GroupKey key) const {
  auto it = groups_.find(key);
  if (it == groups_.end()) return {};
  return it->second;
}

std::size_t AnnotationSet::total() const {
  std::size_t n = 0;
  for (const auto& [key, anns] : groups_) n += anns.size();
  return n;
}

void Gazetteer::normalize() {
  for (auto* list : {&roles, &address_types, &orgs, &org_suffixes, &gpe,
                     &persons, &facilities, &fac_suffixes}) {
    dedupe(*list);
  }
}

Gazetteer gazetteer_from_json_text(std::string_view json_text) {
  const Json j = parse_json_text(json_text, "gazetteer");
  if (!j.is_object()) throw SchemaError("$", "expected an object");
  Gazetteer g;
  g.roles = string_list(j, "roles", true);
  g.address_types = string_list(j, "address_types", true);
  g.orgs = string_list(j, "orgs", true);
  g.org_suffixes = string_list(j, "org_suffixes", true);
  g.gpe = string_list(j, "gpe", true);
  g.persons = string_list(j, "persons", false);
  g.facilities = string_list(j, "facilities", false);
  g.fac_suffixes = string_list(j, "fac_suffixes", false);
  g.normalize();
  return g;
}

std::string gazetteer_to_json_text(const Gazetteer& g) {
  Json j{{"roles", g.roles},         {"address_types", g.address_types},
         {"orgs", g.orgs},           {"org_suffixes", g.org_suffixes},
         {"gpe", g.gpe},             {"persons", g.persons},
         {"facilities", g.facilities}, {"fac_suffixes", g.fac_suffixes}};
  return j.dump(2);
}

const Gazetteer& default_gazetteer() {
  static const Gazetteer gaz = gazetteer_from_json_text(kDefaultGazetteerJson);
  return gaz;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i == text.size()) break;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    out.push_back({start, i});
  }
  return out;
}

GazetteerAnnotator::GazetteerAnnotator(Gazetteer gaz) : gaz_(std::move(gaz)) {
  gaz_.normalize();
}

std::vector<Annotation> GazetteerAnnotator::annotate_text(
    std::string_view text_view) const {
  const std::string text(text_view);
  const std::string lowered = ascii_lower(text);
  const std::vector<Token> tokens = tokenize(text);
  std::vector<Annotation> out;

  const std::vector<Range> roles = match_phrases(lowered, gaz_.roles);
  const std::vector<Range> address_types =
      match_phrases(lowered, gaz_.address_types);
  std::vector<Range> role_stops = roles;
  role_stops.insert(role_stops.end(), address_types.begin(), address_types.end());

  std::vector<Range> orgs = match_phrases(lowered, gaz_.orgs);
  for (const Range& r : match_suffixed_names(text, tokens, lowered,
                                             gaz_.org_suffixes, role_stops)) {
    orgs.push_back(r);
  }
  std::vector<Range> facs = match_phrases(lowered, gaz_.facilities);
  for (const Range& r : match_suffixed_names(text, tokens, lowered,
                                             gaz_.fac_suffixes, role_stops)) {
    facs.push_back(r);
  }

  emit(out, AnnotationLabel::kOrg, orgs, text);
  emit(out, AnnotationLabel::kPerson, match_phrases(lowered, gaz_.persons), text);
  emit(out, AnnotationLabel::kRole, roles, text);
  emit(out, AnnotationLabel::kAddressType, address_types, text);
  emit(out, AnnotationLabel::kGpe, match_phrases(lowered, gaz_.gpe), text);
  emit(out, AnnotationLabel::kPostcode, match_regex(text, postcode_re()), text);
  emit(out, AnnotationLabel::kCardinal, match_cardinals(text, tokens), text);
  emit(out, AnnotationLabel::kFac, facs, text);
  emit(out, AnnotationLabel::kCurrency, match_regex(text, currency_re()), text);
  emit(out, AnnotationLabel::kDate, match_regex(text, date_re()), text);
  emit(out, AnnotationLabel::kEmail, match_regex(text, email_re()), text);
  emit(out, AnnotationLabel::kPhone, match_phones(text), text);

  std::stable_sort(out.begin(), out.end(),
                   [](const Annotation& a, const Annotation& b) {
                     if (a.start != b.start) return a.start < b.start;
                     return a.label < b.label;
                   });
  return out;
}

AnnotationSet annotate(const VisualPage& page, const Annotator& annotator,
                       std::size_t page_index) {
  AnnotationSet set;
  for (std::size_t gi = 0; gi < page.groups.size(); ++gi) {
    set.set({page_index, gi}, annotator.annotate_text(group_text(page.groups[gi])));
  }
  return set;
}

AnnotationSet annotate(const VisualPage& page, const Gazetteer& gaz,
                       std::size_t page_index) {
  return annotate(page, GazetteerAnnotator(gaz), page_index);
}

bool is_address_candidate(std::span<const Annotation> anns) {
  bool gpe = false, postcode = false, cardinal = false;
  for (const Annotation& a : anns) {
    gpe |= a.label == AnnotationLabel::kGpe;
    postcode |= a.label == AnnotationLabel::kPostcode;
    cardinal |= a.label == AnnotationLabel::kCardinal;
  }
  return int(gpe) + int(postcode) + int(cardinal) >= 2;
}

bool is_address_candidate(const AnnotationSet& anns, GroupKey key) {
  return is_address_candidate(anns.for_group(key));
}

}  // namespace dirtree
