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

#include "dirtree/cli.h"

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dirtree/annotator.h"
#include "dirtree/errors.h"
#include "dirtree/forest.h"
#include "dirtree/json_io.h"
#include "dirtree/metrics.h"
#include "dirtree/page_features.h"
#include "dirtree/pipeline.h"
#include "dirtree/segmenter.h"
#include "dirtree/tree_builder.h"
#include "dirtree/visual_model.h"

namespace dirtree::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string doc;
  std::string gazetteer;
  std::string model;
  std::string out;
  std::string csv;
  std::string pages = "auto";
  std::string spans;
  std::string tree;
  std::string pred;
  std::string gold;
  std::string stage;
  std::string directory_pages;
  std::optional<double> threshold;
  bool json_only = false;
  unsigned threads = 0;

  // train
  std::size_t pos = 0;
  std::size_t neg = 0;
  std::uint64_t seed = 0;
  ForestHyperparams hp;
  int depth = 0;
};

PipelineConfig load_config(const Options& o) {
  PipelineConfig c;
  if (const char* env = std::getenv("DIRTREE_CONFIG"); env && *env) {
    c = config_from_json(parse_json_text(read_file(env), env));
  }
  if (!o.gazetteer.empty()) c.gazetteer_path = o.gazetteer;
  if (!o.model.empty()) c.model_path = o.model;
  if (o.threshold) c.threshold = *o.threshold;
  c.validate();
  return c;
}

std::string resolve_out(const PipelineConfig& c, const std::string& out) {
  if (out.empty() || !c.output_dir || fs::path(out).is_absolute()) return out;
  return (fs::path(*c.output_dir) / out).string();
}

void emit(const PipelineConfig& c, const std::string& out_path, const std::string& text,
          std::ostream& out) {
  const std::string path = resolve_out(c, out_path);
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Gazetteer load_gazetteer(const PipelineConfig& c) {
  if (!c.gazetteer_path) return default_gazetteer();
  return gazetteer_from_json_text(read_file(*c.gazetteer_path));
}

std::optional<ForestModel> load_model(const PipelineConfig& c) {
  if (!c.model_path) return std::nullopt;
  return model_from_json_text(read_file(*c.model_path));
}

Pipeline make_pipeline(const PipelineConfig& c, unsigned threads) {
  Pipeline p(load_gazetteer(c), load_model(c), c.tree_params, c.threshold);
  p.threads = threads;
  return p;
}

std::vector<VisualPage> load_document(const std::string& path) {
  return parse_document(read_file(path));
}

Json load_json(const std::string& path) { return parse_json_text(read_file(path), path); }

// ---- subcommands ---------------------------------------------------------

int cmd_validate(const Options& o, std::ostream& out) {
  const auto doc = load_document(o.doc);
  std::size_t groups = 0;
  for (const auto& p : doc) groups += p.groups.size();
  out << "ok: " << doc.size() << " pages, " << groups << " groups\n";
  return kExitOk;
}

int cmd_annotate(const Options& o, std::ostream& out) {
  const PipelineConfig c = load_config(o);
  const auto doc = load_document(o.doc);
  const auto anns = make_pipeline(c, o.threads).annotate(doc);
  Json pages = Json::array();
  for (std::size_t i = 0; i < anns.size(); ++i) {
    Json groups = Json::array();
    for (const auto& [key, list] : anns[i].groups()) {
      Json items = Json::array();
      for (const Annotation& a : list) {
        items.push_back(Json{{"label", label_name(a.label)},
                             {"start", a.start},
                             {"end", a.end},
                             {"text", a.surface}});
      }
      groups.push_back(Json{{"group", key.group}, {"annotations", items}});
    }
    pages.push_back(Json{{"page", i}, {"groups", groups}});
  }
  emit(c, o.out, dump(Json{{"pages", pages}}), out);
  return kExitOk;
}

int cmd_features(const Options& o, std::ostream& out) {
  const PipelineConfig c = load_config(o);
  const auto doc = load_document(o.doc);
  const auto feats = make_pipeline(c, o.threads).features(doc);
  std::vector<bool> positive(doc.size(), false);
  if (!o.directory_pages.empty()) {
    const PageSelection sel = parse_page_selection(o.directory_pages);
    if (sel.mode != PageSelection::Mode::kList) {
      throw InputError("--directory-pages expects a page list");
    }
    for (std::size_t p : sel.pages) {
      if (p >= doc.size()) throw InputError("page " + std::to_string(p) + " out of range");
      positive[p] = true;
    }
  }
  Json pages = Json::array();
  std::vector<FeatureRow> rows;
  for (std::size_t i = 0; i < feats.size(); ++i) {
    Json f = Json::object();
    for (std::size_t k = 0; k < kNumFeatures; ++k) {
      f[std::string(feature_names()[k])] = feats[i][k];
    }
    pages.push_back(Json{{"page", i}, {"features", f}});
    rows.push_back({feats[i], positive[i]});
  }
  if (!o.csv.empty()) write_file(resolve_out(c, o.csv), features_to_csv(rows));
  emit(c, o.out, dump(Json{{"pages", pages}}), out);
  return kExitOk;
}

int cmd_train(Options o, std::ostream& out) {
  const PipelineConfig c = load_config(o);
  const Dataset d = features_from_csv(read_file(o.csv));
  if (o.depth > 0) o.hp.max_depth = o.depth;
  o.hp.seed = o.seed;
  o.hp.validate();
  const Dataset sample = resample(d, o.pos, o.neg, o.seed);
  const ForestModel m = train(sample, o.hp, o.threads);
  emit(c, o.out, model_to_json_text(m), out);
  return kExitOk;
}

int cmd_classify(const Options& o, std::ostream& out) {
  const PipelineConfig c = load_config(o);
  if (!c.model_path) throw InputError("classify needs --model");
  const auto doc = load_document(o.doc);
  const auto cls = make_pipeline(c, o.threads).classify(doc);
  emit(c, o.out, dump(classifications_to_json(cls)), out);
  return kExitOk;
}

int cmd_segment(const Options& o, std::ostream& out) {
  const PipelineConfig c = load_config(o);
  const auto doc = load_document(o.doc);
  const Pipeline p = make_pipeline(c, o.threads);
  const auto pages = p.select(doc, parse_page_selection(o.pages));
  std::vector<PageResult> results;
  for (std::size_t page : pages) {
    PageResult r;
    r.page = page;
    r.spans = p.segment(doc[page], page);
    results.push_back(std::move(r));
  }
  emit(c, o.out, dump(segments_to_json(results)), out);
  return kExitOk;
}

// Spans per page from a `segment` output file.
std::vector<PageResult> spans_from_file(const std::string& path,
                                        const std::vector<VisualPage>& doc) {
  const Json j = load_json(path);
  const Json& pages = json_field::array(j, "pages", "$");
  std::vector<PageResult> out;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    const std::string p = "$.pages[" + std::to_string(i) + "]";
    const long long page = json_field::integer(pages[i], "page", p);
    if (page < 0 || page >= static_cast<long long>(doc.size())) {
      throw SchemaError(p + ".page", "page index out of range");
    }
    PageResult r;
    r.page = static_cast<std::size_t>(page);
    r.spans = spans_from_json(pages[i], doc[r.page], r.page);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<PageResult> trees_from_file(const std::string& path) {
  const Json j = load_json(path);
  const Json& pages = json_field::array(j, "pages", "$");
  std::vector<PageResult> out;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    const std::string p = "$.pages[" + std::to_string(i) + "]";
    const long long page = json_field::integer(pages[i], "page", p);
    if (page < 0) throw SchemaError(p + ".page", "negative page index");
    PageResult r;
    r.page = static_cast<std::size_t>(page);
    try {
      r.tree = tree_from_json(pages[i]);
    } catch (const SchemaError& e) {
      throw SchemaError(p + e.path().substr(1), e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

int cmd_tree(const Options& o, std::ostream& out) {
  const PipelineConfig c = load_config(o);
  const auto doc = load_document(o.doc);
  const Pipeline p = make_pipeline(c, o.threads);
  std::vector<PageResult> results;
  if (!o.spans.empty()) {
    results = spans_from_file(o.spans, doc);
    for (PageResult& r : results) r.tree = p.tree(r.spans);
  } else {
    results = p.run(doc, parse_page_selection(o.pages));
  }
  emit(c, o.out, dump(trees_to_json(results)), out);
  return kExitOk;
}

int cmd_blocks(const Options& o, std::ostream& out) {
  const PipelineConfig c = load_config(o);
  std::vector<PageResult> results;
  if (!o.tree.empty()) {
    results = trees_from_file(o.tree);
    for (PageResult& r : results) r.blocks = directory_blocks(r.tree);
  } else {
    if (o.doc.empty()) throw InputError("blocks needs a document or --tree");
    const auto doc = load_document(o.doc);
    results = make_pipeline(c, o.threads).run(doc, parse_page_selection(o.pages));
  }
  emit(c, o.out, dump(page_blocks_to_json(results)), out);
  return kExitOk;
}

// ---- eval ----------------------------------------------------------------

std::string fmt(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << v;
  return s.str();
}

void table_row(std::ostream& out, const std::string& name, const PRF& p) {
  out << std::left << std::setw(22) << name << std::right << std::setw(8) << fmt(p.precision)
      << std::setw(8) << fmt(p.recall) << std::setw(8) << fmt(p.f1) << std::setw(7) << p.tp
      << std::setw(7) << p.fp << std::setw(7) << p.fn << "\n";
}

void table_header(std::ostream& out) {
  out << std::left << std::setw(22) << "" << std::right << std::setw(8) << "P" << std::setw(8)
      << "R" << std::setw(8) << "F1" << std::setw(7) << "tp" << std::setw(7) << "fp"
      << std::setw(7) << "fn" << "\n";
}

std::map<std::size_t, const GoldPage*> gold_by_page(const std::vector<GoldPage>& gold) {
  std::map<std::size_t, const GoldPage*> m;
  for (const GoldPage& g : gold) {
    if (!m.emplace(g.page, &g).second) {
      throw SchemaError("$.pages", "duplicate gold page " + std::to_string(g.page));
    }
  }
  return m;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const PipelineConfig c = load_config(o);
  const std::vector<GoldPage> gold = gold_from_json(load_json(o.gold));
  const auto gold_pages = gold_by_page(gold);
  const Json pred = load_json(o.pred);
  Json report{{"stage", o.stage}};
  std::ostringstream table;

  if (o.stage == "classifier") {
    std::map<std::size_t, bool> preds, golds;
    const Json& pages = json_field::array(pred, "pages", "$");
    for (std::size_t i = 0; i < pages.size(); ++i) {
      const std::string p = "$.pages[" + std::to_string(i) + "]";
      const long long page = json_field::integer(pages[i], "page", p);
      const std::string label = json_field::string(pages[i], "label", p);
      if (page < 0) throw SchemaError(p + ".page", "negative page index");
      if (label != "directory" && label != "other") {
        throw SchemaError(p + ".label", "expected directory or other");
      }
      preds[static_cast<std::size_t>(page)] = label == "directory";
    }
    for (const auto& [page, g] : gold_pages) golds[page] = g->is_directory;
    const PRF prf = eval_classifier(preds, golds);
    report["overall"] = prf_to_json(prf);
    table_header(table);
    table_row(table, "directory pages", prf);
  } else if (o.stage == "segmentation") {
    std::map<std::size_t, std::vector<SpanItem>> preds, golds;
    const Json& pages = json_field::array(pred, "pages", "$");
    for (std::size_t i = 0; i < pages.size(); ++i) {
      const std::string p = "$.pages[" + std::to_string(i) + "]";
      const long long page = json_field::integer(pages[i], "page", p);
      if (page < 0) throw SchemaError(p + ".page", "negative page index");
      auto& items = preds[static_cast<std::size_t>(page)];
      const Json& spans = json_field::array(pages[i], "spans", p);
      for (std::size_t k = 0; k < spans.size(); ++k) {
        const std::string sp = p + ".spans[" + std::to_string(k) + "]";
        const auto label = span_label_from_name(json_field::string(spans[k], "label", sp));
        if (!label) throw SchemaError(sp + ".label", "unknown label");
        const long long g = json_field::integer(spans[k], "group", sp);
        const long long s = json_field::integer(spans[k], "start", sp);
        const long long e = json_field::integer(spans[k], "end", sp);
        if (g < 0 || s < 0 || e < s) throw SchemaError(sp, "bad span range");
        items.push_back({static_cast<std::size_t>(g), static_cast<std::size_t>(s),
                         static_cast<std::size_t>(e), *label});
      }
    }
    for (const auto& [page, g] : gold_pages) {
      if (!g->is_directory) continue;
      auto& items = golds[page];
      for (const GoldSpan& s : g->spans) items.push_back({s.group, s.start, s.end, s.label});
    }
    // A page present on one side only scores as an empty page on the other.
    for (const auto& [page, _] : golds) preds[page];
    for (const auto& [page, _] : preds) golds[page];
    const SegmentationReport r = eval_segmentation(preds, golds);
    report["overall"] = prf_to_json(r.overall);
    report["per_page"] = Json::array();
    table_header(table);
    table_row(table, "spans (all pages)", r.overall);
    for (const auto& [page, prf] : r.per_page) {
      report["per_page"].push_back(Json{{"page", page}, {"spans", prf_to_json(prf)}});
      table_row(table, "  page " + std::to_string(page), prf);
    }
  } else if (o.stage == "tree") {
    std::optional<std::vector<VisualPage>> doc;
    if (!o.doc.empty()) doc = load_document(o.doc);
    std::map<std::size_t, ReadingTree> preds, golds;
    for (PageResult& r : trees_from_file(o.pred)) preds[r.page] = std::move(r.tree);
    for (const auto& [page, g] : gold_pages) {
      if (!g->is_directory) continue;
      const VisualPage* vp = nullptr;
      if (doc) {
        if (page >= doc->size()) throw InputError("gold page out of range of --doc");
        vp = &(*doc)[page];
      }
      golds[page] = gold_tree(*g, vp);
    }
    ReadingTree empty;
    empty.nodes.emplace_back();
    empty.nodes[0].kind = NodeKind::kRoot;
    for (const auto& [page, _] : golds) preds.try_emplace(page, empty);
    for (const auto& [page, _] : preds) golds.try_emplace(page, empty);
    const TreeReport r = eval_trees(preds, golds);
    auto scores_json = [](const TreeScores& s) {
      return Json{{"directory_block", prf_to_json(s.dir_block)},
                  {"body_parent", prf_to_json(s.body_parent)},
                  {"block_nodes", prf_to_json(s.block_nodes)}};
    };
    report["overall"] = scores_json(r.overall);
    report["per_page"] = Json::array();
    table_header(table);
    table_row(table, "directory block", r.overall.dir_block);
    table_row(table, "body-parent", r.overall.body_parent);
    table_row(table, "block nodes", r.overall.block_nodes);
    for (const auto& [page, s] : r.per_page) {
      Json pj = scores_json(s);
      pj["page"] = page;
      report["per_page"].push_back(std::move(pj));
      table_row(table, "  page " + std::to_string(page) + " block", s.dir_block);
    }
  } else {
    throw InputError("unknown --stage '" + o.stage + "'");
  }

  if (!o.out.empty()) write_file(resolve_out(c, o.out), dump(report));
  if (o.json_only) {
    out << dump(report);
  } else {
    out << table.str();
  }
  return kExitOk;
}

void add_common(CLI::App* sub, Options& o, bool with_model) {
  sub->add_option("--gazetteer", o.gazetteer, "Gazetteer JSON (default: built in)");
  if (with_model) sub->add_option("--model", o.model, "Forest model JSON");
  sub->add_option("--out", o.out, "Output file (default: stdout)");
  sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Directory page parsing: classify, segment, build reading trees."};
  app.name("dirtree");
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "Check a visual JSON document");
  validate->add_option("doc", o.doc, "Visual JSON document")->required();

  auto* annotate = app.add_subcommand("annotate", "List entity annotations per group");
  annotate->add_option("doc", o.doc)->required();
  add_common(annotate, o, false);

  auto* features = app.add_subcommand("features", "Extract page features");
  features->add_option("doc", o.doc)->required();
  features->add_option("--csv", o.csv, "Also write a training CSV");
  features->add_option("--directory-pages", o.directory_pages,
                       "Pages labeled as directory pages in the CSV");
  add_common(features, o, false);

  auto* trainc = app.add_subcommand("train", "Train the page classifier");
  trainc->add_option("--csv", o.csv, "Training CSV")->required();
  trainc->add_option("--pos", o.pos, "Directory rows after resampling")->required();
  trainc->add_option("--neg", o.neg, "Other rows after resampling")->required();
  trainc->add_option("--seed", o.seed, "Random seed")->required();
  trainc->add_option("--trees", o.hp.n_trees, "Number of trees");
  trainc->add_option("--depth", o.depth, "Maximum depth (0 = unlimited)");
  trainc->add_option("--max-features", o.hp.max_features_fraction,
                     "Fraction of features tried per split");
  trainc->add_option("--min-leaf", o.hp.min_samples_leaf, "Minimum samples per leaf");
  trainc->add_option("--out", o.out, "Model output file (default: stdout)");
  trainc->add_option("--threads", o.threads, "Worker threads (0 = all cores)");

  auto* classify = app.add_subcommand("classify", "Score pages as directory pages");
  classify->add_option("doc", o.doc)->required();
  classify->add_option("--threshold", o.threshold, "Decision threshold");
  add_common(classify, o, true);

  auto* segment = app.add_subcommand("segment", "Label Header/Body/Neither spans");
  segment->add_option("doc", o.doc)->required();
  segment->add_option("--pages", o.pages, "auto, all or a page list such as 0,3-5");
  segment->add_option("--threshold", o.threshold, "Decision threshold");
  add_common(segment, o, true);

  auto* tree = app.add_subcommand("tree", "Build reading trees");
  tree->add_option("doc", o.doc)->required();
  tree->add_option("--spans", o.spans, "Use spans from a segment output file");
  tree->add_option("--pages", o.pages, "auto, all or a page list");
  tree->add_option("--threshold", o.threshold, "Decision threshold");
  add_common(tree, o, true);

  auto* blocks = app.add_subcommand("blocks", "Emit directory blocks end to end");
  blocks->add_option("doc", o.doc);
  blocks->add_option("--tree", o.tree, "Use trees from a tree output file");
  blocks->add_option("--pages", o.pages, "auto, all or a page list");
  blocks->add_option("--threshold", o.threshold, "Decision threshold");
  add_common(blocks, o, true);

  auto* eval = app.add_subcommand("eval", "Score predictions against gold");
  eval->add_option("--pred", o.pred, "Prediction JSON")->required();
  eval->add_option("--gold", o.gold, "Gold JSON")->required();
  eval->add_option("--stage", o.stage, "classifier, segmentation or tree")
      ->required()
      ->check(CLI::IsMember({"classifier", "segmentation", "tree"}));
  eval->add_option("--doc", o.doc, "Document supplying gold span texts");
  eval->add_option("--out", o.out, "Write the JSON report here");
  eval->add_flag("--json", o.json_only, "Print the JSON report instead of the table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    for (auto* sub : app.get_subcommands()) {
      out << sub->help();
      return kExitOk;
    }
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInputError;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, out);
    if (annotate->parsed()) return cmd_annotate(o, out);
    if (features->parsed()) return cmd_features(o, out);
    if (trainc->parsed()) return cmd_train(o, out);
    if (classify->parsed()) return cmd_classify(o, out);
    if (segment->parsed()) return cmd_segment(o, out);
    if (tree->parsed()) return cmd_tree(o, out);
    if (blocks->parsed()) return cmd_blocks(o, out);
    if (eval->parsed()) return cmd_eval(o, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
  err << app.help();
  return kExitInputError;
}

}  // namespace dirtree::cli
