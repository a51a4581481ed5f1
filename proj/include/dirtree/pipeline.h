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

#ifndef DIRTREE_PIPELINE_H_
#define DIRTREE_PIPELINE_H_

// The three-stage directory pipeline over a whole document: page
// classification, header/body segmentation and reading-tree construction.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dirtree/annotator.h"
#include "dirtree/forest.h"
#include "dirtree/json_io.h"
#include "dirtree/segmenter.h"
#include "dirtree/tree_builder.h"
#include "dirtree/visual_model.h"

namespace dirtree {

struct PipelineConfig {
  std::optional<std::string> gazetteer_path;
  std::optional<std::string> model_path;
  TreeParams tree_params;
  double threshold = 0.5;
  std::optional<std::string> output_dir;

  // Checks that referenced files exist and the parameters are in range.
  void validate() const;
};

// Reads {"gazetteer","model","tree_params":{...},"threshold","output_dir"};
// every key is optional.
PipelineConfig config_from_json(const Json& j);

struct PageSelection {
  enum class Mode { kAuto, kAll, kList };
  Mode mode = Mode::kAuto;
  std::vector<std::size_t> pages;  // kList only, sorted and unique
};

// "auto", "all" or a comma-separated list of page indices and ranges
// ("0,2,5-7").
PageSelection parse_page_selection(std::string_view text);

struct PageClassification {
  std::size_t page = 0;
  Prediction prediction;
};

struct PageResult {
  std::size_t page = 0;
  std::vector<LabeledSpan> spans;
  ReadingTree tree;
  std::vector<DirectoryBlock> blocks;
};

// Runs `fn(i)` for i in [0, n) on up to `threads` workers (0 = hardware
// concurrency). Results keep input order.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, Fn fn, unsigned threads = 0);

class Pipeline {
 public:
  Pipeline(Gazetteer gaz, std::optional<ForestModel> model,
           TreeParams params = {}, double threshold = 0.5);

  std::vector<AnnotationSet> annotate(const std::vector<VisualPage>& doc) const;
  std::vector<FeatureVector> features(const std::vector<VisualPage>& doc) const;
  // Requires a model.
  std::vector<PageClassification> classify(const std::vector<VisualPage>& doc) const;
  // Page indices picked by `sel`; auto mode classifies the document.
  std::vector<std::size_t> select(const std::vector<VisualPage>& doc,
                                  const PageSelection& sel) const;

  std::vector<LabeledSpan> segment(const VisualPage& page,
                                   std::size_t page_index) const;
  ReadingTree tree(const std::vector<LabeledSpan>& spans) const;

  // segment -> build_tree -> directory_blocks on every selected page.
  std::vector<PageResult> run(const std::vector<VisualPage>& doc,
                              const PageSelection& sel) const;

  const Gazetteer& gazetteer() const { return annotator_.gazetteer(); }
  const std::optional<ForestModel>& model() const { return model_; }
  const TreeParams& tree_params() const { return params_; }

  unsigned threads = 0;

 private:
  GazetteerAnnotator annotator_;
  std::optional<ForestModel> model_;
  TreeParams params_;
  double threshold_;
};

Json classifications_to_json(const std::vector<PageClassification>& c);
Json segments_to_json(const std::vector<PageResult>& r);
Json trees_to_json(const std::vector<PageResult>& r);
Json page_blocks_to_json(const std::vector<PageResult>& r);

}  // namespace dirtree

#include "dirtree/pipeline_inl.h"

#endif  // DIRTREE_PIPELINE_H_
