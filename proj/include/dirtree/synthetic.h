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

#ifndef DIRTREE_SYNTHETIC_H_
#define DIRTREE_SYNTHETIC_H_

// Random generators for training data and fuzzing. All draws use
// std::mt19937_64 with integer reductions, so outputs are portable.

#include <cstdint>
#include <random>
#include <vector>

#include "dirtree/forest.h"
#include "dirtree/segmenter.h"
#include "dirtree/visual_model.h"

namespace dirtree::synth {

// Uniform double in [lo, hi).
double uniform(std::mt19937_64& rng, double lo, double hi);
// Uniform integer in [lo, hi].
long long uniform_int(std::mt19937_64& rng, long long lo, long long hi);

// Feature rows for directory and other pages whose counts of address,
// organization and role groups are separated by a clear margin.
Dataset margin_dataset(std::size_t n_pos, std::size_t n_neg, std::uint64_t seed);

// A page of 1-40 labeled spans with random boxes, styles and texts, each
// span covering a whole group of its own.
std::vector<LabeledSpan> random_span_page(std::mt19937_64& rng);

// A normalized page of 1-15 groups mixing gazetteer phrases, punctuation,
// non-ASCII text and random styles.
VisualPage random_visual_page(std::mt19937_64& rng);

}  // namespace dirtree::synth

#endif  // DIRTREE_SYNTHETIC_H_
