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

#ifndef DIRTREE_PIPELINE_INL_H_
#define DIRTREE_PIPELINE_INL_H_

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace dirtree {

template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, Fn fn, unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::optional<T>> slots(n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) slots[i].emplace(fn(i));
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::size_t error_index = n;
    std::mutex mu;
    {
      std::vector<std::jthread> workers;
      for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&] {
          for (std::size_t i = next++; i < n; i = next++) {
            try {
              slots[i].emplace(fn(i));
            } catch (...) {
              std::lock_guard lock(mu);
              // Report the first failing input, as a serial run would.
              if (i < error_index) {
                error_index = i;
                error = std::current_exception();
              }
            }
          }
        });
      }
    }
    if (error) std::rethrow_exception(error);
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace dirtree

#endif  // DIRTREE_PIPELINE_INL_H_
