// Copyright 2026 The tankfleet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

#include "tankfleet/types.hpp"

namespace tankfleet {

/// Weighted L2 projection onto non-decreasing sequences via pool-adjacent-
/// violators. Any adjacent strictly-decreasing pair belongs to one block of
/// the optimal fit, so pooling order does not matter; the stack sweep below
/// gives the unique projection. Pooled values are weighted means, so the
/// weighted mean of the whole sequence is conserved.
///
/// `values` and `weights` point at n doubles; weights must be positive.
/// Overwrites `values` in place.
inline void isotonic_non_decreasing_inplace(double* values, const double* weights,
                                            std::size_t n) {
  if (n <= 1) return;
  struct Block {
    double mean;
    double weight;
    std::size_t len;
  };
  // Fixed-size scratch for the common small-n case.
  Block stack_buf[16];
  std::vector<Block> heap_buf;
  Block* blocks = stack_buf;
  if (n > 16) {
    heap_buf.resize(n);
    blocks = heap_buf.data();
  }
  std::size_t top = 0;
  for (std::size_t i = 0; i < n; ++i) {
    blocks[top] = Block{values[i], weights[i], 1};
    ++top;
    while (top >= 2 && blocks[top - 2].mean > blocks[top - 1].mean) {
      const Block& hi = blocks[top - 1];
      Block& lo = blocks[top - 2];
      const double w = lo.weight + hi.weight;
      lo.mean = (lo.mean * lo.weight + hi.mean * hi.weight) / w;
      lo.weight = w;
      lo.len += hi.len;
      --top;
    }
  }
  std::size_t i = 0;
  for (std::size_t b = 0; b < top; ++b) {
    for (std::size_t j = 0; j < blocks[b].len; ++j) values[i++] = blocks[b].mean;
  }
}

/// Convenience wrapper over the in-place kernel.
inline ArrayXd isotonic_non_decreasing(const ArrayXd& values, const ArrayXd& weights) {
  ArrayXd out = values;
  isotonic_non_decreasing_inplace(out.data(), weights.data(), static_cast<std::size_t>(out.size()));
  return out;
}

}  // namespace tankfleet
