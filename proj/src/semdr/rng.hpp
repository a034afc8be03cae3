// Copyright 2026 The SEMDR Authors.
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

#include <cstdint>
#include <span>
#include <vector>

namespace semdr {

// splitmix64 step. Used both as a standalone mixer for deriving sub-seeds and
// to expand a 64-bit seed into xoshiro256** state.
uint64_t splitmix64(uint64_t& state);

// Deterministically combines a seed with a stream tag, so independent random
// streams (split shuffle, dropout masks, negative sampling, parameter init)
// never share state.
uint64_t derive_seed(uint64_t seed, uint64_t tag);
uint64_t derive_seed(uint64_t seed, uint64_t tag, uint64_t a, uint64_t b = 0);

// xoshiro256** 1.0 (Blackman & Vigna), seeded by four splitmix64 outputs.
// Every draw below is defined in terms of next(), so sequences are
// reproducible by any implementation of the same two generators.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next();

  // Uniform integer in [0, bound) by rejection on the top of the range.
  uint64_t uniform(uint64_t bound);

  // Uniform double in [0, 1) from the top 53 bits.
  double uniform_real();

  // Uniform double in [lo, hi).
  double uniform_real(double lo, double hi);

  // Fisher-Yates: for i = n-1 down to 1, swap(i, uniform(i + 1)).
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  uint64_t s_[4];
};

}  // namespace semdr
