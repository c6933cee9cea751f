// Copyright 2026 The AIC Toolkit Authors.
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

#ifndef AIC_COMMON_RANDOM_H_
#define AIC_COMMON_RANDOM_H_

#include <cstdint>
#include <random>

#include "absl/strings/string_view.h"

namespace aic {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to derive independent child seeds.
inline uint64_t MixSeed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t DeriveSeed(uint64_t root, uint64_t index) {
  return MixSeed(root ^ MixSeed(index + 1));
}

inline uint64_t DeriveSeed(uint64_t root, absl::string_view tag) {
  // FNV-1a over the tag.
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return DeriveSeed(root, h);
}

}  // namespace aic

#endif  // AIC_COMMON_RANDOM_H_
