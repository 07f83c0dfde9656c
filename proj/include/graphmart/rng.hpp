// Copyright 2026 The graphmart Authors.
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
#include <random>
#include <string_view>
#include <vector>

namespace graphmart {

// Seed mixing and stream derivation. Substreams are keyed by a string tag
// (and optional integer lanes) so that independent draws (identifier
// assignment, prices, values) come from independent, reproducible streams:
//
//   substream(seed, tag, a, b) = splitmix64(splitmix64(seed ^ fnv1a64(tag)) + a*K1 + b*K2)
//
// The generator behind each stream is std::mt19937_64, whose output sequence
// is pinned by the C++ standard. Raw 64-bit draws are mapped to ranges and
// unit doubles below without std::*_distribution (whose mappings are
// implementation defined), so streams replay bit-identically everywhere.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag,
                                    std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t mixed = splitmix64(seed ^ fnv1a64(tag));
  return splitmix64(mixed + a * 0x9e3779b97f4a7c15ULL + b * 0xd1b54a32d192ed03ULL);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform integer in [0, n), unbiased via rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform double in [0, 1) with 53 random mantissa bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

inline Rng substream(std::uint64_t seed, std::string_view tag, std::uint64_t a = 0,
                     std::uint64_t b = 0) {
  return Rng(derive_seed(seed, tag, a, b));
}

}  // namespace graphmart
