// Copyright 2026 The pctl Authors
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

#ifndef PCTL_RNG_HPP_
#define PCTL_RNG_HPP_

#include <cstdint>

namespace pctl {

// SplitMix64 (Vigna's public-domain mixer).  Chosen over <random> engines
// because Monte-Carlo results here must be bitwise reproducible from a
// (seed, sample index) pair alone: every sample gets its own cheaply
// derived, statistically independent stream, so reordering or batching the
// samples can never change a single draw.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

namespace detail {

// SplitMix64 finalizer, used as a 64-bit hash.
inline std::uint64_t mix_bits(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

// The generator for sample `index` under `seed`: the stream start is a hash
// of both, so streams are decorrelated and any sample can be regenerated in
// isolation.
inline SplitMix64 sample_stream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(
      detail::mix_bits(seed + 0x9E3779B97F4A7C15ull * (index + 1)));
}

// Draw from a categorical distribution given as a probability row of length
// n, by CDF walk in index order.  The tail guard absorbs the case u ~ 1
// with a cumulative sum slightly below 1 from rounding.
inline int categorical(SplitMix64& rng, const double* p, int n) {
  const double u = rng.uniform();
  double cum = 0.0;
  for (int i = 0; i < n; ++i) {
    cum += p[i];
    if (u < cum) return i;
  }
  for (int i = n; i-- > 0;) {
    if (p[i] > 0.0) return i;
  }
  return n - 1;
}

}  // namespace pctl

#endif  // PCTL_RNG_HPP_
