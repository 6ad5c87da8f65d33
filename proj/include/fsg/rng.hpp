// Copyright (c) the fsg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FSG_RNG_HPP_
#define FSG_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "fsg/hash.hpp"

namespace fsg {

// Seeded random stream. The engine (mt19937_64) has a standard-mandated
// output sequence; the distribution mappings are hand-rolled on top of it so
// that draws are bit-identical across standard library implementations.
//
// Streams are derived, never shared: every independent consumer forks its
// own stream via derive(). Forking uses the stream's seed, not its
// consumption state, so drawing from one stream never disturbs another.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : seed_(mix64(seed)), engine_(seed_) {}

  RngStream derive(std::string_view tag, uint64_t index = 0) const {
    RngStream s(0);
    s.seed_ = mix64(mix64(seed_, fnv1a64(tag)), index);
    s.engine_.seed(s.seed_);
    return s;
  }

  uint64_t seed() const { return seed_; }

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform over {0, ..., n-1} by rejection (no modulo bias).
  uint64_t uniform_int(uint64_t n) {
    if (n <= 1) return 0;
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  // Standard normal via Box-Muller (deterministic, portable).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline RngStream make_stream(uint64_t master_seed, std::string_view tag,
                             uint64_t index = 0) {
  return RngStream(master_seed).derive(tag, index);
}

}  // namespace fsg

#endif  // FSG_RNG_HPP_
