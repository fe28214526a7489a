// Copyright 2026 The qsteer Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qsteer::detail {

// SplitMix64 finalizer; used to decorrelate per-trajectory substreams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull));
}

// Standard-normal generator over mt19937_64 with an explicit Box-Muller
// transform, so draws do not depend on the standard library's
// normal_distribution implementation.
class NormalRng {
 public:
  explicit NormalRng(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (have_) {
      have_ = false;
      return cached_;
    }
    double u1;
    do {
      u1 = to_unit(gen_());
    } while (u1 <= 0.0);
    const double u2 = to_unit(gen_());
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * kPi * u2;
    cached_ = rad * std::sin(ang);
    have_ = true;
    return rad * std::cos(ang);
  }

 private:
  static constexpr double kPi = 3.141592653589793238462643383279;
  static double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

  std::mt19937_64 gen_;
  double cached_ = 0.0;
  bool have_ = false;
};

}  // namespace qsteer::detail
