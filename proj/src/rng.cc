// Copyright 2026 The xeblab Authors
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

#include "xeblab/rng.h"

#include <cmath>
#include <numbers>

namespace xeblab {

namespace {

constexpr uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

uint64_t derive_seed(uint64_t seed, uint64_t index) {
    return mix64(mix64(seed + kGoldenGamma) ^ mix64(index * kGoldenGamma + 0x632BE59BD9B4E019ULL));
}

Rng::Rng(uint64_t seed, uint64_t stream) : key_(derive_seed(seed, stream)) {
}

uint64_t Rng::next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * kGoldenGamma);
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t Rng::below(uint64_t bound) {
    // Rejection on the top of the range keeps the result exactly uniform.
    uint64_t limit = max() - max() % bound;
    while (true) {
        uint64_t r = next_u64();
        if (r < limit) {
            return r % bound;
        }
    }
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_normal_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::complex<double> Rng::complex_normal() {
    double re = normal();
    double im = normal();
    return {re, im};
}

}  // namespace xeblab
