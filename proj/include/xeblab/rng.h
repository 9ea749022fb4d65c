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

#ifndef XEBLAB_RNG_H
#define XEBLAB_RNG_H

#include <complex>
#include <cstdint>
#include <limits>

namespace xeblab {

/// Mixes two words into a fresh 64-bit seed. Used to give every trial,
/// circuit and sampler its own independent stream.
uint64_t derive_seed(uint64_t seed, uint64_t index);

/// Counter-based generator: output i is a SplitMix64 finalizer applied to
/// key + (i + 1) * golden_gamma. Fully determined by (seed, stream) and the
/// number of values drawn, with no platform-dependent state.
///
/// Satisfies UniformRandomBitGenerator, but the project only uses its own
/// distribution helpers below so that draws are reproducible across standard
/// library implementations.
class Rng {
   public:
    using result_type = uint64_t;

    explicit Rng(uint64_t seed, uint64_t stream = 0);

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }
    result_type operator()() {
        return next_u64();
    }

    uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, bound). bound must be nonzero.
    uint64_t below(uint64_t bound);
    /// Standard normal via Box-Muller.
    double normal();
    /// Complex normal with independent standard-normal real and imaginary parts.
    std::complex<double> complex_normal();

   private:
    uint64_t key_;
    uint64_t counter_ = 0;
    double spare_normal_ = 0;
    bool has_spare_ = false;
};

}  // namespace xeblab

#endif
