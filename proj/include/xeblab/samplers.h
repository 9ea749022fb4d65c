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

#ifndef XEBLAB_SAMPLERS_H
#define XEBLAB_SAMPLERS_H

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "xeblab/circuit.h"
#include "xeblab/simulator.h"

namespace xeblab {

/// k bitstrings over n qubits. `distinct` records whether the producer
/// enforced pairwise distinctness.
struct SampleSet {
    size_t num_qubits = 0;
    std::vector<Bitstring> samples;
    bool distinct = false;

    size_t k() const {
        return samples.size();
    }
    /// Checks the strings themselves, independent of the flag.
    bool all_distinct() const;

    bool operator==(const SampleSet &other) const = default;
};

/// Depolarizing mixture: a sample is ideal with probability `fidelity`,
/// uniform otherwise.
class NoiseModel {
   public:
    /// Throws std::invalid_argument outside [0, 1].
    explicit NoiseModel(double fidelity);
    double fidelity() const {
        return fidelity_;
    }

   private:
    double fidelity_;
};

// Duplicates are rejected and redrawn. When rejection stalls (k close to the
// support size) the remaining draws come from the same law restricted to the
// unused strings, which is what rejection converges to.

SampleSet sample_ideal(const OutputDistribution &dist, size_t k, uint64_t seed, bool distinct);
SampleSet sample_ideal(const Circuit &circuit, size_t k, uint64_t seed, bool distinct,
                       const SimulatorOptions &options = {});

SampleSet sample_uniform(size_t num_qubits, size_t k, uint64_t seed, bool distinct);

/// With fidelity 1 this reproduces sample_ideal and with fidelity 0 it
/// reproduces sample_uniform for the same seed.
SampleSet sample_depolarizing(const OutputDistribution &dist, NoiseModel noise, size_t k, uint64_t seed,
                              bool distinct);
SampleSet sample_depolarizing(const Circuit &circuit, NoiseModel noise, size_t k, uint64_t seed, bool distinct,
                              const SimulatorOptions &options = {});

/// The k most likely strings, ties broken by ascending index.
SampleSet sample_top_k(const OutputDistribution &dist, size_t k);
SampleSet sample_top_k(const Circuit &circuit, size_t k, const SimulatorOptions &options = {});

/// `n <n> k <k> distinct <0|1>` then one bitstring per line, most significant qubit first.
std::string serialize_sample_set(const SampleSet &set);
SampleSet parse_sample_set(std::string_view text);

}  // namespace xeblab

#endif
