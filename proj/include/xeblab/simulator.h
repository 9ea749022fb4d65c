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

#ifndef XEBLAB_SIMULATOR_H
#define XEBLAB_SIMULATOR_H

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "xeblab/circuit.h"

namespace xeblab {

struct SimulatorOptions {
    /// Circuits wider than this are rejected with a ResourceError.
    size_t max_qubits = 22;
};

/// Dense state over n qubits. Index i is the basis state |i> with qubit 0 as
/// the least significant bit.
class StateVector {
   public:
    /// |0...0> on n qubits.
    explicit StateVector(size_t num_qubits);

    size_t num_qubits() const {
        return num_qubits_;
    }
    size_t size() const {
        return amps_.size();
    }
    std::span<const std::complex<double>> amplitudes() const {
        return amps_;
    }
    std::complex<double> amplitude(Bitstring z) const {
        return amps_[z];
    }

    void apply(const Gate &gate);
    void apply(const Layer &layer);
    /// Sum of squared magnitudes.
    double norm_squared() const;

   private:
    void apply_unitary(uint32_t q, const Matrix2 &m);
    void apply_cz(uint32_t a, uint32_t b);
    void apply_x(uint32_t q);

    size_t num_qubits_;
    std::vector<std::complex<double>> amps_;
};

/// Ideal output distribution P(z) = |<z|C|0^n>|^2.
struct OutputDistribution {
    size_t num_qubits = 0;
    std::vector<double> probs;

    double probability(Bitstring z) const {
        return probs[z];
    }
};

/// Throws ResourceError if n exceeds the cap; the message states the memory required.
void check_simulable(size_t num_qubits, const SimulatorOptions &options = {});

StateVector simulate(const Circuit &circuit, const SimulatorOptions &options = {});
std::complex<double> amplitude(const Circuit &circuit, Bitstring z, const SimulatorOptions &options = {});
/// |<z|C|0^n>|^2. With z = 0 this is p_0.
double output_probability(const Circuit &circuit, Bitstring z, const SimulatorOptions &options = {});
OutputDistribution full_distribution(const Circuit &circuit, const SimulatorOptions &options = {});
OutputDistribution distribution_of(const StateVector &state);

/// Little-endian binary export: u64 n, then 2^n doubles.
std::vector<char> encode_distribution(const OutputDistribution &dist);
OutputDistribution decode_distribution(std::span<const char> bytes);

}  // namespace xeblab

#endif
