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

#ifndef XEBLAB_CIRCUIT_H
#define XEBLAB_CIRCUIT_H

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xeblab/rng.h"

namespace xeblab {

/// Computational basis string. Bit q holds the value of qubit q.
using Bitstring = uint64_t;

constexpr size_t kMaxCircuitQubits = 64;

/// Formats z as n characters, most significant qubit first.
std::string format_bitstring(Bitstring z, size_t n);
/// Inverse of format_bitstring. Throws std::invalid_argument on bad characters
/// or more than 64 digits.
Bitstring parse_bitstring(std::string_view text);

/// Row-major 2x2 complex matrix: {m00, m01, m10, m11}.
using Matrix2 = std::array<std::complex<double>, 4>;

enum class GateKind : uint8_t {
    kUnitary,
    kCZ,
    kX,
};

struct Gate {
    GateKind kind = GateKind::kX;
    uint32_t q0 = 0;
    /// Second qubit of a CZ; unused otherwise.
    uint32_t q1 = 0;
    /// Only meaningful for kUnitary.
    Matrix2 matrix{};

    static Gate unitary(uint32_t qubit, const Matrix2 &matrix);
    static Gate cz(uint32_t a, uint32_t b);
    static Gate x(uint32_t qubit);

    bool operator==(const Gate &other) const;
};

using Layer = std::vector<Gate>;

/// Max-entry norm of U^dagger U - I.
double unitarity_error(const Matrix2 &m);

/// An immutable layered circuit on n qubits.
///
/// Construction validates that every qubit index is < n, that no qubit is
/// touched twice within one layer, that CZ targets differ, and that every
/// single-qubit matrix is unitary to 1e-10. Trailing empty layers are dropped,
/// so a circuit has a single canonical form under the text format.
class Circuit {
   public:
    Circuit() = default;
    Circuit(size_t num_qubits, uint64_t seed, std::vector<Layer> layers = {});

    size_t num_qubits() const {
        return num_qubits_;
    }
    uint64_t seed() const {
        return seed_;
    }
    const std::vector<Layer> &layers() const {
        return layers_;
    }
    size_t num_layers() const {
        return layers_.size();
    }
    size_t gate_count() const;

    /// True when the last layer is nonempty and consists only of X gates.
    bool ends_with_not_mask() const;
    /// The X mask carried by the final layer, or 0 when there is none.
    Bitstring final_not_mask() const;

    bool operator==(const Circuit &other) const = default;

   private:
    size_t num_qubits_ = 0;
    uint64_t seed_ = 0;
    std::vector<Layer> layers_;
};

struct Topology {
    enum class Kind : uint8_t {
        kChain1D,
        kGrid2D,
    };
    Kind kind = Kind::kChain1D;
    size_t rows = 0;
    size_t cols = 0;

    static Topology chain() {
        return {};
    }
    static Topology grid(size_t rows, size_t cols) {
        return {Kind::kGrid2D, rows, cols};
    }
};

/// Random circuit ensemble: `depth` alternating layers of Haar single-qubit
/// unitaries (even layer indices) and CZ layers (odd layer indices), followed
/// by an optional uniformly random X mask.
struct CircuitDistribution {
    size_t num_qubits = 1;
    size_t depth = 0;
    Topology topology;
    bool final_not_mask_layer = true;

    /// Throws ConfigError if the topology does not match num_qubits.
    void validate() const;
};

/// Edge colouring used for CZ layers: two classes for a chain (even and odd
/// bonds) and four for a grid (horizontal even/odd, vertical even/odd).
std::vector<std::vector<std::pair<uint32_t, uint32_t>>> edge_classes(const CircuitDistribution &dist);

/// Haar-random 2x2 unitary from two complex Gaussian columns with Gram-Schmidt.
Matrix2 haar_unitary(Rng &rng);

/// Deterministic in (dist, seed). The circuit records seed as provenance.
Circuit sample_circuit(const CircuitDistribution &dist, uint64_t seed);

/// Appends X gates on the set bits of z. If the circuit already ends with an
/// X mask, the two masks are merged by XOR into a single final layer.
Circuit append_not_mask(const Circuit &circuit, Bitstring z);
/// Same, with z given as text (most significant qubit first). The length must equal n.
Circuit append_not_mask(const Circuit &circuit, std::string_view z);

std::string serialize_circuit(const Circuit &circuit);
/// Throws ParseError naming the line on malformed input.
Circuit parse_circuit(std::string_view text);

}  // namespace xeblab

#endif
