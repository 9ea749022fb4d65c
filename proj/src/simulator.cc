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

#include "xeblab/simulator.h"

#include <fmt/format.h>
#include <omp.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "xeblab/errors.h"
#include "xeblab/parallel.h"
#include "xeblab/stats.h"

namespace xeblab {

namespace {

// Below this many amplitudes the kernels run serially; thread start-up costs
// more than the sweep itself.
constexpr size_t kParallelAmplitudes = size_t{1} << 14;

constexpr double kNormTolerance = 1e-9;

int kernel_threads(size_t size) {
    if (size < kParallelAmplitudes || omp_in_parallel()) {
        return 1;
    }
    return static_cast<int>(thread_limit());
}

// Spreads index j over positions with a zero inserted at bit q.
inline size_t insert_zero(size_t j, uint32_t q) {
    size_t low = j & ((size_t{1} << q) - 1);
    return ((j >> q) << (q + 1)) | low;
}

}  // namespace

StateVector::StateVector(size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits >= 8 * sizeof(size_t) - 5) {
        throw ResourceError(fmt::format("{} qubits cannot be addressed", num_qubits));
    }
    amps_.assign(size_t{1} << num_qubits, 0.0);
    amps_[0] = 1.0;
}

void StateVector::apply_unitary(uint32_t q, const Matrix2 &m) {
    const size_t half = amps_.size() / 2;
    const size_t stride = size_t{1} << q;
    // Interleaved (re, im) view; spelled-out arithmetic avoids the NaN-recovery
    // path of std::complex multiplication.
    double *a = reinterpret_cast<double *>(amps_.data());
    const double ar = m[0].real(), ai = m[0].imag(), br = m[1].real(), bi = m[1].imag();
    const double cr = m[2].real(), ci = m[2].imag(), dr = m[3].real(), di = m[3].imag();
    // Pair (i, i | stride) for every i with bit q clear. Contiguous ranges of j
    // map to contiguous ranges of amplitudes, so each thread owns a chunk.
#pragma omp parallel for schedule(static) num_threads(kernel_threads(amps_.size()))
    for (size_t j = 0; j < half; j++) {
        size_t i0 = 2 * insert_zero(j, q);
        size_t i1 = i0 + 2 * stride;
        double x0 = a[i0], y0 = a[i0 + 1];
        double x1 = a[i1], y1 = a[i1 + 1];
        a[i0] = ar * x0 - ai * y0 + br * x1 - bi * y1;
        a[i0 + 1] = ar * y0 + ai * x0 + br * y1 + bi * x1;
        a[i1] = cr * x0 - ci * y0 + dr * x1 - di * y1;
        a[i1 + 1] = cr * y0 + ci * x0 + dr * y1 + di * x1;
    }
}

void StateVector::apply_cz(uint32_t qa, uint32_t qb) {
    const uint32_t lo = std::min(qa, qb);
    const uint32_t hi = std::max(qa, qb);
    const size_t quarter = amps_.size() / 4;
    const size_t both = (size_t{1} << lo) | (size_t{1} << hi);
    auto *a = amps_.data();
#pragma omp parallel for schedule(static) num_threads(kernel_threads(amps_.size()))
    for (size_t j = 0; j < quarter; j++) {
        size_t i = insert_zero(insert_zero(j, lo), hi) | both;
        a[i] = -a[i];
    }
}

void StateVector::apply_x(uint32_t q) {
    const size_t half = amps_.size() / 2;
    const size_t stride = size_t{1} << q;
    auto *a = amps_.data();
#pragma omp parallel for schedule(static) num_threads(kernel_threads(amps_.size()))
    for (size_t j = 0; j < half; j++) {
        size_t i0 = insert_zero(j, q);
        std::swap(a[i0], a[i0 | stride]);
    }
}

void StateVector::apply(const Gate &gate) {
    auto check = [&](uint32_t q) {
        if (q >= num_qubits_) {
            throw std::invalid_argument(fmt::format("gate on qubit {} of a {}-qubit state", q, num_qubits_));
        }
    };
    check(gate.q0);
    switch (gate.kind) {
        case GateKind::kUnitary:
            apply_unitary(gate.q0, gate.matrix);
            break;
        case GateKind::kCZ:
            check(gate.q1);
            apply_cz(gate.q0, gate.q1);
            break;
        case GateKind::kX:
            apply_x(gate.q0);
            break;
    }
}

void StateVector::apply(const Layer &layer) {
    for (const Gate &g : layer) {
        apply(g);
    }
}

double StateVector::norm_squared() const {
    CompensatedSum total;
    for (const auto &v : amps_) {
        total.add(std::norm(v));
    }
    return total.value();
}

void check_simulable(size_t num_qubits, const SimulatorOptions &options) {
    if (num_qubits > options.max_qubits) {
        double bytes = std::ldexp(16.0, static_cast<int>(std::min<size_t>(num_qubits, 1000)));
        throw ResourceError(fmt::format(
            "{} qubits exceeds the simulator cap of {} (state needs {:.0f} MiB; raise --max-qubits to override)",
            num_qubits, options.max_qubits, bytes / (1024.0 * 1024.0)));
    }
}

StateVector simulate(const Circuit &circuit, const SimulatorOptions &options) {
    check_simulable(circuit.num_qubits(), options);
    StateVector state(circuit.num_qubits());
    for (const Layer &layer : circuit.layers()) {
        state.apply(layer);
    }
    double norm = state.norm_squared();
    if (std::abs(norm - 1.0) > kNormTolerance) {
        throw std::logic_error(fmt::format("state norm drifted to {:.17g}", norm));
    }
    return state;
}

std::complex<double> amplitude(const Circuit &circuit, Bitstring z, const SimulatorOptions &options) {
    StateVector state = simulate(circuit, options);
    if (z >= state.size()) {
        throw std::invalid_argument("bitstring has bits beyond the qubit count");
    }
    return state.amplitude(z);
}

double output_probability(const Circuit &circuit, Bitstring z, const SimulatorOptions &options) {
    return std::norm(amplitude(circuit, z, options));
}

OutputDistribution distribution_of(const StateVector &state) {
    OutputDistribution out;
    out.num_qubits = state.num_qubits();
    out.probs.resize(state.size());
    auto amps = state.amplitudes();
    for (size_t i = 0; i < amps.size(); i++) {
        out.probs[i] = std::norm(amps[i]);
    }
    return out;
}

OutputDistribution full_distribution(const Circuit &circuit, const SimulatorOptions &options) {
    return distribution_of(simulate(circuit, options));
}

std::vector<char> encode_distribution(const OutputDistribution &dist) {
    static_assert(std::endian::native == std::endian::little, "binary export assumes a little-endian host");
    std::vector<char> bytes(8 + 8 * dist.probs.size());
    uint64_t n = dist.num_qubits;
    std::memcpy(bytes.data(), &n, 8);
    std::memcpy(bytes.data() + 8, dist.probs.data(), 8 * dist.probs.size());
    return bytes;
}

OutputDistribution decode_distribution(std::span<const char> bytes) {
    if (bytes.size() < 8) {
        throw std::invalid_argument("distribution file shorter than its header");
    }
    uint64_t n = 0;
    std::memcpy(&n, bytes.data(), 8);
    if (n > 40 || bytes.size() != 8 + 8 * (size_t{1} << n)) {
        throw std::invalid_argument("distribution file size does not match its header");
    }
    OutputDistribution out;
    out.num_qubits = n;
    out.probs.resize(size_t{1} << n);
    std::memcpy(out.probs.data(), bytes.data() + 8, 8 * out.probs.size());
    return out;
}

}  // namespace xeblab
