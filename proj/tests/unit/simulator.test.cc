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

#include <gtest/gtest.h>

#include <numbers>

#include "dense_oracle.h"
#include "test_circuits.h"
#include "xeblab/errors.h"
#include "xeblab/parallel.h"

using namespace xeblab;

namespace {

CircuitDistribution chain(size_t n, size_t depth, bool mask = true) {
    CircuitDistribution d;
    d.num_qubits = n;
    d.depth = depth;
    d.final_not_mask_layer = mask;
    return d;
}

const Matrix2 kHadamard{std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2,
                        -std::numbers::sqrt2 / 2};

}  // namespace

TEST(simulator, matches_dense_oracle) {
    Rng rng(7);
    for (int i = 0; i < 200; i++) {
        auto d = test_support::random_distribution(rng, 2, 4, 12);
        Circuit c = sample_circuit(d, rng.next_u64());
        auto expected = oracle::oracle_state(c);
        StateVector state = simulate(c);
        auto got = state.amplitudes();
        ASSERT_LE(test_support::max_abs_diff(got, expected), 1e-10) << serialize_circuit(c);
    }
}

TEST(simulator, matches_exhaustive_path_sum) {
    Rng rng(8);
    for (int i = 0; i < 30; i++) {
        Circuit c = sample_circuit(chain(2 + i % 2, 1 + rng.below(5)), rng.next_u64());
        EXPECT_LE(std::abs(simulate(c).amplitude(0) - oracle::exhaustive_path_sum(c)), 1e-12);
    }
}

TEST(simulator, identity_circuit_outputs_zero_string) {
    for (size_t n : {1, 5, 10}) {
        auto dist = full_distribution(Circuit(n, 0));
        EXPECT_EQ(dist.probability(0), 1.0);
        EXPECT_EQ(output_probability(Circuit(n, 0), 0), 1.0);
    }
}

TEST(simulator, single_x_flips_one_bit) {
    Circuit c(4, 0, {{Gate::x(2)}});
    auto dist = full_distribution(c);
    EXPECT_EQ(dist.probability(0b0100), 1.0);
    EXPECT_EQ(output_probability(c, 0), 0.0);
}

TEST(simulator, hadamard_layer_gives_uniform_distribution) {
    const size_t n = 6;
    Layer layer;
    for (uint32_t q = 0; q < n; q++) {
        layer.push_back(Gate::unitary(q, kHadamard));
    }
    auto dist = full_distribution(Circuit(n, 0, {layer}));
    for (double p : dist.probs) {
        EXPECT_NEAR(p, 1.0 / 64, 1e-15);
    }
}

TEST(simulator, cz_applies_phase_only_to_one_one) {
    Layer h{Gate::unitary(0, kHadamard), Gate::unitary(1, kHadamard)};
    auto state = simulate(Circuit(2, 0, {h, {Gate::cz(0, 1)}}));
    EXPECT_NEAR(state.amplitude(0b00).real(), 0.5, 1e-15);
    EXPECT_NEAR(state.amplitude(0b01).real(), 0.5, 1e-15);
    EXPECT_NEAR(state.amplitude(0b10).real(), 0.5, 1e-15);
    EXPECT_NEAR(state.amplitude(0b11).real(), -0.5, 1e-15);
}

TEST(simulator, norm_is_preserved_gate_by_gate) {
    Circuit c = sample_circuit(chain(10, 20), 3);
    StateVector state(10);
    for (const Layer &layer : c.layers()) {
        for (const Gate &g : layer) {
            state.apply(g);
            ASSERT_NEAR(state.norm_squared(), 1.0, 1e-12);
        }
    }
}

TEST(simulator, mean_zero_probability_is_uniform) {
    // Averaged over the ensemble, Pr[0^n] = 2^-n.
    const size_t n = 8;
    const int seeds = 10000;
    std::vector<double> values(seeds);
    for (int s = 0; s < seeds; s++) {
        values[s] = output_probability(sample_circuit(chain(n, 16), s), 0) * 256;
    }
    double mean = 0, sq = 0;
    for (double v : values) {
        mean += v;
        sq += v * v;
    }
    mean /= seeds;
    double se = std::sqrt((sq / seeds - mean * mean) / seeds);
    EXPECT_NEAR(mean, 1.0, 5 * se);
}

TEST(simulator, appended_mask_permutes_distribution) {
    Circuit c = sample_circuit(chain(7, 10), 11);
    auto base = full_distribution(c);
    for (Bitstring z : {Bitstring{0}, Bitstring{1}, Bitstring{77}, Bitstring{127}}) {
        auto masked = full_distribution(append_not_mask(c, z));
        for (Bitstring y = 0; y < 128; y++) {
            ASSERT_EQ(masked.probability(y ^ z), base.probability(y));
        }
    }
}

TEST(simulator, gate_order_within_layer_is_irrelevant) {
    Circuit c = sample_circuit(chain(6, 9), 4);
    std::vector<Layer> reversed = c.layers();
    for (Layer &layer : reversed) {
        std::reverse(layer.begin(), layer.end());
    }
    Circuit r(c.num_qubits(), c.seed(), reversed);
    EXPECT_LE(test_support::max_abs_diff(simulate(c).amplitudes(), simulate(r).amplitudes()), 1e-14);
}

TEST(simulator, refuses_oversized_state) {
    SimulatorOptions opts;
    opts.max_qubits = 5;
    EXPECT_THROW(simulate(Circuit(6, 0), opts), ResourceError);
    EXPECT_NO_THROW(simulate(Circuit(5, 0), opts));
    try {
        check_simulable(40);
        FAIL();
    } catch (const ResourceError &e) {
        EXPECT_NE(std::string(e.what()).find("--max-qubits"), std::string::npos);
    }
}

TEST(simulator, distribution_encoding_round_trips) {
    auto dist = full_distribution(sample_circuit(chain(5, 8), 2));
    auto bytes = encode_distribution(dist);
    EXPECT_EQ(bytes.size(), 8u + 32 * 8);
    auto back = decode_distribution(bytes);
    EXPECT_EQ(back.num_qubits, 5u);
    EXPECT_EQ(back.probs, dist.probs);
    bytes.pop_back();
    EXPECT_THROW(decode_distribution(bytes), std::exception);
}

TEST(simulator, result_does_not_depend_on_thread_count) {
    // 16 qubits crosses the parallel threshold.
    Circuit c = sample_circuit(chain(16, 12), 9);
    set_thread_limit(1);
    auto single = full_distribution(c);
    set_thread_limit(4);
    auto multi = full_distribution(c);
    set_thread_limit(0);
    EXPECT_EQ(single.probs, multi.probs);
}
