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

#include "xeblab/xeb.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "xeblab/analysis.h"
#include "xeblab/samplers.h"
#include "xeblab/stats.h"

using namespace xeblab;

namespace {

CircuitDistribution chain(size_t n, size_t depth) {
    CircuitDistribution d;
    d.num_qubits = n;
    d.depth = depth;
    return d;
}

}  // namespace

TEST(xeb, identity_circuit_scores_one) {
    Circuit c(4, 0);
    SampleSet s{4, std::vector<Bitstring>(10, 0), false};
    EXPECT_EQ(xeb_score(c, s), 1.0);
    XebReport r = check_xhog(c, s, 1.5);
    EXPECT_EQ(r.b_implied, 16.0);
    EXPECT_FALSE(r.xhog_pass);  // duplicates
    EXPECT_EQ(r.fidelity_estimate, 15.0);
}

TEST(xeb, uniform_samples_score_two_to_minus_n) {
    auto dist = full_distribution(sample_circuit(chain(8, 16), 1));
    SampleSet s = sample_uniform(8, 100000, 2, false);
    double score = xeb_score(dist, s);
    std::vector<double> ps;
    for (Bitstring z : s.samples) {
        ps.push_back(dist.probability(z));
    }
    EXPECT_NEAR(score, 1.0 / 256, 5 * estimate_mean(ps).standard_error);
}

TEST(xeb, b_implied_is_exact_rescaling) {
    auto dist = full_distribution(sample_circuit(chain(9, 12), 3));
    SampleSet s = sample_ideal(dist, 300, 4, true);
    XebReport r = check_xhog(dist, s, 1.5, 17);
    EXPECT_EQ(r.b_implied, std::ldexp(r.score, 9));
    EXPECT_EQ(r.k, 300u);
    EXPECT_EQ(r.seed, 17u);
    EXPECT_EQ(r.xhog_pass, r.score >= 1.5 / 512);
}

TEST(xeb, duplicates_never_pass) {
    OutputDistribution d{2, {0.97, 0.01, 0.01, 0.01}};
    SampleSet dup{2, {0, 0}, false};
    EXPECT_FALSE(check_xhog(d, dup, 1.0).xhog_pass);
    SampleSet one{2, {0}, true};
    EXPECT_TRUE(check_xhog(d, one, 1.0).xhog_pass);
}

TEST(xeb, dimension_mismatch_is_rejected) {
    Circuit c(3, 0);
    EXPECT_THROW(xeb_score(c, SampleSet{4, {0}, false}), std::invalid_argument);
    EXPECT_THROW(check_xhog(c, SampleSet{2, {0}, false}, 1.5), std::invalid_argument);
    EXPECT_THROW(xeb_score(full_distribution(c), SampleSet{3, {}, false}), std::invalid_argument);
}

TEST(xeb, ideal_passes_and_uniform_fails_overwhelmingly) {
    // Distinct sampling needs k << 2^n to stay close to the ideal law, so the
    // k = 10^4 experiment runs at n = 16.
    int ideal_pass = 0, uniform_pass = 0;
    for (uint64_t seed = 0; seed < 100; seed++) {
        auto dist = full_distribution(sample_circuit(default_distribution(16, 20), seed));
        ideal_pass += check_xhog(dist, sample_ideal(dist, 10000, seed, true), 1.5).xhog_pass;
        uniform_pass += check_xhog(dist, sample_uniform(16, 10000, seed, true), 1.5).xhog_pass;
    }
    EXPECT_GE(ideal_pass, 99);
    EXPECT_LE(uniform_pass, 1);
}

TEST(xeb, score_ignores_sample_order) {
    auto dist = full_distribution(sample_circuit(chain(8, 10), 5));
    SampleSet s = sample_ideal(dist, 200, 1, true);
    SampleSet shuffled = s;
    std::reverse(shuffled.samples.begin(), shuffled.samples.end());
    EXPECT_NEAR(xeb_score(dist, s), xeb_score(dist, shuffled), 1e-18);
}

TEST(xeb, score_is_invariant_under_output_relabeling) {
    Circuit c = sample_circuit(chain(7, 10), 6);
    SampleSet s = sample_ideal(c, 50, 2, true);
    for (Bitstring z : {Bitstring{3}, Bitstring{100}}) {
        SampleSet moved = s;
        for (Bitstring &y : moved.samples) {
            y ^= z;
        }
        EXPECT_DOUBLE_EQ(xeb_score(append_not_mask(c, z), moved), xeb_score(c, s));
    }
}

TEST(xeb, score_is_linear_in_sample_union) {
    auto dist = full_distribution(sample_circuit(chain(8, 10), 7));
    SampleSet a = sample_ideal(dist, 70, 1, false);
    SampleSet b = sample_uniform(8, 30, 2, false);
    SampleSet u = a;
    u.samples.insert(u.samples.end(), b.samples.begin(), b.samples.end());
    EXPECT_NEAR(xeb_score(dist, u) * 100, xeb_score(dist, a) * 70 + xeb_score(dist, b) * 30, 1e-15);
}

TEST(xeb, mean_variance_follows_variance_law) {
    // Var(mean of k samples) = Var(Y) / k, with Var(Y) computed exactly from the mixture.
    const double phi = 0.5;
    auto dist = full_distribution(sample_circuit(default_distribution(12, 20), 8));
    const double N = 4096;
    double m1 = 0, m2 = 0;
    for (double p : dist.probs) {
        double q = phi * p + (1 - phi) / N;
        m1 += q * p * N;
        m2 += q * p * p * N * N;
    }
    const double var_y = m2 - m1 * m1;
    for (size_t k : {1, 4}) {
        const int reps = 20000;
        std::vector<double> means(reps);
        for (int r = 0; r < reps; r++) {
            SampleSet s = sample_depolarizing(dist, NoiseModel(phi), k, derive_seed(k, r), false);
            means[r] = xeb_score(dist, s) * N;
        }
        auto est = estimate_mean(means);
        EXPECT_NEAR(est.mean, m1, 5 * est.standard_error);
        // The sample variance of a heavy-tailed Y is itself noisy; 10% covers it at this size.
        EXPECT_NEAR(est.variance, var_y / k, 0.1 * var_y / k) << k;
    }
}

TEST(xeb, mean_variance_obeys_two_over_k_for_mixed_circuits) {
    // Var(2^n Y) = 1 + 2 phi - phi^2 <= 2 for Porter-Thomas circuits, so Var(2^n mean) <= 2 / k.
    const int circuits = 2000;
    std::vector<OutputDistribution> dists;
    for (int c = 0; c < circuits; c++)
        dists.push_back(full_distribution(sample_circuit(default_distribution(10, 80), derive_seed(1, c))));
    for (double phi : {0.0, 0.5, 1.0}) {
        for (size_t k : {1, 4}) {
            const int reps = 20000;
            std::vector<double> means(reps);
            for (int r = 0; r < reps; r++) {
                const auto &dist = dists[r % circuits];
                SampleSet s = sample_depolarizing(dist, NoiseModel(phi), k, derive_seed(2, r), false);
                means[r] = xeb_score(dist, s) * 1024;
            }
            // Sample variance of a heavy-tailed mean is noisy to a few percent here.
            EXPECT_LE(estimate_mean(means).variance, 2.0 / k * 1.1) << phi << " " << k;
        }
    }
}

TEST(xeb, required_k_at_quarter_point_is_two_over_gap_squared) {
    for (double b : {1.001, 1.01, 1.1, 1.5, 2.0}) {
        double s = 0.75 + 0.25 / b;
        EXPECT_EQ(required_k(b, s), static_cast<uint64_t>(std::ceil(2 / ((b - 1) * (b - 1)) - 1e-6))) << b;
    }
    EXPECT_EQ(required_k(1.5, 0.75 + 0.25 / 1.5), 8u);
    EXPECT_EQ(required_k(1.001, 0.75 + 0.25 / 1.001), 2000000u);
}

TEST(xeb, required_k_with_certain_success) {
    EXPECT_EQ(required_k(1.5, 1.0), 4u);
    EXPECT_EQ(required_k(1.1, 1.0), 100u);
    EXPECT_EQ(required_k(1.3, 1.0), 12u);  // 11.11 rounds up
    EXPECT_EQ(required_k(2.0, 1.0), 1u);
}

TEST(xeb, chebyshev_convention_gives_four_million) {
    EXPECT_EQ(required_k_chebyshev(1.001), 4000000u);
    EXPECT_EQ(required_k_chebyshev(1.5), 16u);
    EXPECT_EQ(required_k_chebyshev(1.1), 400u);
}

TEST(xeb, required_k_domain) {
    EXPECT_THROW(required_k(1.0, 1.0), std::domain_error);
    EXPECT_THROW(required_k(0.5, 1.0), std::domain_error);
    EXPECT_THROW(required_k(1.5, 0.5 + 0.5 / 1.5), std::domain_error);
    EXPECT_THROW(required_k(1.5, 1.01), std::domain_error);
    EXPECT_THROW(required_k(std::nan(""), 1.0), std::domain_error);
    EXPECT_THROW(required_k_chebyshev(1.0), std::domain_error);
}

TEST(xeb, chebyshev_bound_at_four_million) {
    double bound = chebyshev_success_bound(1.001, 4000000, 1.002);
    EXPECT_GE(bound, 1 - 0.000125);
    EXPECT_LE(bound, 1.0);
}

TEST(xeb, chebyshev_bound_dominates_quarter_point) {
    for (double b : {1.001, 1.01, 1.1, 1.3, 1.5, 2.0}) {
        uint64_t k = required_k_chebyshev(b);
        double bound = chebyshev_success_bound(b, k, 2 * b - 1);
        EXPECT_GE(bound, 1 - (b - 1) / 8) << b;
        EXPECT_GE(bound, 0.75 + 0.25 / b) << b;
        double from_variance = chebyshev_success_bound_from_variance(b, k, 2 * b - 1);
        EXPECT_GE(from_variance, 0.5 - 1e-12) << b;
    }
}

TEST(xeb, chebyshev_premises_are_enforced) {
    EXPECT_THROW(chebyshev_success_bound(1.1, 400, 1.19), std::domain_error);
    EXPECT_THROW(chebyshev_success_bound(1.1, 399, 1.2), std::domain_error);
    EXPECT_THROW(chebyshev_success_bound(1.0, 400, 1.2), std::domain_error);
    EXPECT_NO_THROW(chebyshev_success_bound(1.1, 400, 1.2));
}

TEST(xeb, report_formats) {
    XebReport r{3, 2, 0.25, 2.0, 1.5, true, 1.0, 9};
    EXPECT_EQ(format_report_text(r),
              "n=3\nk=2\nscore=0.25\nb_implied=2\nthreshold_b=1.5\nxhog_pass=1\nfidelity_estimate=1\nseed=9\n");
    EXPECT_EQ(report_csv_header(), "n,k,score,b_implied,threshold_b,xhog_pass,fidelity_estimate,seed\n");
    EXPECT_EQ(format_report_csv(r), "3,2,0.25,2,1.5,1,1,9\n");
}
