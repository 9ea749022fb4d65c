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

#ifndef XEBLAB_XEB_H
#define XEBLAB_XEB_H

#include <cstddef>
#include <cstdint>
#include <string>

#include "xeblab/circuit.h"
#include "xeblab/samplers.h"
#include "xeblab/simulator.h"

namespace xeblab {

/// Outcome of a linear cross-entropy check on one sample set.
struct XebReport {
    size_t num_qubits = 0;
    size_t k = 0;
    /// Mean ideal probability of the samples.
    double score = 0;
    /// score * 2^n.
    double b_implied = 0;
    double threshold_b = 0;
    /// score >= threshold_b / 2^n and the samples are pairwise distinct.
    bool xhog_pass = false;
    /// b_implied - 1: inverts E[Y] = (1 + fidelity) / 2^n under depolarizing noise.
    double fidelity_estimate = 0;
    uint64_t seed = 0;
};

/// Mean of P(z_i) over the samples, duplicates counted with multiplicity.
/// Accumulated with compensated summation.
double xeb_score(const OutputDistribution &dist, const SampleSet &samples);
double xeb_score(const Circuit &circuit, const SampleSet &samples, const SimulatorOptions &options = {});

XebReport check_xhog(const OutputDistribution &dist, const SampleSet &samples, double b, uint64_t seed = 0);
XebReport check_xhog(const Circuit &circuit, const SampleSet &samples, double b,
                     const SimulatorOptions &options = {});

/// Smallest k with k >= 1 / (((2s - 1) b - 1)(b - 1)), the sample count at
/// which the reduction's gain is bounded away from zero.
/// Requires b > 1 and 1/2 + 1/(2b) < s <= 1; throws std::domain_error otherwise.
uint64_t required_k(double b, double s);

/// The Chebyshev-argument convention k = 4 (b - 1)^-2 (at s = 3/4 + 1/(4b)).
/// Requires b > 1.
uint64_t required_k_chebyshev(double b);

/// Lower bound on the XHOG success probability from Chebyshev's inequality:
/// 1 - 2 / ((b - 1)^2 k^2), floored at 0. `fidelity_mean` is E[Y] * 2^n and must
/// be at least 2b - 1; k must be at least 4 (b - 1)^-2.
///
/// This follows the published chain, which takes the standard deviation of
/// the k-sample mean to be sqrt(2) / (k 2^n). The variance bound
/// Var(Y) <= 2 / 2^{2n} only gives sqrt(2 / k) / 2^n, i.e. a failure bound of
/// 2 / ((b - 1)^2 k); see chebyshev_success_bound_from_variance.
double chebyshev_success_bound(double b, uint64_t k, double fidelity_mean);

/// 1 - 2 / ((b - 1)^2 k), floored at 0, under the same premises.
double chebyshev_success_bound_from_variance(double b, uint64_t k, double fidelity_mean);

/// Flat `key=value` lines.
std::string format_report_text(const XebReport &report);
/// n,k,score,b_implied,threshold_b,xhog_pass,fidelity_estimate,seed
std::string report_csv_header();
std::string format_report_csv(const XebReport &report);

}  // namespace xeblab

#endif
