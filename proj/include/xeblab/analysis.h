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

#ifndef XEBLAB_ANALYSIS_H
#define XEBLAB_ANALYSIS_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xeblab/circuit.h"
#include "xeblab/simulator.h"

namespace xeblab {

/// A reasonable default ensemble for n qubits: the squarest grid with at
/// least two rows that covers n exactly, otherwise a chain.
CircuitDistribution default_distribution(size_t num_qubits, size_t depth);

// -------------------------------------------------------------------------
// Porter-Thomas fit.
// -------------------------------------------------------------------------

/// Kolmogorov-Smirnov distance between the empirical law of `values` and Exp(1).
double ks_distance_exponential(std::span<const double> values);

struct FitReport {
    /// KS distance of the pooled rescaled probabilities 2^n P(z) from Exp(1).
    double statistic = 0;
    size_t sample_count = 0;
    double threshold = 0;
    bool pass = false;
};

struct PorterThomasOptions {
    /// Pass iff the KS distance is below this. A fixed tolerance rather than a
    /// significance level: the pooled points are not independent.
    double threshold = 0.01;
    SimulatorOptions simulator;
    /// When set, receives every pooled value 2^n P(z), grouped by circuit.
    std::vector<double> *pooled_out = nullptr;
};

FitReport porter_thomas_fit(const CircuitDistribution &dist, size_t circuits, uint64_t seed,
                            const PorterThomasOptions &options = {});
FitReport exponential_fit(std::span<const double> values, double threshold = 0.01);

// -------------------------------------------------------------------------
// XEB moments under the depolarizing mixture.
// -------------------------------------------------------------------------

struct MomentsReport {
    double fidelity = 0;
    size_t circuits = 0;
    size_t samples = 0;
    /// E[Y] 2^n and its jackknife standard error over circuits.
    double mean = 0;
    double mean_se = 0;
    double expected_mean = 0;
    /// Var(Y) 2^{2n} and its jackknife standard error over circuits.
    double variance = 0;
    double variance_se = 0;
    double expected_variance = 0;
};

/// Draws `samples_per_circuit` i.i.d. depolarizing samples on each of
/// `circuits` random circuits and compares E[Y] 2^n with 1 + f and
/// Var(Y) 2^{2n} with 1 + 2f - f^2, where Y = P(z) for the drawn z.
MomentsReport xeb_moment_check(const CircuitDistribution &dist, double fidelity, size_t circuits,
                               size_t samples_per_circuit, uint64_t seed, const SimulatorOptions &options = {});

// -------------------------------------------------------------------------
// Distinguishing uniform samples from XHOG-level samples.
// -------------------------------------------------------------------------

struct DivergenceReport {
    double b = 0;
    /// Single-sample KL divergence, nats.
    double kl = 0;
    /// Quadrature error estimate.
    double kl_error = 0;
    /// (b - 1)^2 / 2
    double taylor_approx = 0;
    size_t k = 0;
    /// sqrt(k (b - 1)^2 / 4): Pinsker applied to the k-sample divergence k (b - 1)^2 / 2.
    double tv_bound = 0;
};

/// Integrand of the single-sample divergence at rescaled probability x:
/// e^{-x} g log g with g = b (x - 1) - x + 2. g e^{-x} is the density of
/// 2^n P(z) when a sample scores b on average, e^{-x} the uniform one.
double kl_integrand(double x, double b);

/// Adaptive Gauss-Kronrod quadrature over [0, 50] to absolute tolerance 1e-9.
/// Requires 1 <= b <= 2 (the log argument is negative near 0 otherwise);
/// throws std::domain_error outside.
DivergenceReport kl_uniform_vs_xhog(double b, size_t k = 1);

struct DistinguishabilityReport {
    double b = 0;
    size_t k = 0;
    size_t trials = 0;
    /// Pr[test says XHOG | XHOG samples] - Pr[test says XHOG | uniform samples].
    double advantage = 0;
    double standard_error = 0;
    double tv_bound = 0;
};

/// Likelihood-ratio test on the k rescaled probabilities 2^n P(z_i), with the
/// Porter-Thomas densities e^{-x} (uniform) and g e^{-x} (XHOG level b) as the
/// model. Each trial draws a fresh circuit, k uniform strings and k strings
/// from the depolarizing mixture with fidelity b - 1, and applies the test to
/// both. Requires 1 <= b <= 2.
DistinguishabilityReport empirical_distinguishability(double b, size_t k, size_t trials,
                                                       const CircuitDistribution &dist, uint64_t seed,
                                                       const SimulatorOptions &options = {});
DistinguishabilityReport empirical_distinguishability(double b, size_t k, size_t trials, size_t num_qubits,
                                                       uint64_t seed);

std::string format_fit_report(const FitReport &r);
std::string format_moments_report(const MomentsReport &r);
std::string format_divergence_report(const DivergenceReport &r);
std::string format_distinguishability_report(const DistinguishabilityReport &r);

}  // namespace xeblab

#endif
