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

#include "xeblab/analysis.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#include "xeblab/parallel.h"
#include "xeblab/rng.h"
#include "xeblab/samplers.h"
#include "xeblab/stats.h"

namespace xeblab {

namespace {

constexpr double kKlUpperLimit = 50;
constexpr double kKlTolerance = 1e-9;

void check_b_range(double b) {
    if (!(b >= 1 && b <= 2)) {
        throw std::domain_error(fmt::format("b must lie in [1, 2], got {}", b));
    }
}

double log_likelihood_ratio(std::span<const double> rescaled, double b) {
    double total = 0;
    for (double x : rescaled) {
        total += std::log((b - 1) * x + 2 - b);
    }
    return total;
}

std::vector<double> rescaled_values(const OutputDistribution &dist, const SampleSet &set) {
    std::vector<double> out;
    out.reserve(set.k());
    int n = static_cast<int>(dist.num_qubits);
    for (Bitstring z : set.samples) {
        out.push_back(std::ldexp(dist.probs[z], n));
    }
    return out;
}

template <typename Fn>
void parallel_trials(size_t count, Fn &&fn) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4) num_threads(static_cast<int>(thread_limit()))
    for (size_t t = 0; t < count; t++) {
        try {
            fn(t);
        } catch (...) {
#pragma omp critical
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace

CircuitDistribution default_distribution(size_t num_qubits, size_t depth) {
    CircuitDistribution dist;
    dist.num_qubits = num_qubits;
    dist.depth = depth;
    size_t rows = 0;
    for (size_t r = 2; r * r <= num_qubits; r++) {
        if (num_qubits % r == 0) {
            rows = r;
        }
    }
    if (rows != 0) {
        dist.topology = Topology::grid(rows, num_qubits / rows);
    }
    return dist;
}

double ks_distance_exponential(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("KS distance needs at least one value");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double count = static_cast<double>(sorted.size());
    double worst = 0;
    for (size_t i = 0; i < sorted.size(); i++) {
        double cdf = sorted[i] <= 0 ? 0.0 : -std::expm1(-sorted[i]);
        worst = std::max(worst, std::max(static_cast<double>(i + 1) / count - cdf, cdf - static_cast<double>(i) / count));
    }
    return std::clamp(worst, 0.0, 1.0);
}

FitReport exponential_fit(std::span<const double> values, double threshold) {
    FitReport r;
    r.statistic = ks_distance_exponential(values);
    r.sample_count = values.size();
    r.threshold = threshold;
    r.pass = r.statistic < threshold;
    return r;
}

FitReport porter_thomas_fit(const CircuitDistribution &dist, size_t circuits, uint64_t seed,
                            const PorterThomasOptions &options) {
    dist.validate();
    check_simulable(dist.num_qubits, options.simulator);
    if (circuits == 0) {
        throw std::invalid_argument("need at least one circuit");
    }
    const size_t per_circuit = size_t{1} << dist.num_qubits;
    std::vector<double> pooled(circuits * per_circuit);
    const int n = static_cast<int>(dist.num_qubits);
    parallel_trials(circuits, [&](size_t c) {
        OutputDistribution out = full_distribution(sample_circuit(dist, derive_seed(seed, c)), options.simulator);
        for (size_t i = 0; i < per_circuit; i++) {
            pooled[c * per_circuit + i] = std::ldexp(out.probs[i], n);
        }
    });
    FitReport report = exponential_fit(pooled, options.threshold);
    if (options.pooled_out != nullptr) {
        *options.pooled_out = std::move(pooled);
    }
    return report;
}

MomentsReport xeb_moment_check(const CircuitDistribution &dist, double fidelity, size_t circuits,
                               size_t samples_per_circuit, uint64_t seed, const SimulatorOptions &options) {
    dist.validate();
    check_simulable(dist.num_qubits, options);
    NoiseModel noise(fidelity);
    if (circuits < 2 || samples_per_circuit == 0) {
        throw std::invalid_argument("moment check needs at least two circuits and one sample each");
    }
    std::vector<double> s1(circuits), s2(circuits);
    parallel_trials(circuits, [&](size_t c) {
        Circuit circuit = sample_circuit(dist, derive_seed(seed, 2 * c));
        OutputDistribution out = full_distribution(circuit, options);
        SampleSet set = sample_depolarizing(out, noise, samples_per_circuit, derive_seed(seed, 2 * c + 1), false);
        CompensatedSum a, b;
        for (double x : rescaled_values(out, set)) {
            a.add(x);
            b.add(x * x);
        }
        s1[c] = a.value();
        s2[c] = b.value();
    });

    const double m = static_cast<double>(samples_per_circuit);
    auto moments = [&](double sum1, double sum2, double count) {
        double mean = sum1 / count;
        double var = (sum2 - count * mean * mean) / (count - 1);
        return std::pair{mean, var};
    };
    const double total1 = compensated_sum(s1);
    const double total2 = compensated_sum(s2);
    const double total_count = m * static_cast<double>(circuits);
    auto [mean, var] = moments(total1, total2, total_count);

    // Delete-one-circuit jackknife; circuits are the independent units.
    std::vector<double> loo_mean(circuits), loo_var(circuits);
    for (size_t c = 0; c < circuits; c++) {
        auto [lm, lv] = moments(total1 - s1[c], total2 - s2[c], total_count - m);
        loo_mean[c] = lm;
        loo_var[c] = lv;
    }
    auto jackknife_se = [&](const std::vector<double> &values) {
        double avg = compensated_sum(values) / static_cast<double>(values.size());
        double acc = 0;
        for (double v : values) {
            acc += (v - avg) * (v - avg);
        }
        double g = static_cast<double>(values.size());
        return std::sqrt((g - 1) / g * acc);
    };

    MomentsReport r;
    r.fidelity = fidelity;
    r.circuits = circuits;
    r.samples = circuits * samples_per_circuit;
    r.mean = mean;
    r.mean_se = jackknife_se(loo_mean);
    r.expected_mean = 1 + fidelity;
    r.variance = var;
    r.variance_se = jackknife_se(loo_var);
    r.expected_variance = 1 + 2 * fidelity - fidelity * fidelity;
    return r;
}

double kl_integrand(double x, double b) {
    double g = b * (x - 1) - x + 2;
    if (g <= 0) {
        return 0;  // g log g -> 0 at the b = 2, x = 0 endpoint
    }
    return std::exp(-x) * g * std::log(g);
}

DivergenceReport kl_uniform_vs_xhog(double b, size_t k) {
    check_b_range(b);
    DivergenceReport r;
    r.b = b;
    r.k = k;
    double error = 0;
    auto f = [b](double x) { return kl_integrand(x, b); };
    double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, 0.0, kKlUpperLimit, 30, 1e-12, &error);
    if (!(error <= kKlTolerance)) {
        throw std::runtime_error(fmt::format("KL quadrature did not converge (error estimate {})", error));
    }
    r.kl = value;
    r.kl_error = error;
    double d = b - 1;
    r.taylor_approx = d * d / 2;
    r.tv_bound = std::sqrt(static_cast<double>(k) * d * d / 4);
    return r;
}

DistinguishabilityReport empirical_distinguishability(double b, size_t k, size_t trials,
                                                       const CircuitDistribution &dist, uint64_t seed,
                                                       const SimulatorOptions &options) {
    check_b_range(b);
    dist.validate();
    check_simulable(dist.num_qubits, options);
    if (k == 0 || trials < 2) {
        throw std::invalid_argument("distinguishability needs k >= 1 and at least two trials");
    }
    NoiseModel noise(b - 1);
    std::vector<char> accept_uniform(trials), accept_xhog(trials);
    parallel_trials(trials, [&](size_t t) {
        OutputDistribution out = full_distribution(sample_circuit(dist, derive_seed(seed, 3 * t)), options);
        SampleSet uniform = sample_uniform(dist.num_qubits, k, derive_seed(seed, 3 * t + 1), false);
        SampleSet heavy = sample_depolarizing(out, noise, k, derive_seed(seed, 3 * t + 2), false);
        accept_uniform[t] = log_likelihood_ratio(rescaled_values(out, uniform), b) > 0;
        accept_xhog[t] = log_likelihood_ratio(rescaled_values(out, heavy), b) > 0;
    });
    const double count = static_cast<double>(trials);
    double pu = static_cast<double>(std::count(accept_uniform.begin(), accept_uniform.end(), 1)) / count;
    double px = static_cast<double>(std::count(accept_xhog.begin(), accept_xhog.end(), 1)) / count;

    DistinguishabilityReport r;
    r.b = b;
    r.k = k;
    r.trials = trials;
    r.advantage = px - pu;
    r.standard_error = std::sqrt((pu * (1 - pu) + px * (1 - px)) / count);
    r.tv_bound = std::sqrt(static_cast<double>(k) * (b - 1) * (b - 1) / 4);
    return r;
}

DistinguishabilityReport empirical_distinguishability(double b, size_t k, size_t trials, size_t num_qubits,
                                                       uint64_t seed) {
    return empirical_distinguishability(b, k, trials, default_distribution(num_qubits, 20), seed);
}

std::string format_fit_report(const FitReport &r) {
    return fmt::format("statistic={:.17g}\nsample_count={}\nthreshold={:.17g}\npass={}\n", r.statistic,
                       r.sample_count, r.threshold, r.pass ? 1 : 0);
}

std::string format_moments_report(const MomentsReport &r) {
    return fmt::format(
        "fidelity={:.17g}\ncircuits={}\nsamples={}\nmean={:.17g}\nmean_se={:.17g}\nexpected_mean={:.17g}\n"
        "variance={:.17g}\nvariance_se={:.17g}\nexpected_variance={:.17g}\n",
        r.fidelity, r.circuits, r.samples, r.mean, r.mean_se, r.expected_mean, r.variance, r.variance_se,
        r.expected_variance);
}

std::string format_divergence_report(const DivergenceReport &r) {
    return fmt::format("b={:.17g}\nkl={:.17g}\nkl_error={:.17g}\ntaylor_approx={:.17g}\nk={}\ntv_bound={:.17g}\n",
                       r.b, r.kl, r.kl_error, r.taylor_approx, r.k, r.tv_bound);
}

std::string format_distinguishability_report(const DistinguishabilityReport &r) {
    return fmt::format("b={:.17g}\nk={}\ntrials={}\nadvantage={:.17g}\nstandard_error={:.17g}\ntv_bound={:.17g}\n",
                       r.b, r.k, r.trials, r.advantage, r.standard_error, r.tv_bound);
}

}  // namespace xeblab
