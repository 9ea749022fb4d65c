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

#include "xeblab/estimators.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#include "xeblab/parallel.h"
#include "xeblab/rng.h"
#include "xeblab/stats.h"
#include "xeblab/xeb.h"

namespace xeblab {

namespace {

double uniform_probability(size_t n) {
    return std::ldexp(1.0, -static_cast<int>(n));
}

Bitstring low_mask(size_t n) {
    return n >= 64 ? ~Bitstring{0} : (Bitstring{1} << n) - 1;
}

inline bool bit(Bitstring s, uint32_t q) {
    return (s >> q) & 1;
}

// Index of the last layer containing a single-qubit gate, or layers.size() if none.
size_t last_branching_layer(const Circuit &circuit) {
    const auto &layers = circuit.layers();
    for (size_t l = layers.size(); l-- > 0;) {
        for (const Gate &g : layers[l]) {
            if (g.kind == GateKind::kUnitary) {
                return l;
            }
        }
    }
    return layers.size();
}

// Basis state that must leave the last branching layer for the trajectory to
// reach 0^n: later layers hold only CZ (diagonal) and X (bit flips).
Bitstring pinned_state(const Circuit &circuit, size_t last) {
    Bitstring target = 0;
    const auto &layers = circuit.layers();
    for (size_t l = last + 1; l < layers.size(); l++) {
        for (const Gate &g : layers[l]) {
            if (g.kind == GateKind::kX) {
                target ^= Bitstring{1} << g.q0;
            }
        }
    }
    return target;
}

// E|w|^2 = 2^branches * sum over trajectories ending at 0^n of |prod of transition amplitudes|^2.
// The squared magnitudes form a product of independent per-qubit Markov chains.
double exact_second_moment(const Circuit &circuit, size_t branches) {
    const size_t n = circuit.num_qubits();
    std::vector<std::array<double, 2>> occupancy(n, {1.0, 0.0});
    for (const Layer &layer : circuit.layers()) {
        for (const Gate &g : layer) {
            auto &v = occupancy[g.q0];
            if (g.kind == GateKind::kUnitary) {
                const Matrix2 &m = g.matrix;
                v = {std::norm(m[0]) * v[0] + std::norm(m[1]) * v[1],
                     std::norm(m[2]) * v[0] + std::norm(m[3]) * v[1]};
            } else if (g.kind == GateKind::kX) {
                std::swap(v[0], v[1]);
            }
        }
    }
    double total = 1;
    for (const auto &v : occupancy) {
        total *= v[0];
    }
    return std::ldexp(total, static_cast<int>(std::min<size_t>(branches, 100000)));
}

}  // namespace

double trivial_estimator(const Circuit &circuit) {
    return uniform_probability(circuit.num_qubits());
}

double estimator_gain(double p0, double p, size_t num_qubits) {
    double base = p0 - uniform_probability(num_qubits);
    double err = p0 - p;
    return base * base - err * err;
}

PathEstimate sample_feynman_paths(const Circuit &circuit, size_t paths, uint64_t seed) {
    if (paths == 0) {
        throw std::invalid_argument("need at least one path");
    }
    const auto &layers = circuit.layers();
    const size_t last = last_branching_layer(circuit);
    const Bitstring pinned = last < layers.size() ? pinned_state(circuit, last) : 0;

    PathEstimate out;
    out.paths = paths;
    for (size_t l = 0; l < std::min(last, layers.size()); l++) {
        for (const Gate &g : layers[l]) {
            out.branch_count += g.kind == GateKind::kUnitary;
        }
    }
    out.second_moment = exact_second_moment(circuit, out.branch_count);

    Rng rng(seed, 0);
    std::vector<std::complex<double>> contributions(paths);
    for (size_t p = 0; p < paths; p++) {
        Bitstring state = 0;
        std::complex<double> weight = 1;
        uint64_t random_bits = 0;
        int bits_left = 0;
        for (size_t l = 0; l < layers.size(); l++) {
            for (const Gate &g : layers[l]) {
                switch (g.kind) {
                    case GateKind::kUnitary: {
                        bool in = bit(state, g.q0);
                        bool outbit;
                        if (l < last) {
                            if (bits_left == 0) {
                                random_bits = rng.next_u64();
                                bits_left = 64;
                            }
                            outbit = random_bits & 1;
                            random_bits >>= 1;
                            bits_left--;
                            weight *= 2.0 * g.matrix[2 * outbit + in];
                        } else {
                            outbit = bit(pinned, g.q0);
                            weight *= g.matrix[2 * outbit + in];
                        }
                        state = (state & ~(Bitstring{1} << g.q0)) | (Bitstring{outbit} << g.q0);
                        break;
                    }
                    case GateKind::kCZ:
                        if (bit(state, g.q0) && bit(state, g.q1)) {
                            weight = -weight;
                        }
                        break;
                    case GateKind::kX:
                        state ^= Bitstring{1} << g.q0;
                        break;
                }
            }
        }
        // Qubits untouched by the last branching layer may still miss 0^n.
        contributions[p] = state == 0 ? weight : 0.0;
    }

    std::complex<double> sum = 0;
    for (const auto &w : contributions) {
        sum += w;
    }
    out.amplitude = sum / static_cast<double>(paths);
    if (paths > 1) {
        double sq = 0;
        for (const auto &w : contributions) {
            sq += std::norm(w - out.amplitude);
        }
        out.contribution_variance = sq / static_cast<double>(paths - 1);
    }
    return out;
}

double path_probability(const PathEstimate &est, size_t num_qubits, PathProbability form) {
    const double raw = std::norm(est.amplitude);
    const double corrected = raw - est.contribution_variance / static_cast<double>(est.paths);
    switch (form) {
        case PathProbability::kRaw:
            return raw;
        case PathProbability::kBiasCorrected:
            return corrected;
        case PathProbability::kOffsetCorrected:
            return uniform_probability(num_qubits) + corrected;
        case PathProbability::kShrunk: {
            const double base = uniform_probability(num_qubits);
            if (est.branch_count == 0) {
                return corrected;
            }
            // Variance of one contribution, taking E|a|^2 = 2^-n.
            double amp_var = std::max(est.second_moment - base, 0.0) / static_cast<double>(est.paths);
            // Var(|a_hat|^2) for a circular complex normal error of variance amp_var.
            double q_var = 2 * base * amp_var + amp_var * amp_var;
            double signal = base * base;
            double lambda = std::isfinite(q_var) ? signal / (signal + q_var) : 0.0;
            return base + lambda * (corrected - base);
        }
    }
    return raw;
}

double feynman_path_estimator(const Circuit &circuit, size_t paths, uint64_t seed, PathProbability form) {
    return path_probability(sample_feynman_paths(circuit, paths, seed), circuit.num_qubits(), form);
}

SampleSet TopKSolver::solve(const Circuit &circuit, uint64_t) const {
    return sample_top_k(circuit, k_, options_);
}

SampleSet UniformSolver::solve(const Circuit &circuit, uint64_t seed) const {
    return sample_uniform(circuit.num_qubits(), k_, seed, true);
}

SampleSet DepolarizingSolver::solve(const Circuit &circuit, uint64_t seed) const {
    return sample_depolarizing(circuit, noise_, k_, seed, true, options_);
}

ReductionOutcome run_reduction(const Circuit &circuit, const XhogSolver &solver, double b, uint64_t seed,
                               const SimulatorOptions &options) {
    const size_t n = circuit.num_qubits();
    const double base = uniform_probability(n);
    ReductionOutcome out;
    Rng rng(seed, 0);
    out.z = rng.next_u64() & low_mask(n);
    out.p = base;

    Circuit masked = append_not_mask(circuit, out.z);
    SampleSet answer;
    try {
        answer = solver.solve(masked, derive_seed(seed, 1));
    } catch (const std::exception &) {
        out.solver_error = true;
        return out;
    }
    if (answer.num_qubits != n || answer.samples.empty()) {
        out.solver_error = true;
        return out;
    }
    out.hit = std::find(answer.samples.begin(), answer.samples.end(), out.z) != answer.samples.end();
    out.solver_success = check_xhog(full_distribution(masked, options), answer, b).xhog_pass;
    if (out.hit) {
        out.p = b * base;
    }
    return out;
}

double reduction_estimator(const Circuit &circuit, const XhogSolver &solver, double b, uint64_t seed,
                           const SimulatorOptions &options) {
    return run_reduction(circuit, solver, b, seed, options).p;
}

Estimator make_trivial_estimator() {
    return [](const Circuit &c, uint64_t) {
        return Estimate{trivial_estimator(c)};
    };
}

Estimator make_path_estimator(size_t paths, PathProbability form) {
    if (paths == 0) {
        throw std::invalid_argument("need at least one path");
    }
    return [paths, form](const Circuit &c, uint64_t seed) {
        return Estimate{feynman_path_estimator(c, paths, seed, form)};
    };
}

Estimator make_reduction_estimator(std::shared_ptr<const XhogSolver> solver, double b, SimulatorOptions options) {
    if (!solver) {
        throw std::invalid_argument("reduction needs a solver");
    }
    return [solver = std::move(solver), b, options](const Circuit &c, uint64_t seed) {
        ReductionOutcome r = run_reduction(c, *solver, b, seed, options);
        return Estimate{r.p, r.hit, r.solver_success};
    };
}

Estimator make_exact_estimator(SimulatorOptions options) {
    return [options](const Circuit &c, uint64_t) {
        return Estimate{output_probability(c, 0, options)};
    };
}

MseBenchmark run_mse_benchmark(const CircuitDistribution &dist, const Estimator &estimator, size_t trials,
                               uint64_t seed, const SimulatorOptions &options) {
    dist.validate();
    check_simulable(dist.num_qubits, options);
    if (trials < 2) {
        throw std::invalid_argument("a benchmark needs at least two trials");
    }
    const size_t n = dist.num_qubits;
    MseBenchmark bench;
    bench.num_qubits = n;
    bench.trials.resize(trials);

    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16) num_threads(static_cast<int>(thread_limit()))
    for (size_t t = 0; t < trials; t++) {
        try {
            EstimatorTrial &trial = bench.trials[t];
            trial.seed = derive_seed(seed, 2 * t);
            Circuit circuit = sample_circuit(dist, trial.seed);
            trial.p0 = output_probability(circuit, 0, options);
            Estimate e = estimator(circuit, derive_seed(seed, 2 * t + 1));
            trial.p = e.p;
            trial.hit = e.hit;
            trial.solver_success = e.solver_success;
            trial.gain = estimator_gain(trial.p0, trial.p, n);
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

    std::vector<double> gains(trials);
    CompensatedSum err_sq, base_sq;
    size_t hits = 0, successes = 0;
    const double base = uniform_probability(n);
    for (size_t t = 0; t < trials; t++) {
        const auto &trial = bench.trials[t];
        gains[t] = trial.gain;
        err_sq.add((trial.p0 - trial.p) * (trial.p0 - trial.p));
        base_sq.add((trial.p0 - base) * (trial.p0 - base));
        hits += trial.hit;
        successes += trial.solver_success;
    }
    MeanEstimate m = estimate_mean(gains);
    double count = static_cast<double>(trials);
    bench.mean_gain = m.mean;
    bench.standard_error = m.standard_error;
    bench.scaled_gain = std::ldexp(m.mean, 3 * static_cast<int>(n));
    bench.scaled_standard_error = std::ldexp(m.standard_error, 3 * static_cast<int>(n));
    bench.mse_estimator = err_sq.value() / count;
    bench.mse_trivial = base_sq.value() / count;
    bench.hit_rate = static_cast<double>(hits) / count;
    bench.success_rate = static_cast<double>(successes) / count;
    return bench;
}

ConditionalGain conditional_gain(const MseBenchmark &bench, bool solver_success) {
    std::vector<double> scaled;
    for (const auto &t : bench.trials) {
        if (t.hit && t.solver_success == solver_success) {
            scaled.push_back(std::ldexp(t.gain, 2 * static_cast<int>(bench.num_qubits)));
        }
    }
    MeanEstimate m = estimate_mean(scaled);
    return {m.mean, m.standard_error, m.count};
}

std::string format_trials_csv(const MseBenchmark &bench) {
    std::string out = "seed,p0,p,X\n";
    for (const auto &t : bench.trials) {
        out += fmt::format("{},{:.17g},{:.17g},{:.17g}\n", t.seed, t.p0, t.p, t.gain);
    }
    return out;
}

std::string format_benchmark_summary(const MseBenchmark &b) {
    return fmt::format(
        "n={}\ntrials={}\nmean_gain={:.17g}\nstandard_error={:.17g}\nscaled_gain={:.17g}\n"
        "scaled_standard_error={:.17g}\nmse_estimator={:.17g}\nmse_trivial={:.17g}\nhit_rate={:.17g}\n"
        "success_rate={:.17g}\n",
        b.num_qubits, b.trials.size(), b.mean_gain, b.standard_error, b.scaled_gain, b.scaled_standard_error,
        b.mse_estimator, b.mse_trivial, b.hit_rate, b.success_rate);
}

}  // namespace xeblab
