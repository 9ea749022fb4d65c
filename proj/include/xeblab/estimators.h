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

#ifndef XEBLAB_ESTIMATORS_H
#define XEBLAB_ESTIMATORS_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "xeblab/circuit.h"
#include "xeblab/samplers.h"
#include "xeblab/simulator.h"

namespace xeblab {

// ---------------------------------------------------------------------------
// Estimates of p_0 = Pr[C outputs 0^n], scored against the constant 2^-n.
// ---------------------------------------------------------------------------

/// Always 2^-n.
double trivial_estimator(const Circuit &circuit);

/// Gain of an estimate p over the trivial estimate: (p0 - 2^-n)^2 - (p0 - p)^2.
double estimator_gain(double p0, double p, size_t num_qubits);

/// Monte Carlo over computational-basis trajectories that end at 0^n.
///
/// Every single-qubit gate before the last layer holding one branches
/// uniformly over {0, 1}; the contribution of a trajectory is the product of
/// its transition amplitudes times 2 per branch, so the mean contribution is
/// an unbiased estimate of <0^n|C|0^n>. CZ and X gates are deterministic, and
/// the last branching layer is pinned to the one state that reaches 0^n.
struct PathEstimate {
    std::complex<double> amplitude;
    /// Unbiased sample variance E|w - mean|^2 of the contributions (0 for one path).
    double contribution_variance = 0;
    /// Exact E|w|^2 under the trajectory law, computed qubit by qubit.
    double second_moment = 0;
    size_t paths = 0;
    /// Number of branching single-qubit gates (0 means a single trajectory).
    size_t branch_count = 0;
};

PathEstimate sample_feynman_paths(const Circuit &circuit, size_t paths, uint64_t seed);

/// How a path estimate of the amplitude becomes a probability estimate.
enum class PathProbability : uint8_t {
    /// 2^-n + lambda (q - 2^-n) with q the bias-corrected estimate and
    /// lambda = v / (v + Var q), v = 2^-2n the Porter-Thomas variance of p_0 and
    /// Var q predicted from the exact second moment. Tends to q when the paths
    /// are exact and to 2^-n when they are noise.
    kShrunk,
    /// |a|^2 - s^2 / paths; unbiased for p_0.
    kBiasCorrected,
    /// 2^-n + |a|^2 - s^2 / paths. Carries a +2^-n bias, so its expected gain is
    /// negative; kept for comparison.
    kOffsetCorrected,
    /// |a|^2.
    kRaw,
};

double path_probability(const PathEstimate &estimate, size_t num_qubits, PathProbability form);
double feynman_path_estimator(const Circuit &circuit, size_t paths, uint64_t seed,
                              PathProbability form = PathProbability::kShrunk);

// ---------------------------------------------------------------------------
// XHOG solvers and the reduction from probability estimation.
// ---------------------------------------------------------------------------

/// Anything that answers a circuit with k distinct strings.
class XhogSolver {
   public:
    virtual ~XhogSolver() = default;
    virtual size_t k() const = 0;
    virtual SampleSet solve(const Circuit &circuit, uint64_t seed) const = 0;
};

/// Full simulation, then the k most likely strings.
class TopKSolver : public XhogSolver {
   public:
    explicit TopKSolver(size_t k, SimulatorOptions options = {}) : k_(k), options_(options) {
    }
    size_t k() const override {
        return k_;
    }
    SampleSet solve(const Circuit &circuit, uint64_t seed) const override;

   private:
    size_t k_;
    SimulatorOptions options_;
};

/// k distinct uniform strings; ignores the circuit.
class UniformSolver : public XhogSolver {
   public:
    explicit UniformSolver(size_t k) : k_(k) {
    }
    size_t k() const override {
        return k_;
    }
    SampleSet solve(const Circuit &circuit, uint64_t seed) const override;

   private:
    size_t k_;
};

/// k distinct samples from the depolarizing mixture.
class DepolarizingSolver : public XhogSolver {
   public:
    DepolarizingSolver(NoiseModel noise, size_t k, SimulatorOptions options = {})
        : noise_(noise), k_(k), options_(options) {
    }
    size_t k() const override {
        return k_;
    }
    SampleSet solve(const Circuit &circuit, uint64_t seed) const override;

   private:
    NoiseModel noise_;
    size_t k_;
    SimulatorOptions options_;
};

struct ReductionOutcome {
    /// b 2^-n when z is among the solver's strings, else 2^-n.
    double p = 0;
    Bitstring z = 0;
    bool hit = false;
    /// Whether the solver's strings pass XHOG at b on the masked circuit.
    bool solver_success = false;
    /// The solver threw; the trial is still scored with p = 2^-n.
    bool solver_error = false;
};

/// Draws z uniformly, masks the circuit with X gates on the set bits of z,
/// asks the solver for k strings and guesses b 2^-n exactly when z is one of
/// them. Since <0^n|C|0^n> = <z|C'|0^n>, a heavy z certifies a heavy p_0.
ReductionOutcome run_reduction(const Circuit &circuit, const XhogSolver &solver, double b, uint64_t seed,
                               const SimulatorOptions &options = {});
double reduction_estimator(const Circuit &circuit, const XhogSolver &solver, double b, uint64_t seed,
                           const SimulatorOptions &options = {});

// ---------------------------------------------------------------------------
// Benchmark harness.
// ---------------------------------------------------------------------------

struct Estimate {
    double p = 0;
    bool hit = false;
    bool solver_success = true;
};

/// Must be safe to call concurrently.
using Estimator = std::function<Estimate(const Circuit &, uint64_t seed)>;

Estimator make_trivial_estimator();
Estimator make_path_estimator(size_t paths, PathProbability form = PathProbability::kShrunk);
Estimator make_reduction_estimator(std::shared_ptr<const XhogSolver> solver, double b,
                                   SimulatorOptions options = {});
/// Returns p_0 itself; the upper end of the achievable gain.
Estimator make_exact_estimator(SimulatorOptions options = {});

struct EstimatorTrial {
    uint64_t seed = 0;
    double p0 = 0;
    double p = 0;
    /// (p0 - 2^-n)^2 - (p0 - p)^2
    double gain = 0;
    bool hit = false;
    bool solver_success = true;
};

struct MseBenchmark {
    size_t num_qubits = 0;
    std::vector<EstimatorTrial> trials;
    double mean_gain = 0;
    double standard_error = 0;
    /// mean_gain * 2^{3n}
    double scaled_gain = 0;
    double scaled_standard_error = 0;
    double mse_estimator = 0;
    double mse_trivial = 0;
    double hit_rate = 0;
    /// Fraction of trials whose solver passed XHOG. Meaningful for reductions only.
    double success_rate = 0;
};

/// Trial t uses circuit seed derive_seed(seed, 2t) and estimator seed
/// derive_seed(seed, 2t + 1). Trials run in parallel; aggregation is in trial
/// order, so results do not depend on the thread count.
MseBenchmark run_mse_benchmark(const CircuitDistribution &dist, const Estimator &estimator, size_t trials,
                               uint64_t seed, const SimulatorOptions &options = {});

/// Mean gain (scaled by 2^{2n}) conditioned on the solver's string matching z.
struct ConditionalGain {
    double mean = 0;
    double standard_error = 0;
    size_t count = 0;
};
ConditionalGain conditional_gain(const MseBenchmark &bench, bool solver_success);

/// `seed,p0,p,X` header plus one row per trial.
std::string format_trials_csv(const MseBenchmark &bench);
/// key=value summary block.
std::string format_benchmark_summary(const MseBenchmark &bench);

}  // namespace xeblab

#endif
