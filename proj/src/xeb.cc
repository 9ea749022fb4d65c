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

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "xeblab/stats.h"

namespace xeblab {

namespace {

// Relative slack used when a bound lands on an integer up to rounding, e.g.
// 4 / (1.001 - 1)^2 evaluates to 4000000.0000002.
constexpr double kIntegerSlack = 1e-9;

uint64_t ceil_count(double x) {
    double nearest = std::round(x);
    if (std::abs(x - nearest) <= kIntegerSlack * std::max(1.0, x)) {
        return static_cast<uint64_t>(nearest);
    }
    return static_cast<uint64_t>(std::ceil(x));
}

void check_chebyshev_premises(double b, uint64_t k, double fidelity_mean) {
    if (!(b > 1) || !std::isfinite(b)) {
        throw std::domain_error(fmt::format("Chebyshev bound needs b > 1, got {}", b));
    }
    if (!(fidelity_mean >= (2 * b - 1) * (1 - kIntegerSlack))) {
        throw std::domain_error(
            fmt::format("Chebyshev bound needs E[Y] 2^n >= 2b - 1 = {}, got {}", 2 * b - 1, fidelity_mean));
    }
    double minimum = 4.0 / ((b - 1) * (b - 1));
    if (static_cast<double>(k) < minimum * (1 - kIntegerSlack)) {
        throw std::domain_error(fmt::format("Chebyshev bound needs k >= 4 (b - 1)^-2 = {}, got {}", minimum, k));
    }
}

}  // namespace

double xeb_score(const OutputDistribution &dist, const SampleSet &samples) {
    if (samples.num_qubits != dist.num_qubits) {
        throw std::invalid_argument(fmt::format(
            "sample set has {} qubits but the circuit has {}", samples.num_qubits, dist.num_qubits));
    }
    if (samples.samples.empty()) {
        throw std::invalid_argument("cannot score an empty sample set");
    }
    CompensatedSum total;
    for (Bitstring z : samples.samples) {
        if (z >= dist.probs.size()) {
            throw std::invalid_argument("sample has bits beyond the qubit count");
        }
        total.add(dist.probs[z]);
    }
    return total.value() / static_cast<double>(samples.k());
}

double xeb_score(const Circuit &circuit, const SampleSet &samples, const SimulatorOptions &options) {
    if (samples.num_qubits != circuit.num_qubits()) {
        throw std::invalid_argument(fmt::format(
            "sample set has {} qubits but the circuit has {}", samples.num_qubits, circuit.num_qubits()));
    }
    return xeb_score(full_distribution(circuit, options), samples);
}

XebReport check_xhog(const OutputDistribution &dist, const SampleSet &samples, double b, uint64_t seed) {
    if (!std::isfinite(b)) {
        throw std::invalid_argument("threshold b must be finite");
    }
    XebReport r;
    r.num_qubits = dist.num_qubits;
    r.k = samples.k();
    r.score = xeb_score(dist, samples);
    int n = static_cast<int>(dist.num_qubits);
    r.b_implied = std::ldexp(r.score, n);
    r.threshold_b = b;
    r.xhog_pass = r.score >= std::ldexp(b, -n) && samples.all_distinct();
    r.fidelity_estimate = r.b_implied - 1;
    r.seed = seed;
    return r;
}

XebReport check_xhog(const Circuit &circuit, const SampleSet &samples, double b, const SimulatorOptions &options) {
    if (samples.num_qubits != circuit.num_qubits()) {
        throw std::invalid_argument(fmt::format(
            "sample set has {} qubits but the circuit has {}", samples.num_qubits, circuit.num_qubits()));
    }
    return check_xhog(full_distribution(circuit, options), samples, b, circuit.seed());
}

uint64_t required_k(double b, double s) {
    if (!(b > 1) || !std::isfinite(b)) {
        throw std::domain_error(fmt::format("required_k needs b > 1, got {}", b));
    }
    if (!(s > 0.5 + 0.5 / b) || !(s <= 1)) {
        throw std::domain_error(fmt::format("required_k needs 1/2 + 1/(2b) < s <= 1, got s = {}", s));
    }
    return ceil_count(1.0 / (((2 * s - 1) * b - 1) * (b - 1)));
}

uint64_t required_k_chebyshev(double b) {
    if (!(b > 1) || !std::isfinite(b)) {
        throw std::domain_error(fmt::format("required_k needs b > 1, got {}", b));
    }
    return ceil_count(4.0 / ((b - 1) * (b - 1)));
}

double chebyshev_success_bound(double b, uint64_t k, double fidelity_mean) {
    check_chebyshev_premises(b, k, fidelity_mean);
    double kk = static_cast<double>(k);
    return std::max(0.0, 1.0 - 2.0 / ((b - 1) * (b - 1) * kk * kk));
}

double chebyshev_success_bound_from_variance(double b, uint64_t k, double fidelity_mean) {
    check_chebyshev_premises(b, k, fidelity_mean);
    return std::max(0.0, 1.0 - 2.0 / ((b - 1) * (b - 1) * static_cast<double>(k)));
}

std::string format_report_text(const XebReport &r) {
    return fmt::format(
        "n={}\nk={}\nscore={:.17g}\nb_implied={:.17g}\nthreshold_b={:.17g}\nxhog_pass={}\n"
        "fidelity_estimate={:.17g}\nseed={}\n",
        r.num_qubits, r.k, r.score, r.b_implied, r.threshold_b, r.xhog_pass ? 1 : 0, r.fidelity_estimate, r.seed);
}

std::string report_csv_header() {
    return "n,k,score,b_implied,threshold_b,xhog_pass,fidelity_estimate,seed\n";
}

std::string format_report_csv(const XebReport &r) {
    return fmt::format("{},{},{:.17g},{:.17g},{:.17g},{},{:.17g},{}\n", r.num_qubits, r.k, r.score, r.b_implied,
                       r.threshold_b, r.xhog_pass ? 1 : 0, r.fidelity_estimate, r.seed);
}

}  // namespace xeblab
