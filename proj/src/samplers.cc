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

#include "xeblab/samplers.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "xeblab/errors.h"
#include "xeblab/rng.h"

namespace xeblab {

namespace {

// Stream ids under a sampler seed.
constexpr uint64_t kCoinStream = 1;
constexpr uint64_t kIdealStream = 2;
constexpr uint64_t kUniformStream = 3;
constexpr uint64_t kFallbackStream = 4;

// Largest n for which the without-replacement fallback may allocate 2^n weights.
constexpr size_t kMaxFallbackQubits = 26;

/// Binary indexed tree over nonnegative weights supporting removal and
/// sampling proportional to weight.
class WeightTree {
   public:
    explicit WeightTree(const std::vector<double> &weights) : tree_(weights.size() + 1, 0.0) {
        for (size_t i = 0; i < weights.size(); i++) {
            tree_[i + 1] = weights[i];
        }
        for (size_t i = 1; i < tree_.size(); i++) {
            size_t parent = i + (i & -i);
            if (parent < tree_.size()) {
                tree_[parent] += tree_[i];
            }
        }
        top_ = 1;
        while (top_ * 2 < tree_.size()) {
            top_ *= 2;
        }
    }

    void add(size_t index, double delta) {
        for (size_t i = index + 1; i < tree_.size(); i += i & -i) {
            tree_[i] += delta;
        }
    }

    double total() const {
        double t = 0;
        for (size_t i = tree_.size() - 1; i > 0; i -= i & -i) {
            t += tree_[i];
        }
        return t;
    }

    /// Smallest index whose prefix sum exceeds target.
    size_t find(double target) const {
        size_t pos = 0;
        for (size_t step = top_; step > 0; step /= 2) {
            if (pos + step < tree_.size() && tree_[pos + step] <= target) {
                pos += step;
                target -= tree_[pos];
            }
        }
        return std::min(pos, tree_.size() - 2);
    }

   private:
    std::vector<double> tree_;
    size_t top_;
};

class MixtureSampler {
   public:
    MixtureSampler(const OutputDistribution *ideal, size_t n, double fidelity, uint64_t seed)
        : ideal_(ideal),
          n_(n),
          fidelity_(fidelity),
          seed_(seed),
          coin_(seed, kCoinStream),
          ideal_rng_(seed, kIdealStream),
          uniform_rng_(seed, kUniformStream) {
        if (ideal_ != nullptr && fidelity_ > 0) {
            cdf_.resize(ideal_->probs.size());
            std::partial_sum(ideal_->probs.begin(), ideal_->probs.end(), cdf_.begin());
        }
    }

    SampleSet draw(size_t k, bool distinct) {
        if (k == 0) {
            throw std::invalid_argument("k must be at least 1");
        }
        SampleSet out;
        out.num_qubits = n_;
        out.distinct = distinct;
        out.samples.reserve(k);
        if (!distinct) {
            for (size_t i = 0; i < k; i++) {
                out.samples.push_back(draw_one());
            }
            return out;
        }

        if (k > support_size()) {
            throw std::invalid_argument(
                fmt::format("cannot draw {} distinct strings from a support of {}", k, support_size()));
        }
        std::unordered_set<Bitstring> seen;
        seen.reserve(2 * k);
        size_t attempts = 0;
        const size_t budget = 32 * k + 1024;
        while (out.samples.size() < k && attempts < budget) {
            attempts++;
            Bitstring z = draw_one();
            if (seen.insert(z).second) {
                out.samples.push_back(z);
            }
        }
        if (out.samples.size() < k) {
            finish_without_replacement(out, seen, k);
        }
        return out;
    }

   private:
    Bitstring draw_one() {
        if (coin_.uniform() < fidelity_) {
            double u = ideal_rng_.uniform() * cdf_.back();
            auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
            return static_cast<Bitstring>(std::min<size_t>(it - cdf_.begin(), cdf_.size() - 1));
        }
        Bitstring z = uniform_rng_.next_u64();
        return n_ >= 64 ? z : z & ((Bitstring{1} << n_) - 1);
    }

    double support_size() const {
        if (fidelity_ < 1 || ideal_ == nullptr) {
            return std::ldexp(1.0, static_cast<int>(n_));
        }
        return static_cast<double>(
            std::count_if(ideal_->probs.begin(), ideal_->probs.end(), [](double p) { return p > 0; }));
    }

    void finish_without_replacement(SampleSet &out, std::unordered_set<Bitstring> &seen, size_t k) {
        if (n_ > kMaxFallbackQubits) {
            throw ResourceError("distinct sampling stalled and the support is too large to enumerate");
        }
        const size_t size = size_t{1} << n_;
        const double uniform_weight = (1.0 - fidelity_) / static_cast<double>(size);
        std::vector<double> weights(size, uniform_weight);
        if (ideal_ != nullptr && fidelity_ > 0) {
            for (size_t i = 0; i < size; i++) {
                weights[i] += fidelity_ * ideal_->probs[i];
            }
        }
        for (Bitstring z : seen) {
            weights[z] = 0;
        }
        WeightTree tree(weights);
        Rng rng(seed_, kFallbackStream);
        while (out.samples.size() < k) {
            size_t i = tree.find(rng.uniform() * tree.total());
            if (weights[i] <= 0) {
                continue;
            }
            tree.add(i, -weights[i]);
            weights[i] = 0;
            seen.insert(i);
            out.samples.push_back(i);
        }
    }

    const OutputDistribution *ideal_;
    size_t n_;
    double fidelity_;
    uint64_t seed_;
    Rng coin_;
    Rng ideal_rng_;
    Rng uniform_rng_;
    std::vector<double> cdf_;
};

}  // namespace

bool SampleSet::all_distinct() const {
    std::vector<Bitstring> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

NoiseModel::NoiseModel(double fidelity) : fidelity_(fidelity) {
    if (!(fidelity >= 0 && fidelity <= 1)) {
        throw std::invalid_argument(fmt::format("fidelity must lie in [0, 1], got {}", fidelity));
    }
}

SampleSet sample_ideal(const OutputDistribution &dist, size_t k, uint64_t seed, bool distinct) {
    return MixtureSampler(&dist, dist.num_qubits, 1.0, seed).draw(k, distinct);
}

SampleSet sample_ideal(const Circuit &circuit, size_t k, uint64_t seed, bool distinct,
                       const SimulatorOptions &options) {
    return sample_ideal(full_distribution(circuit, options), k, seed, distinct);
}

SampleSet sample_uniform(size_t num_qubits, size_t k, uint64_t seed, bool distinct) {
    if (num_qubits > kMaxCircuitQubits) {
        throw std::invalid_argument("at most 64 qubits are supported");
    }
    return MixtureSampler(nullptr, num_qubits, 0.0, seed).draw(k, distinct);
}

SampleSet sample_depolarizing(const OutputDistribution &dist, NoiseModel noise, size_t k, uint64_t seed,
                              bool distinct) {
    return MixtureSampler(&dist, dist.num_qubits, noise.fidelity(), seed).draw(k, distinct);
}

SampleSet sample_depolarizing(const Circuit &circuit, NoiseModel noise, size_t k, uint64_t seed, bool distinct,
                              const SimulatorOptions &options) {
    return sample_depolarizing(full_distribution(circuit, options), noise, k, seed, distinct);
}

SampleSet sample_top_k(const OutputDistribution &dist, size_t k) {
    if (k == 0 || k > dist.probs.size()) {
        throw std::invalid_argument(fmt::format("top-k needs 1 <= k <= 2^n, got k = {}", k));
    }
    std::vector<Bitstring> order(dist.probs.size());
    std::iota(order.begin(), order.end(), Bitstring{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](Bitstring a, Bitstring b) {
                          if (dist.probs[a] != dist.probs[b]) {
                              return dist.probs[a] > dist.probs[b];
                          }
                          return a < b;
                      });
    order.resize(k);
    return SampleSet{dist.num_qubits, std::move(order), true};
}

SampleSet sample_top_k(const Circuit &circuit, size_t k, const SimulatorOptions &options) {
    return sample_top_k(full_distribution(circuit, options), k);
}

std::string serialize_sample_set(const SampleSet &set) {
    std::string out = fmt::format("n {} k {} distinct {}\n", set.num_qubits, set.k(), set.distinct ? 1 : 0);
    out.reserve(out.size() + set.k() * (set.num_qubits + 1));
    for (Bitstring z : set.samples) {
        out += format_bitstring(z, set.num_qubits);
        out += '\n';
    }
    return out;
}

SampleSet parse_sample_set(std::string_view text) {
    size_t line_no = 0;
    size_t pos = 0;
    auto next_line = [&](std::string_view &line) {
        while (pos < text.size()) {
            size_t end = text.find('\n', pos);
            if (end == std::string_view::npos) {
                end = text.size();
            }
            line = text.substr(pos, end - pos);
            pos = end + 1;
            line_no++;
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
                line.remove_suffix(1);
            }
            while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
                line.remove_prefix(1);
            }
            if (!line.empty()) {
                return true;
            }
        }
        return false;
    };

    std::string_view header;
    if (!next_line(header)) {
        throw ParseError(1, "missing 'n <n> k <k> distinct <0|1>' header");
    }
    size_t n = 0, k = 0;
    int distinct = 0;
    char trailing = 0;
    std::string header_text(header);
    if (std::sscanf(header_text.c_str(), "n %zu k %zu distinct %d %c", &n, &k, &distinct, &trailing) != 3 ||
        (distinct != 0 && distinct != 1)) {
        throw ParseError(line_no, "expected 'n <n> k <k> distinct <0|1>'");
    }
    if (n > kMaxCircuitQubits) {
        throw ParseError(line_no, "at most 64 qubits are supported");
    }
    SampleSet out;
    out.num_qubits = n;
    out.distinct = distinct == 1;
    out.samples.reserve(std::min<size_t>(k, size_t{1} << 20));
    std::string_view line;
    while (next_line(line)) {
        if (line.size() != n) {
            throw ParseError(line_no, fmt::format("bitstring has length {}, expected {}", line.size(), n));
        }
        try {
            out.samples.push_back(parse_bitstring(line));
        } catch (const std::invalid_argument &e) {
            throw ParseError(line_no, e.what());
        }
    }
    if (out.samples.size() != k) {
        throw ParseError(line_no, fmt::format("header announces {} samples, found {}", k, out.samples.size()));
    }
    if (out.distinct && !out.all_distinct()) {
        throw ParseError(line_no, "set is marked distinct but contains duplicates");
    }
    return out;
}

}  // namespace xeblab
