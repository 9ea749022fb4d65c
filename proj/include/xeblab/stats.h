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

#ifndef XEBLAB_STATS_H
#define XEBLAB_STATS_H

#include <cstddef>
#include <span>

namespace xeblab {

/// Neumaier-compensated running sum.
class CompensatedSum {
   public:
    void add(double x);
    double value() const {
        return sum_ + compensation_;
    }

   private:
    double sum_ = 0;
    double compensation_ = 0;
};

double compensated_sum(std::span<const double> values);

struct MeanEstimate {
    double mean = 0;
    /// Unbiased sample variance (n - 1 denominator). Zero for fewer than two values.
    double variance = 0;
    /// sqrt(variance / n).
    double standard_error = 0;
    size_t count = 0;
};

MeanEstimate estimate_mean(std::span<const double> values);

/// Least-squares fit y = intercept + slope * x.
struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
};

LinearFit fit_line(std::span<const double> xs, std::span<const double> ys);

}  // namespace xeblab

#endif
