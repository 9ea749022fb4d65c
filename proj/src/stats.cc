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

#include "xeblab/stats.h"

#include <cmath>
#include <stdexcept>

namespace xeblab {

void CompensatedSum::add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        compensation_ += (sum_ - t) + x;
    } else {
        compensation_ += (x - t) + sum_;
    }
    sum_ = t;
}

double compensated_sum(std::span<const double> values) {
    CompensatedSum acc;
    for (double v : values) {
        acc.add(v);
    }
    return acc.value();
}

MeanEstimate estimate_mean(std::span<const double> values) {
    MeanEstimate out;
    out.count = values.size();
    if (values.empty()) {
        return out;
    }
    out.mean = compensated_sum(values) / static_cast<double>(values.size());
    if (values.size() < 2) {
        return out;
    }
    CompensatedSum sq;
    for (double v : values) {
        double d = v - out.mean;
        sq.add(d * d);
    }
    out.variance = sq.value() / static_cast<double>(values.size() - 1);
    out.standard_error = std::sqrt(out.variance / static_cast<double>(values.size()));
    return out;
}

LinearFit fit_line(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw std::invalid_argument("fit_line needs at least two paired points");
    }
    double n = static_cast<double>(xs.size());
    double mx = compensated_sum(xs) / n;
    double my = compensated_sum(ys) / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < xs.size(); i++) {
        double dx = xs[i] - mx;
        double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0) {
        throw std::invalid_argument("fit_line needs distinct x values");
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

}  // namespace xeblab
