// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qelm/eval.hpp"

namespace qelm::eval {

double median(std::vector<double> v) {
    if (v.empty()) throw ConfigError("median of an empty set");
    const std::size_t n = v.size();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (n % 2 == 1) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

BootstrapInterval bootstrap_group(std::span<const double> predictions, std::size_t B, double level, Rng& rng) {
    if (predictions.empty()) throw ConfigError("bootstrap: empty group");
    if (B < 100) throw ConfigError("bootstrap: need at least 100 resamples");
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("bootstrap: level must lie in (0, 1)");
    const std::size_t n = predictions.size();
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<double> sample(n);
    std::vector<double> medians(B);
    for (std::size_t b = 0; b < B; ++b) {
        for (auto& s : sample) s = predictions[pick(rng)];
        medians[b] = median(sample);
    }
    std::sort(medians.begin(), medians.end());
    // nearest rank: the ceil(q B)-th smallest
    const auto rank = [&](double q) {
        const auto r = static_cast<std::size_t>(std::ceil(q * static_cast<double>(B) - 1e-9));
        return medians[std::clamp<std::size_t>(r, 1, B) - 1];
    };
    const double tail = 0.5 * (1.0 - level);
    BootstrapInterval out;
    out.count = n;
    out.median = median(std::vector<double>(predictions.begin(), predictions.end()));
    out.lower = rank(tail);
    out.upper = rank(1.0 - tail);
    return out;
}

std::vector<BootstrapInterval> bootstrap_estimates(const std::vector<BootstrapGroup>& groups, std::size_t B,
                                                   double level, std::uint64_t seed) {
    std::vector<BootstrapInterval> out;
    out.reserve(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].predictions.empty())
            throw ConfigError("bootstrap: group " + std::to_string(g) + " (true value " +
                              format_double(groups[g].true_value) + ") is empty");
        Rng rng(derive_seed(seed, g));
        auto iv = bootstrap_group(groups[g].predictions, B, level, rng);
        iv.true_value = groups[g].true_value;
        out.push_back(iv);
    }
    return out;
}

BootstrapResult bootstrap_predictions(const readout::MetricsReport& report, const forward::ParameterGrid& grid,
                                      std::size_t B, double level, std::uint64_t seed) {
    BootstrapResult res;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t p = 0; p < kNumParams; ++p) {
        const auto& values = grid.values[p];
        std::vector<std::vector<double>> groups(values.size());
        for (Eigen::Index j = 0; j < report.truth.cols(); ++j) {
            const double t = report.truth(static_cast<Eigen::Index>(p), j);
            for (std::size_t g = 0; g < values.size(); ++g)
                if (std::abs(t - values[g]) <= 1e-9 * std::max(1.0, std::abs(values[g]))) {
                    groups[g].push_back(report.predicted(static_cast<Eigen::Index>(p), j));
                    break;
                }
        }
        for (std::size_t g = 0; g < values.size(); ++g) {
            BootstrapInterval iv{values[g], 0, nan, nan, nan};
            if (groups[g].empty()) {
                log_warning("bootstrap: no test spectrum with " + std::string(forward::kParamNames[p]) + " = " +
                            format_double(values[g]));
            } else {
                Rng rng(derive_seed(seed, p, g));
                iv = bootstrap_group(groups[g], B, level, rng);
                iv.true_value = values[g];
            }
            res.intervals[p].push_back(iv);
        }
    }
    return res;
}

} // namespace qelm::eval
