// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qelm/forwardmodel.hpp"

namespace qelm::forward {

ParameterBounds reference_bounds() {
    return {{
        {1e-8, 1e-1},
        {1e-8, 1e-1},
        {1e-8, 1e-1},
        {1e-8, 1e-1},
        {0.8, 2.0},
        {0.8, 1.5},
        {1000.0, 2000.0},
    }};
}

namespace {

std::array<double, kGridPoints> linspace10(double lo, double hi) {
    std::array<double, kGridPoints> out{};
    const double step = (hi - lo) / static_cast<double>(kGridPoints - 1);
    for (std::size_t i = 0; i < kGridPoints; ++i) out[i] = lo + static_cast<double>(i) * step;
    out.back() = hi;
    return out;
}

} // namespace

ParameterGrid build_grid(const ParameterBounds& bounds) {
    ParameterGrid grid;
    for (std::size_t k = 0; k < kNumParams; ++k) {
        const auto [lo, hi] = bounds[k];
        const std::string name(kParamNames[k]);
        if (!std::isfinite(lo) || !std::isfinite(hi))
            throw ConfigError("bounds for " + name + " are not finite");
        if (!(lo < hi)) throw ConfigError("bounds for " + name + " are empty or inverted");
        if (is_abundance(static_cast<Param>(k))) {
            if (lo <= 0.0) throw ConfigError("VMR bounds for " + name + " must be positive");
            grid.values[k] = linspace10(std::log10(lo), std::log10(hi));
        } else {
            grid.values[k] = linspace10(lo, hi);
        }
    }
    return grid;
}

AtmosphericParams sample_params(const ParameterGrid& grid, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, kGridPoints - 1);
    std::array<double, kNumParams> v{};
    for (std::size_t k = 0; k < kNumParams; ++k) v[k] = grid.values[k][pick(rng)];
    return AtmosphericParams::from_array(v);
}

void check_in_bounds(const AtmosphericParams& params, const ParameterBounds& bounds) {
    const auto v = params.to_array();
    for (std::size_t k = 0; k < kNumParams; ++k) {
        double lo = bounds[k].low;
        double hi = bounds[k].high;
        if (is_abundance(static_cast<Param>(k))) {
            lo = std::log10(lo);
            hi = std::log10(hi);
        }
        // Grid points are computed in floating point; allow a few ulps.
        const double slack = 1e-12 * std::max(std::abs(lo), std::abs(hi));
        if (!(v[k] >= lo - slack && v[k] <= hi + slack))
            throw ConfigError(std::string(kParamNames[k]) + " = " + format_double(v[k]) + " outside [" +
                              format_double(lo) + ", " + format_double(hi) + "]");
    }
}

} // namespace qelm::forward
