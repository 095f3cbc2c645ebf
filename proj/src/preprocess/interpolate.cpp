// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "qelm/preprocess.hpp"

namespace qelm::preprocess {

std::vector<double> interpolate(std::span<const double> source_grid, std::span<const double> depths,
                                std::span<const double> target) {
    if (source_grid.size() != depths.size()) throw ConfigError("interpolate: grid and depth lengths differ");
    if (source_grid.size() < 2) throw ConfigError("interpolate: source grid needs two points");
    std::vector<double> out(target.size());
    for (std::size_t j = 0; j < target.size(); ++j) {
        const double x = target[j];
        if (!(x >= source_grid.front() && x <= source_grid.back()))
            throw ConfigError("interpolate: " + format_double(x) + " um lies outside the source grid [" +
                              format_double(source_grid.front()) + ", " + format_double(source_grid.back()) +
                              "]");
        auto it = std::upper_bound(source_grid.begin(), source_grid.end(), x);
        std::size_t hi = static_cast<std::size_t>(it - source_grid.begin());
        if (hi == source_grid.size()) {
            out[j] = depths.back();
            continue;
        }
        const std::size_t lo = hi - 1;
        if (x == source_grid[lo]) {
            out[j] = depths[lo];
            continue;
        }
        const double t = (x - source_grid[lo]) / (source_grid[hi] - source_grid[lo]);
        out[j] = depths[lo] + t * (depths[hi] - depths[lo]);
    }
    return out;
}

forward::Spectrum interpolate(const forward::Spectrum& spectrum, std::span<const double> target) {
    forward::Spectrum out;
    out.wavelengths.assign(target.begin(), target.end());
    out.depths = interpolate(spectrum.wavelengths, spectrum.depths, target);
    out.params = spectrum.params;
    return out;
}

} // namespace qelm::preprocess
