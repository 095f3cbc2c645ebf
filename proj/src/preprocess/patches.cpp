// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "qelm/preprocess.hpp"

namespace qelm::preprocess {

void PatchLayout::validate() const {
    if (edges.size() < 2) throw ConfigError("patch layout needs at least two edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (!std::isfinite(edges[i])) throw ConfigError("patch edge " + std::to_string(i) + " is not finite");
        if (i > 0 && !(edges[i] > edges[i - 1])) throw ConfigError("patch edges must be strictly increasing");
    }
}

PatchLayout PatchLayout::taurex() {
    return {{0.3, 0.6, 0.9, 1.15, 1.3, 1.5, 1.8, 2.1, 2.5, 3.0, 3.6, 4.5, 5.5, 8.0, 50.0}};
}

PatchLayout PatchLayout::jwst() { return {{0.6, 0.9, 1.15, 1.3, 1.5, 1.8, 2.1, 2.5, 2.8}}; }

std::vector<std::pair<std::size_t, std::size_t>> patch_ranges(std::span<const double> wavelengths,
                                                              const PatchLayout& layout) {
    layout.validate();
    if (wavelengths.empty()) throw ConfigError("patch_ranges: empty grid");
    if (wavelengths.front() < layout.edges.front() || wavelengths.back() > layout.edges.back())
        throw ConfigError("patch layout [" + format_double(layout.edges.front()) + ", " +
                          format_double(layout.edges.back()) + "] does not cover the spectrum grid");
    const std::size_t np = layout.size();
    std::vector<std::pair<std::size_t, std::size_t>> out(np);
    std::size_t begin = 0;
    for (std::size_t p = 0; p < np; ++p) {
        std::size_t end;
        if (p + 1 == np) {
            end = wavelengths.size();
        } else {
            auto it = std::lower_bound(wavelengths.begin(), wavelengths.end(), layout.edges[p + 1]);
            end = static_cast<std::size_t>(it - wavelengths.begin());
        }
        if (end <= begin)
            throw ConfigError("patch " + std::to_string(p) + " [" + format_double(layout.edges[p]) + ", " +
                              format_double(layout.edges[p + 1]) + "] contains no bins");
        out[p] = {begin, end};
        begin = end;
    }
    return out;
}

std::vector<std::vector<double>> split_patches(const forward::Spectrum& spectrum, const PatchLayout& layout) {
    const auto ranges = patch_ranges(spectrum.wavelengths, layout);
    std::vector<std::vector<double>> out;
    out.reserve(ranges.size());
    for (auto [b, e] : ranges) out.emplace_back(spectrum.depths.begin() + b, spectrum.depths.begin() + e);
    return out;
}

std::vector<double> normalize_patch(std::span<const double> v) {
    if (v.empty()) throw ConfigError("normalize_patch: empty patch");
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    const double lo = *mn;
    const double range = *mx - lo;
    std::vector<double> out(v.size(), 0.0);
    if (range > 0.0)
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::clamp((v[i] - lo) / range, 0.0, 1.0);
    return out;
}

std::array<double, 3> global_features(std::span<const double> depths) {
    if (depths.empty()) throw ConfigError("global_features: empty spectrum");
    const auto [mn, mx] = std::minmax_element(depths.begin(), depths.end());
    double sum = 0.0;
    for (double d : depths) sum += d;
    return {*mx, *mn, sum / static_cast<double>(depths.size())};
}

} // namespace qelm::preprocess
