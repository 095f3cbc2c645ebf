// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include "qelm/qreservoir.hpp"

namespace qelm::quantum {

std::vector<double> sample_probabilities(std::span<const double> p, std::uint64_t shots, Rng& rng) {
    if (shots == 0) throw ConfigError("sample_probabilities: shots must be at least 1");
    if (p.empty()) throw ConfigError("sample_probabilities: empty distribution");
    double total = 0.0;
    for (double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw NumericalError("sample_probabilities: invalid probability");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) throw NumericalError("sample_probabilities: probabilities do not sum to 1");

    // Sequential conditional binomials give an exact multinomial draw.
    std::vector<double> out(p.size(), 0.0);
    std::uint64_t remaining = shots;
    double rest = total;
    const double inv = 1.0 / static_cast<double>(shots);
    for (std::size_t m = 0; m + 1 < p.size() && remaining > 0; ++m) {
        std::uint64_t k = 0;
        if (p[m] > 0.0) {
            const double q = rest > 0.0 ? std::min(1.0, p[m] / rest) : 1.0;
            std::binomial_distribution<std::uint64_t> binom(remaining, q);
            k = binom(rng);
        }
        out[m] = static_cast<double>(k) * inv;
        remaining -= k;
        rest -= p[m];
    }
    out.back() += static_cast<double>(remaining) * inv;
    return out;
}

std::string Shots::to_string() const { return is_infinite() ? "inf" : std::to_string(count); }

Shots Shots::parse(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
    if (text == "inf" || text == "infinite") return infinite();
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || v == 0)
        throw ConfigError("shots must be a positive integer or 'inf', got '" + std::string(text) + "'");
    return {v};
}

} // namespace qelm::quantum
