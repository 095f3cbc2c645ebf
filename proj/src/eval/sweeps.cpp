// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <charconv>

#include "qelm/eval.hpp"

namespace qelm::eval {

bool SweepResult::consistent() const noexcept {
    return std::all_of(points.begin(), points.end(),
                       [&](const SweepPoint& p) { return p.fingerprint == points.front().fingerprint; });
}

std::vector<double> tolerance_curve(std::span<const double> errors, std::span<const double> thresholds) {
    if (!std::is_sorted(thresholds.begin(), thresholds.end())) throw ConfigError("thresholds must be ascending");
    std::vector<double> out;
    out.reserve(thresholds.size());
    for (double t : thresholds) out.push_back(readout::accuracy(errors, t));
    return out;
}

SweepResult tolerance_sweep(const readout::MetricsReport& report, std::span<const double> thresholds) {
    SweepResult res;
    res.variable = "threshold";
    std::array<std::vector<double>, kNumParams> curves;
    for (std::size_t p = 0; p < kNumParams; ++p) curves[p] = tolerance_curve(report.parameter_errors(p), thresholds);
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        SweepPoint pt;
        pt.value = format_double(thresholds[i]);
        for (std::size_t p = 0; p < kNumParams; ++p) pt.accuracy[p] = curves[p][i];
        res.points.push_back(pt);
    }
    return res;
}

std::string sweep_key(std::string_view variable) {
    if (variable == "M") return "pca.components";
    if (variable == "train_size") return "split.train_size";
    if (variable == "threshold") return "threshold";
    if (variable == "shots") return "shots";
    throw ConfigError("unknown sweep variable '" + std::string(variable) + "' (expected M, train_size, threshold or shots)");
}

SweepResult run_sweep(const pipeline::RunConfig& base, const forward::SpectralDataset& ds, std::string_view variable,
                      const std::vector<std::string>& values, const PointSink& sink) {
    const std::string key = sweep_key(variable);
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    SweepResult res;
    res.variable = std::string(variable);
    for (const auto& v : values) {
        pipeline::RunConfig cfg = base;
        cfg.set(key, v);
        const auto run = pipeline::run_pipeline(cfg, ds);
        SweepPoint pt;
        pt.value = v;
        pt.accuracy = run.metrics.accuracy;
        pt.fingerprint = cfg.fingerprint(key);
        pt.config_hash = cfg.hash();
        res.points.push_back(pt);
        if (sink) sink(v, run);
    }
    return res;
}

namespace {

template <typename T, typename F>
std::vector<std::string> to_strings(std::span<const T> v, F f) {
    std::vector<std::string> out;
    for (const auto& x : v) out.push_back(f(x));
    return out;
}

} // namespace

SweepResult feature_sweep(std::span<const std::size_t> M_values, const pipeline::RunConfig& base,
                          const forward::SpectralDataset& ds, const PointSink& sink) {
    return run_sweep(base, ds, "M", to_strings(M_values, [](std::size_t m) { return std::to_string(m); }), sink);
}

SweepResult training_size_sweep(std::span<const std::size_t> sizes, const pipeline::RunConfig& base,
                                const forward::SpectralDataset& ds, const PointSink& sink) {
    for (std::size_t s : sizes)
        if (s < forward::kNumParams)
            throw ConfigError("training size " + std::to_string(s) + " below the number of targets");
    return run_sweep(base, ds, "train_size", to_strings(sizes, [](std::size_t s) { return std::to_string(s); }), sink);
}

SweepResult shots_comparison(std::span<const quantum::Shots> shots, const pipeline::RunConfig& base,
                             const forward::SpectralDataset& ds, const PointSink& sink) {
    return run_sweep(base, ds, "shots", to_strings(shots, [](quantum::Shots s) { return s.to_string(); }), sink);
}

std::vector<std::string> expand_values(std::string_view spec) {
    std::vector<std::string> out;
    auto trim = [](std::string_view s) {
        while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
        return s;
    };
    while (!spec.empty()) {
        const auto comma = spec.find(',');
        const std::string_view item = trim(spec.substr(0, comma));
        spec.remove_prefix(comma == std::string_view::npos ? spec.size() : comma + 1);
        if (item.empty()) throw ConfigError("empty sweep value");
        const auto dots = item.find("..");
        if (dots == std::string_view::npos) {
            out.emplace_back(item);
            continue;
        }
        long long a = 0, b = 0;
        const auto lhs = item.substr(0, dots);
        const auto rhs = item.substr(dots + 2);
        const auto r1 = std::from_chars(lhs.data(), lhs.data() + lhs.size(), a);
        const auto r2 = std::from_chars(rhs.data(), rhs.data() + rhs.size(), b);
        if (r1.ec != std::errc{} || r1.ptr != lhs.data() + lhs.size() || r2.ec != std::errc{} ||
            r2.ptr != rhs.data() + rhs.size() || a > b)
            throw ConfigError("bad sweep range '" + std::string(item) + "'");
        for (long long v = a; v <= b; ++v) out.push_back(std::to_string(v));
    }
    if (out.empty()) throw ConfigError("sweep needs at least one value");
    return out;
}

} // namespace qelm::eval
