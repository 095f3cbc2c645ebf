// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qelm/pipeline.hpp"

namespace qelm::eval {

using forward::kNumParams;

struct BootstrapGroup {
    double true_value = 0.0;
    std::vector<double> predictions;
};

struct BootstrapInterval {
    double true_value = 0.0;
    std::size_t count = 0;
    double median = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

/// Median with the two middle values averaged for even sizes.
double median(std::vector<double> values);

/// B resamples with replacement; statistic = median; nearest-rank percentile
/// interval at `level`. Throws ConfigError for an empty group or B < 100.
BootstrapInterval bootstrap_group(std::span<const double> predictions, std::size_t B, double level, Rng& rng);
/// Group g uses the stream derive_seed(seed, g).
std::vector<BootstrapInterval> bootstrap_estimates(const std::vector<BootstrapGroup>& groups, std::size_t B = 1000,
                                                   double level = 0.95, std::uint64_t seed = 4);

/// Per parameter, one interval per grid value. Grid values with no test
/// sample keep count 0 and NaN statistics and are reported with a warning.
struct BootstrapResult {
    std::array<std::vector<BootstrapInterval>, kNumParams> intervals;
};
BootstrapResult bootstrap_predictions(const readout::MetricsReport& report, const forward::ParameterGrid& grid,
                                      std::size_t B, double level, std::uint64_t seed);

struct SweepPoint {
    std::string value;
    std::array<double, kNumParams> accuracy{};
    std::uint64_t fingerprint = 0; // config hash without the swept key
    std::uint64_t config_hash = 0;
};

struct SweepResult {
    std::string variable;
    std::vector<SweepPoint> points;

    /// True when every point shares one fingerprint.
    bool consistent() const noexcept;
};

/// Accuracy at each threshold (ascending).
std::vector<double> tolerance_curve(std::span<const double> errors, std::span<const double> thresholds);
SweepResult tolerance_sweep(const readout::MetricsReport& report, std::span<const double> thresholds);

/// Config key swept by a CLI variable name: M, train_size, threshold, shots.
std::string sweep_key(std::string_view variable);

/// Called after each point with its value and full result.
using PointSink = std::function<void(const std::string& value, const pipeline::RunResult& result)>;

/// Re-runs the whole pipeline per value with only `variable` changed.
SweepResult run_sweep(const pipeline::RunConfig& base, const forward::SpectralDataset& ds, std::string_view variable,
                      const std::vector<std::string>& values, const PointSink& sink = {});

SweepResult feature_sweep(std::span<const std::size_t> M_values, const pipeline::RunConfig& base,
                          const forward::SpectralDataset& ds, const PointSink& sink = {});
SweepResult training_size_sweep(std::span<const std::size_t> sizes, const pipeline::RunConfig& base,
                                const forward::SpectralDataset& ds, const PointSink& sink = {});
SweepResult shots_comparison(std::span<const quantum::Shots> shots, const pipeline::RunConfig& base,
                             const forward::SpectralDataset& ds, const PointSink& sink = {});

/// "1..10", "1000,20000,inf" or a mix such as "1..3,8".
std::vector<std::string> expand_values(std::string_view spec);

} // namespace qelm::eval
