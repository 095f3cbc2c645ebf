// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qelm/forwardmodel.hpp"

namespace qelm::preprocess {

/// Piecewise-linear resampling of depths onto `target`. Throws ConfigError
/// if any target point lies outside [source.front(), source.back()].
std::vector<double> interpolate(std::span<const double> source_grid, std::span<const double> depths,
                                std::span<const double> target);
forward::Spectrum interpolate(const forward::Spectrum& spectrum, std::span<const double> target);

struct PatchLayout {
    std::vector<double> edges; // micrometres, strictly increasing

    std::size_t size() const noexcept { return edges.empty() ? 0 : edges.size() - 1; }
    void validate() const;

    static PatchLayout taurex(); // 14 patches over [0.3, 50]
    static PatchLayout jwst();   // 8 patches over [0.6, 2.8]
};

/// [begin, end) bin index range per patch. Bins on an interior edge go to
/// the right-hand patch; the last patch also takes its upper edge.
std::vector<std::pair<std::size_t, std::size_t>> patch_ranges(std::span<const double> wavelengths,
                                                              const PatchLayout& layout);
std::vector<std::vector<double>> split_patches(const forward::Spectrum& spectrum, const PatchLayout& layout);

/// Min-max scaling to [0, 1]; a constant patch maps to zeros.
std::vector<double> normalize_patch(std::span<const double> v);

struct PcaModel {
    Eigen::VectorXd mean;               // bins
    Eigen::MatrixXd components;         // M x bins, orthonormal rows
    Eigen::VectorXd explained_variance; // M, descending
    double total_variance = 0.0;        // over all directions

    std::size_t size() const noexcept { return static_cast<std::size_t>(components.rows()); }
    std::size_t bins() const noexcept { return static_cast<std::size_t>(mean.size()); }
};

/// rows: samples x bins. Throws ConfigError unless 1 <= M <= min(samples, bins).
PcaModel pca_fit(const Eigen::MatrixXd& rows, std::size_t M);
Eigen::VectorXd pca_transform(const PcaModel& model, std::span<const double> row);
Eigen::VectorXd pca_inverse(const PcaModel& model, std::span<const double> comps);
/// Rank-k reconstruction of every row under an already fitted model.
Eigen::MatrixXd pca_reconstruct(const PcaModel& model, const Eigen::MatrixXd& rows);
/// Fit k components on `rows` and return their reconstruction. Needs samples > k.
Eigen::MatrixXd pca_filter(const Eigen::MatrixXd& rows, std::size_t k = 10);
std::vector<double> cumulative_explained_variance(const PcaModel& model);

/// (max, min, mean) of the depths.
std::array<double, 3> global_features(std::span<const double> depths);

enum class Mode { taurex, jwst, njwst, fjwst };
Mode parse_mode(std::string_view text);
std::string_view mode_name(Mode mode) noexcept;
constexpr bool uses_jwst_grid(Mode m) noexcept { return m != Mode::taurex; }
constexpr bool uses_noise(Mode m) noexcept { return m == Mode::njwst || m == Mode::fjwst; }

inline constexpr std::size_t kJwstBins = 160;
inline constexpr double kJwstMin = 0.6;
inline constexpr double kJwstMax = 2.8;
/// 160 bins uniform in log10(lambda) over [0.6, 2.8] um.
std::vector<double> jwst_grid();

/// X for one spectrum: patch rows of length M, then (max, min, mean).
using FeatureMatrix = std::vector<std::vector<double>>;

/// X for many spectra, one block per reservoir: block i is dim_i x samples.
struct FeatureSet {
    std::vector<Eigen::MatrixXd> blocks;
    std::size_t samples() const noexcept { return blocks.empty() ? 0 : static_cast<std::size_t>(blocks[0].cols()); }
    FeatureMatrix sample(std::size_t j) const;
};

struct FeatureConfig {
    Mode mode = Mode::jwst;
    PatchLayout layout = PatchLayout::jwst();
    std::size_t components = 5;
    std::size_t filter_components = 10;
};

/// Working grid for a mode: the dataset grid (taurex) or the JWST grid.
std::vector<double> working_grid(Mode mode, std::span<const double> dataset_grid);
/// Rows = selected spectra resampled onto `grid`.
Eigen::MatrixXd to_working_rows(const forward::SpectralDataset& ds, std::span<const std::size_t> indices,
                                std::span<const double> grid);

/// Filter, patch, normalisation and per-patch PCA, fitted on training rows only.
class FeaturePipeline {
public:
    FeaturePipeline() = default;

    static FeaturePipeline fit(const FeatureConfig& config, std::vector<double> grid, const Eigen::MatrixXd& train_rows);

    /// rows on the working grid (samples x bins).
    FeatureSet transform(const Eigen::MatrixXd& rows) const;
    /// One spectrum given on any grid covering the working grid.
    FeatureMatrix assemble(const forward::Spectrum& spectrum) const;

    const FeatureConfig& config() const noexcept { return config_; }
    const std::vector<double>& grid() const noexcept { return grid_; }
    const std::optional<PcaModel>& filter() const noexcept { return filter_; }
    const std::vector<PcaModel>& patch_models() const noexcept { return patch_models_; }
    const std::vector<std::pair<std::size_t, std::size_t>>& ranges() const noexcept { return ranges_; }

private:
    Eigen::MatrixXd filtered(const Eigen::MatrixXd& rows) const;

    FeatureConfig config_;
    std::vector<double> grid_;
    std::vector<std::pair<std::size_t, std::size_t>> ranges_;
    std::optional<PcaModel> filter_;
    std::vector<PcaModel> patch_models_;
};

} // namespace qelm::preprocess
