// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <string>

#include "qelm/preprocess.hpp"

namespace qelm::preprocess {

Mode parse_mode(std::string_view text) {
    if (text == "taurex") return Mode::taurex;
    if (text == "jwst") return Mode::jwst;
    if (text == "njwst") return Mode::njwst;
    if (text == "fjwst") return Mode::fjwst;
    throw ConfigError("unknown mode '" + std::string(text) + "' (expected taurex, jwst, njwst or fjwst)");
}

std::string_view mode_name(Mode mode) noexcept {
    switch (mode) {
    case Mode::taurex: return "taurex";
    case Mode::jwst: return "jwst";
    case Mode::njwst: return "njwst";
    case Mode::fjwst: return "fjwst";
    }
    return "?";
}

std::vector<double> jwst_grid() { return forward::default_wavelength_grid(kJwstBins, kJwstMin, kJwstMax); }

std::vector<double> working_grid(Mode mode, std::span<const double> dataset_grid) {
    if (uses_jwst_grid(mode)) return jwst_grid();
    return {dataset_grid.begin(), dataset_grid.end()};
}

Eigen::MatrixXd to_working_rows(const forward::SpectralDataset& ds, std::span<const std::size_t> indices,
                                std::span<const double> grid) {
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(indices.size()), static_cast<Eigen::Index>(grid.size()));
    const bool same = std::equal(grid.begin(), grid.end(), ds.wavelengths.begin(), ds.wavelengths.end());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const auto& depths = ds.records.at(indices[r]).depths;
        const auto row = same ? depths : interpolate(ds.wavelengths, depths, grid);
        for (std::size_t c = 0; c < grid.size(); ++c)
            rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
    return rows;
}

FeatureMatrix FeatureSet::sample(std::size_t j) const {
    FeatureMatrix out;
    out.reserve(blocks.size());
    for (const auto& b : blocks) {
        const Eigen::VectorXd col = b.col(static_cast<Eigen::Index>(j));
        out.emplace_back(col.data(), col.data() + col.size());
    }
    return out;
}

namespace {

std::vector<double> row_vector(const Eigen::MatrixXd& m, Eigen::Index r, std::size_t b, std::size_t e) {
    std::vector<double> v(e - b);
    for (std::size_t c = b; c < e; ++c) v[c - b] = m(r, static_cast<Eigen::Index>(c));
    return v;
}

} // namespace

FeaturePipeline FeaturePipeline::fit(const FeatureConfig& config, std::vector<double> grid,
                                     const Eigen::MatrixXd& train_rows) {
    if (train_rows.rows() == 0) throw ConfigError("feature pipeline: empty training set");
    if (static_cast<std::size_t>(train_rows.cols()) != grid.size())
        throw ConfigError("feature pipeline: training rows do not match the working grid");
    FeaturePipeline fp;
    fp.config_ = config;
    fp.grid_ = std::move(grid);
    fp.ranges_ = patch_ranges(fp.grid_, config.layout);

    if (config.mode == Mode::fjwst) {
        if (static_cast<std::size_t>(train_rows.rows()) <= config.filter_components)
            throw ConfigError("filter needs more than " + std::to_string(config.filter_components) + " training spectra");
        fp.filter_ = pca_fit(train_rows, config.filter_components);
    }
    const Eigen::MatrixXd rows = fp.filtered(train_rows);

    for (std::size_t p = 0; p < fp.ranges_.size(); ++p) {
        const auto [b, e] = fp.ranges_[p];
        if (config.components > e - b)
            throw ConfigError("patch " + std::to_string(p) + " has " + std::to_string(e - b) + " bins, fewer than M = " +
                              std::to_string(config.components));
        Eigen::MatrixXd patch(rows.rows(), static_cast<Eigen::Index>(e - b));
        for (Eigen::Index r = 0; r < rows.rows(); ++r) {
            const auto v = normalize_patch(row_vector(rows, r, b, e));
            for (std::size_t c = 0; c < v.size(); ++c) patch(r, static_cast<Eigen::Index>(c)) = v[c];
        }
        fp.patch_models_.push_back(pca_fit(patch, config.components));
    }
    return fp;
}

Eigen::MatrixXd FeaturePipeline::filtered(const Eigen::MatrixXd& rows) const {
    return filter_ ? pca_reconstruct(*filter_, rows) : rows;
}

FeatureSet FeaturePipeline::transform(const Eigen::MatrixXd& rows_in) const {
    if (patch_models_.empty()) throw ConfigError("feature pipeline used before fit");
    if (static_cast<std::size_t>(rows_in.cols()) != grid_.size())
        throw ConfigError("feature pipeline: rows do not match the working grid");
    const Eigen::MatrixXd rows = filtered(rows_in);
    const Eigen::Index n = rows.rows();
    const std::size_t M = config_.components;

    FeatureSet out;
    out.blocks.reserve(ranges_.size() + 1);
    for (std::size_t p = 0; p < ranges_.size(); ++p) {
        const auto [b, e] = ranges_[p];
        Eigen::MatrixXd block(static_cast<Eigen::Index>(M), n);
        for (Eigen::Index r = 0; r < n; ++r)
            block.col(r) = pca_transform(patch_models_[p], normalize_patch(row_vector(rows, r, b, e)));
        out.blocks.push_back(std::move(block));
    }
    Eigen::MatrixXd global(3, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto g = global_features(row_vector(rows, r, 0, grid_.size()));
        global.col(r) = Eigen::Vector3d(g[0], g[1], g[2]);
    }
    out.blocks.push_back(std::move(global));
    return out;
}

FeatureMatrix FeaturePipeline::assemble(const forward::Spectrum& spectrum) const {
    const auto depths = interpolate(spectrum.wavelengths, spectrum.depths, grid_);
    Eigen::MatrixXd row(1, static_cast<Eigen::Index>(depths.size()));
    for (std::size_t c = 0; c < depths.size(); ++c) row(0, static_cast<Eigen::Index>(c)) = depths[c];
    return transform(row).sample(0);
}

} // namespace qelm::preprocess
