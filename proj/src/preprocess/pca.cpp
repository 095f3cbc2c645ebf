// SPDX-License-Identifier: Apache-2.0
#include <Eigen/SVD>
#include <cmath>

#include "qelm/preprocess.hpp"
#include "qelm/simd/kernels.hpp"

namespace qelm::preprocess {

PcaModel pca_fit(const Eigen::MatrixXd& rows, std::size_t M) {
    const auto n = static_cast<std::size_t>(rows.rows());
    const auto bins = static_cast<std::size_t>(rows.cols());
    if (M == 0) throw ConfigError("pca: need at least one component");
    if (M > std::min(n, bins))
        throw ConfigError("pca: " + std::to_string(M) + " components requested but data is " + std::to_string(n) +
                          " samples x " + std::to_string(bins) + " bins");
    if (!rows.allFinite()) throw NumericalError("pca: non-finite input");

    PcaModel model;
    model.mean = rows.colwise().mean().transpose();
    const Eigen::MatrixXd centered = rows.rowwise() - model.mean.transpose();

    // Full V is needed when M exceeds the thin size, so ask for it when bins are few.
    const bool full = bins <= n;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, full ? Eigen::ComputeFullV : Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const Eigen::MatrixXd& V = svd.matrixV();
    const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;

    model.components.resize(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(bins));
    model.explained_variance.resize(static_cast<Eigen::Index>(M));
    for (std::size_t k = 0; k < M; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        Eigen::VectorXd v = V.col(kk);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0.0) v = -v;
        model.components.row(kk) = v.transpose();
        const double s = kk < sv.size() ? sv(kk) : 0.0;
        model.explained_variance(kk) = s * s / denom;
    }
    model.total_variance = sv.squaredNorm() / denom;
    return model;
}

Eigen::VectorXd pca_transform(const PcaModel& model, std::span<const double> row) {
    if (row.size() != model.bins())
        throw ConfigError("pca_transform: row has " + std::to_string(row.size()) + " bins, model expects " +
                          std::to_string(model.bins()));
    const auto& k = simd::active_kernels();
    std::vector<double> centered(row.begin(), row.end());
    k.axpy(-1.0, model.mean.data(), centered.data(), centered.size());
    // components is column-major; copy each row so the kernel sees contiguous data
    Eigen::VectorXd out(model.components.rows());
    Eigen::VectorXd comp(model.components.cols());
    for (Eigen::Index m = 0; m < model.components.rows(); ++m) {
        comp = model.components.row(m).transpose();
        out(m) = k.dot(comp.data(), centered.data(), centered.size());
    }
    return out;
}

Eigen::VectorXd pca_inverse(const PcaModel& model, std::span<const double> comps) {
    if (comps.size() != model.size())
        throw ConfigError("pca_inverse: got " + std::to_string(comps.size()) + " components, model has " +
                          std::to_string(model.size()));
    const auto& k = simd::active_kernels();
    Eigen::VectorXd out = model.mean;
    Eigen::VectorXd comp(model.components.cols());
    for (std::size_t m = 0; m < comps.size(); ++m) {
        comp = model.components.row(static_cast<Eigen::Index>(m)).transpose();
        k.axpy(comps[m], comp.data(), out.data(), static_cast<std::size_t>(out.size()));
    }
    return out;
}

Eigen::MatrixXd pca_reconstruct(const PcaModel& model, const Eigen::MatrixXd& rows) {
    if (static_cast<std::size_t>(rows.cols()) != model.bins()) throw ConfigError("pca_reconstruct: bin count mismatch");
    const Eigen::MatrixXd centered = rows.rowwise() - model.mean.transpose();
    const Eigen::MatrixXd scores = centered * model.components.transpose();
    Eigen::MatrixXd out = scores * model.components;
    out.rowwise() += model.mean.transpose();
    return out;
}

Eigen::MatrixXd pca_filter(const Eigen::MatrixXd& rows, std::size_t k) {
    if (static_cast<std::size_t>(rows.rows()) <= k)
        throw ConfigError("pca_filter: need more than " + std::to_string(k) + " samples");
    return pca_reconstruct(pca_fit(rows, k), rows);
}

std::vector<double> cumulative_explained_variance(const PcaModel& model) {
    std::vector<double> out(model.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        acc += model.explained_variance(static_cast<Eigen::Index>(i));
        out[i] = model.total_variance > 0.0 ? std::min(acc / model.total_variance, 1.0) : 1.0;
    }
    return out;
}

} // namespace qelm::preprocess
