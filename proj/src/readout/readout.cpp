// SPDX-License-Identifier: Apache-2.0
#include <Eigen/SVD>

#include "qelm/readout.hpp"

namespace qelm::readout {

Eigen::MatrixXd target_matrix(const forward::SpectralDataset& ds, std::span<const std::size_t> indices) {
    Eigen::MatrixXd Y(static_cast<Eigen::Index>(kNumParams), static_cast<Eigen::Index>(indices.size()));
    for (std::size_t j = 0; j < indices.size(); ++j) {
        const auto v = ds.records.at(indices[j]).params.to_array();
        for (std::size_t p = 0; p < kNumParams; ++p)
            Y(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(j)) = v[p];
    }
    return Y;
}

Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& P, double cutoff, std::size_t* rank, double* sigma_max) {
    if (P.size() == 0) throw NumericalError("pseudoinverse of an empty matrix");
    if (!P.allFinite()) throw NumericalError("pseudoinverse: non-finite entries");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(P, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    if (!(smax > 0.0)) throw NumericalError("probability matrix is all zero");
    const double tol = cutoff * smax;
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > tol) ++r;
    if (rank != nullptr) *rank = static_cast<std::size_t>(r);
    if (sigma_max != nullptr) *sigma_max = smax;
    const Eigen::VectorXd inv = s.head(r).cwiseInverse();
    return svd.matrixV().leftCols(r) * inv.asDiagonal() * svd.matrixU().leftCols(r).transpose();
}

ReadoutWeights train(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Y, double cutoff) {
    if (P.cols() != Y.cols())
        throw ConfigError("train: P has " + std::to_string(P.cols()) + " samples, Y has " + std::to_string(Y.cols()));
    if (P.cols() == 0) throw ConfigError("train: no training samples");
    if (!Y.allFinite()) throw NumericalError("train: non-finite targets");
    ReadoutWeights w;
    w.cutoff = cutoff;
    w.W = Y * pseudoinverse(P, cutoff, &w.rank, &w.sigma_max);
    return w;
}

Eigen::MatrixXd predict(const ReadoutWeights& w, const Eigen::MatrixXd& P) {
    if (w.W.cols() != P.rows())
        throw ConfigError("predict: weights expect " + std::to_string(w.W.cols()) + " features, P has " +
                          std::to_string(P.rows()));
    return w.W * P;
}

} // namespace qelm::readout
