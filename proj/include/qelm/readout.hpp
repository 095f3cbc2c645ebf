// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "qelm/forwardmodel.hpp"

namespace qelm::readout {

using forward::kNumParams;

inline constexpr double kDefaultCutoff = 1e-10;
inline constexpr double kDefaultThreshold = 5.0; // percent

/// Rows (CH4, CO2, CO, H2O, M, R, T), abundances as log10 VMR; one column per sample.
Eigen::MatrixXd target_matrix(const forward::SpectralDataset& ds, std::span<const std::size_t> indices);

struct ReadoutWeights {
    Eigen::MatrixXd W;           // 7 x D_out
    double cutoff = kDefaultCutoff; // relative to the largest singular value
    std::size_t rank = 0;
    double sigma_max = 0.0;
};

/// Moore-Penrose pseudoinverse by SVD, dropping singular values below cutoff * sigma_max.
Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& P, double cutoff = kDefaultCutoff, std::size_t* rank = nullptr,
                              double* sigma_max = nullptr);

/// W = Y P^+. Throws NumericalError when P is all zero.
ReadoutWeights train(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Y, double cutoff = kDefaultCutoff);
Eigen::MatrixXd predict(const ReadoutWeights& w, const Eigen::MatrixXd& P);

/// (y - y_pred)^2 / y^2 * 100. Throws NumericalError for y == 0.
double relative_error(double y_test, double y_pred);
/// Fraction of errors <= threshold (inclusive). Throws on an empty list.
double accuracy(std::span<const double> errors, double threshold = kDefaultThreshold);

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Seeded permutation of 0..n-1; the first n - round(f n) indices form the
/// test set, the rest the training set.
Split split(std::size_t n, double train_fraction, std::uint64_t seed);

struct MetricsReport {
    double threshold = kDefaultThreshold;
    std::vector<std::size_t> sample_ids;       // dataset indices of the test spectra
    Eigen::MatrixXd truth;                     // 7 x D_test
    Eigen::MatrixXd predicted;                 // 7 x D_test
    Eigen::MatrixXd errors;                    // 7 x D_test, percent
    std::array<double, kNumParams> accuracy{}; // fraction in [0, 1]

    std::vector<double> parameter_errors(std::size_t p) const;
};

MetricsReport evaluate(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& predicted,
                       std::vector<std::size_t> sample_ids, double threshold = kDefaultThreshold);

/// parameter,sample_id,epsilon
void write_metrics_csv(const MetricsReport& report, const std::filesystem::path& path);
/// sample_id,parameter,true,predicted
void write_predictions_csv(const MetricsReport& report, const std::filesystem::path& path);

std::string weights_to_json(const ReadoutWeights& w);
ReadoutWeights weights_from_json(std::string_view text);
void write_weights(const ReadoutWeights& w, const std::filesystem::path& path);
ReadoutWeights read_weights(const std::filesystem::path& path);

} // namespace qelm::readout
