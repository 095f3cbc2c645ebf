// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "qelm/readout.hpp"

namespace qelm::readout {

double relative_error(double y_test, double y_pred) {
    if (y_test == 0.0) throw NumericalError("relative error undefined for a zero target");
    const double d = y_test - y_pred;
    return d * d / (y_test * y_test) * 100.0;
}

double accuracy(std::span<const double> errors, double threshold) {
    if (errors.empty()) throw ConfigError("accuracy of an empty test set");
    const auto hits = std::count_if(errors.begin(), errors.end(), [threshold](double e) { return e <= threshold; });
    return static_cast<double>(hits) / static_cast<double>(errors.size());
}

Split split(std::size_t n, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train fraction must lie in (0, 1)");
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train >= n)
        throw ConfigError("split of " + std::to_string(n) + " spectra leaves one side empty");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    const std::size_t n_test = n - n_train;
    Split s;
    s.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
    s.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
    return s;
}

std::vector<double> MetricsReport::parameter_errors(std::size_t p) const {
    const Eigen::VectorXd row = errors.row(static_cast<Eigen::Index>(p)).transpose();
    return {row.data(), row.data() + row.size()};
}

MetricsReport evaluate(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& predicted,
                       std::vector<std::size_t> sample_ids, double threshold) {
    if (truth.rows() != static_cast<Eigen::Index>(kNumParams) || truth.rows() != predicted.rows() ||
        truth.cols() != predicted.cols())
        throw ConfigError("evaluate: truth and prediction shapes differ");
    if (sample_ids.size() != static_cast<std::size_t>(truth.cols()))
        throw ConfigError("evaluate: sample id count does not match");
    MetricsReport r;
    r.threshold = threshold;
    r.sample_ids = std::move(sample_ids);
    r.truth = truth;
    r.predicted = predicted;
    r.errors.resize(truth.rows(), truth.cols());
    for (Eigen::Index p = 0; p < truth.rows(); ++p)
        for (Eigen::Index j = 0; j < truth.cols(); ++j) r.errors(p, j) = relative_error(truth(p, j), predicted(p, j));
    for (std::size_t p = 0; p < kNumParams; ++p) r.accuracy[p] = accuracy(r.parameter_errors(p), threshold);
    return r;
}

void write_metrics_csv(const MetricsReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "parameter,sample_id,epsilon\n";
    for (std::size_t p = 0; p < kNumParams; ++p)
        for (Eigen::Index j = 0; j < report.errors.cols(); ++j)
            out << forward::kParamNames[p] << ',' << report.sample_ids[static_cast<std::size_t>(j)] << ','
                << format_double(report.errors(static_cast<Eigen::Index>(p), j)) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

void write_predictions_csv(const MetricsReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "sample_id,parameter,true,predicted\n";
    for (Eigen::Index j = 0; j < report.truth.cols(); ++j)
        for (std::size_t p = 0; p < kNumParams; ++p) {
            const auto pi = static_cast<Eigen::Index>(p);
            out << report.sample_ids[static_cast<std::size_t>(j)] << ',' << forward::kParamNames[p] << ','
                << format_double(report.truth(pi, j)) << ',' << format_double(report.predicted(pi, j)) << '\n';
        }
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace qelm::readout
