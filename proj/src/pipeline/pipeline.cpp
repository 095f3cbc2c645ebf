// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>

#include "qelm/pipeline.hpp"

namespace qelm::pipeline {

namespace {

[[noreturn]] void rethrow_in_stage(const char* stage, const Error& e) {
    const std::string what = std::string(stage) + ": " + e.what();
    switch (e.kind()) {
    case ErrorKind::config: throw ConfigError(what);
    case ErrorKind::io: throw IoError(what);
    case ErrorKind::numerical: throw NumericalError(what);
    }
    throw Error(e.kind(), what);
}

template <typename F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        rethrow_in_stage(name, e);
    }
}

void add_noise(Eigen::MatrixXd& rows, std::span<const std::size_t> ids, std::span<const double> sigmas,
               std::uint64_t seed) {
    std::vector<double> row(static_cast<std::size_t>(rows.cols()));
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        for (Eigen::Index c = 0; c < rows.cols(); ++c) row[static_cast<std::size_t>(c)] = rows(r, c);
        Rng rng(derive_seed(seed, ids[static_cast<std::size_t>(r)]));
        noise::add_shot_noise(std::span<double>(row), sigmas, rng);
        for (Eigen::Index c = 0; c < rows.cols(); ++c) rows(r, c) = row[static_cast<std::size_t>(c)];
    }
}

std::vector<std::uint64_t> as_ids(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

} // namespace

std::uint64_t dataset_checksum(const forward::SpectralDataset& ds) {
    std::uint64_t h = fnv1a(std::span<const double>(ds.wavelengths));
    for (const auto& r : ds.records) {
        const auto p = r.params.to_array();
        h = fnv1a(std::span<const double>(p), h);
        h = fnv1a(std::span<const double>(r.depths), h);
    }
    return h;
}

forward::SpectralDataset load_dataset(const RunConfig& config) {
    return stage("dataset", [&] {
        if (!config.dataset_path.empty()) return forward::read_dataset(config.dataset_path);
        return forward::generate_dataset(config.dataset_n, config.dataset_seed);
    });
}

RunResult run_pipeline(const RunConfig& config, const forward::SpectralDataset& ds, const RunOptions& options) {
    stage("config", [&] { config.validate(); return 0; });
    RunResult res;
    res.config = config;
    res.dataset_checksum = dataset_checksum(ds);

    res.split = stage("split", [&] {
        auto s = readout::split(ds.size(), config.train_fraction, config.split_seed);
        if (config.train_size != 0) {
            if (config.train_size > s.train.size())
                throw ConfigError("split.train_size " + std::to_string(config.train_size) + " exceeds the " +
                                  std::to_string(s.train.size()) + " training spectra");
            s.train.resize(config.train_size);
        }
        return s;
    });

    res.grid = preprocess::working_grid(config.mode, ds.wavelengths);
    auto rows_train = stage("interpolate", [&] { return preprocess::to_working_rows(ds, res.split.train, res.grid); });
    auto rows_test = stage("interpolate", [&] { return preprocess::to_working_rows(ds, res.split.test, res.grid); });

    if (preprocess::uses_noise(config.mode)) {
        stage("noise", [&] {
            const auto sigmas = noise::noise_sigmas(res.grid, config.instrument);
            add_noise(rows_train, res.split.train, sigmas, config.noise_seed);
            add_noise(rows_test, res.split.test, sigmas, config.noise_seed);
            return 0;
        });
    }

    preprocess::FeatureConfig fcfg;
    fcfg.mode = config.mode;
    fcfg.layout = config.layout();
    fcfg.components = config.components;
    fcfg.filter_components = config.filter_components;
    res.features = stage("preprocess", [&] { return preprocess::FeaturePipeline::fit(fcfg, res.grid, rows_train); });
    const auto X_train = stage("preprocess", [&] { return res.features.transform(rows_train); });
    const auto X_test = stage("preprocess", [&] { return res.features.transform(rows_test); });

    res.bank = stage("reservoir", [&] {
        auto bank = quantum::ReservoirBank::make(fcfg.layout.size(), config.components, config.reservoir_seed);
        bank.fit_encoders(X_train);
        return bank;
    });
    res.output_dim = res.bank.output_dim();

    const auto train_ids = as_ids(res.split.train);
    const auto test_ids = as_ids(res.split.test);
    auto P_train = stage("reservoir", [&] {
        return quantum::build_probability_matrix(X_train, res.bank, config.shots, config.sampling_seed, train_ids);
    });
    auto P_test = stage("reservoir", [&] {
        return quantum::build_probability_matrix(X_test, res.bank, config.shots, config.sampling_seed, test_ids);
    });
    res.p_train_checksum = P_train.checksum();
    res.p_test_checksum = P_test.checksum();

    auto Y_train = readout::target_matrix(ds, res.split.train);
    const auto Y_test = readout::target_matrix(ds, res.split.test);
    res.weights = stage("readout", [&] { return readout::train(P_train.values, Y_train, config.cutoff); });
    const auto Y_pred = stage("readout", [&] { return readout::predict(res.weights, P_test.values); });
    res.metrics = stage("metrics", [&] { return readout::evaluate(Y_test, Y_pred, res.split.test, config.threshold); });

    if (options.keep_matrices) {
        res.p_train = std::move(P_train.values);
        res.p_test = std::move(P_test.values);
        res.y_train = std::move(Y_train);
    }
    return res;
}

std::filesystem::path default_output_root() {
    const char* env = std::getenv("QELM_OUTPUT_ROOT");
    if (env != nullptr && *env != '\0') return env;
    return "runs";
}

} // namespace qelm::pipeline
