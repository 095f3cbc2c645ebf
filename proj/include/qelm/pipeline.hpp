// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qelm/forwardmodel.hpp"
#include "qelm/noise.hpp"
#include "qelm/preprocess.hpp"
#include "qelm/qreservoir.hpp"
#include "qelm/readout.hpp"

namespace qelm::pipeline {

/// Flat key -> value view of an INI file. "[pca]\ncomponents = 5" becomes
/// "pca.components" = "5". Later duplicates are an error.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_ini(std::string_view text);

struct RunConfig {
    preprocess::Mode mode = preprocess::Mode::jwst;
    std::string dataset_path;      // empty: generate from dataset_n / dataset_seed
    std::size_t dataset_n = 4080;
    std::uint64_t dataset_seed = 1;
    std::string patches;           // empty: preset for the mode; "jwst", "taurex" or edge list
    std::size_t components = 5;    // M
    std::size_t filter_components = 10;
    std::uint64_t reservoir_seed = 1;
    quantum::Shots shots{20000};
    std::uint64_t sampling_seed = 2;
    std::uint64_t noise_seed = 3;
    double train_fraction = 0.75;
    std::uint64_t split_seed = 1;
    std::size_t train_size = 0;    // 0: whole training split
    double threshold = readout::kDefaultThreshold;
    std::vector<double> tolerance_thresholds = default_thresholds();
    std::uint64_t bootstrap_seed = 4;
    std::size_t bootstrap_resamples = 1000;
    double bootstrap_level = 0.95;
    double cutoff = readout::kDefaultCutoff;
    noise::InstrumentModel instrument;

    static std::vector<double> default_thresholds();

    preprocess::PatchLayout layout() const;
    /// Throws ConfigError for invalid values; checks that dataset_path exists.
    void validate() const;

    /// Every key with its canonical value (sorted).
    KeyValues to_map() const;
    static RunConfig from_map(const KeyValues& kv);
    std::string canonical() const;
    std::uint64_t hash() const;
    /// Hash with `key` left out, shared by all points of a sweep over `key`.
    std::uint64_t fingerprint(std::string_view excluded_key) const;
    /// Set one key from text, as the config file would.
    void set(std::string_view key, std::string_view value);
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

std::uint64_t dataset_checksum(const forward::SpectralDataset& ds);
forward::SpectralDataset load_dataset(const RunConfig& config);

struct RunResult {
    RunConfig config;
    std::uint64_t dataset_checksum = 0;
    readout::Split split;
    std::vector<double> grid;
    preprocess::FeaturePipeline features;
    quantum::ReservoirBank bank;
    readout::ReadoutWeights weights;
    readout::MetricsReport metrics;
    std::uint64_t p_train_checksum = 0;
    std::uint64_t p_test_checksum = 0;
    std::size_t output_dim = 0;
    // Kept only when requested.
    std::optional<Eigen::MatrixXd> p_train;
    std::optional<Eigen::MatrixXd> p_test;
    std::optional<Eigen::MatrixXd> y_train;
};

struct RunOptions {
    bool keep_matrices = false;
};

/// Split, preprocess, bank, probability matrices, readout, metrics.
/// Errors carry the failing stage name.
RunResult run_pipeline(const RunConfig& config, const forward::SpectralDataset& ds, const RunOptions& options = {});

std::string metrics_json(const RunResult& result);
std::string manifest_json(const RunResult& result);

/// Creates `dir` (refuses a non-empty one unless force) and writes the run artifacts.
void write_run_dir(const RunResult& result, const std::filesystem::path& dir, bool force);
void prepare_output_dir(const std::filesystem::path& dir, bool force);

struct Manifest {
    RunConfig config;
    std::uint64_t config_hash = 0;
    std::uint64_t dataset_checksum = 0;
    std::uint64_t p_train_checksum = 0;
    std::uint64_t p_test_checksum = 0;
    std::string simd;
};
Manifest read_manifest(const std::filesystem::path& path);

/// $QELM_OUTPUT_ROOT or ./runs.
std::filesystem::path default_output_root();

} // namespace qelm::pipeline
