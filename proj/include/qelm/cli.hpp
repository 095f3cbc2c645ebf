// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qelm/eval.hpp"

namespace qelm::cli {

/// Process exit codes.
enum ExitCode : int { ok = 0, config_error = 2, io_error = 3, numerical_error = 4 };
int exit_code(const Error& e) noexcept;

struct GenerateArgs {
    std::size_t n = 10000;
    std::uint64_t seed = 1;
    std::filesystem::path out;
};
void cmd_generate(const GenerateArgs& args, std::ostream& log);

struct RunArgs {
    std::optional<std::filesystem::path> config;
    std::optional<std::filesystem::path> manifest;
    std::vector<std::string> overrides; // key=value
    std::optional<std::filesystem::path> out;
    bool force = false;
};
/// Returns the run directory.
std::filesystem::path cmd_run(const RunArgs& args, std::ostream& log);

struct SweepArgs {
    std::optional<std::filesystem::path> config;
    std::vector<std::string> overrides;
    std::string variable;
    std::string values;
    std::optional<std::filesystem::path> out;
    bool force = false;
};
/// Returns the sweep directory.
std::filesystem::path cmd_sweep(const SweepArgs& args, std::ostream& log);

struct ReportArgs {
    std::filesystem::path run_dir;
};
void cmd_report(const ReportArgs& args, std::ostream& log);

/// Two-column accuracy table (parameter, percent with one decimal).
std::string accuracy_table(const std::array<double, forward::kNumParams>& accuracy, const std::string& title);

/// Rebuilds the per-sample truth and predictions from predictions.csv.
readout::MetricsReport read_predictions(const std::filesystem::path& path, double threshold);

} // namespace qelm::cli
