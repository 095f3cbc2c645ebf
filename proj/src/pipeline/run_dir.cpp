// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qelm/pipeline.hpp"

namespace qelm::pipeline {

using nlohmann::json;

namespace {

std::uint64_t parse_hex(const std::string& s) {
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(s, &pos, 16);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty()) throw IoError("manifest: bad checksum '" + s + "'");
    return v;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace

std::string metrics_json(const RunResult& r) {
    json j;
    j["format"] = "qelm-metrics-1";
    j["config_hash"] = hex64(r.config.hash());
    j["mode"] = std::string(preprocess::mode_name(r.config.mode));
    j["shots"] = r.config.shots.to_string();
    j["threshold"] = r.metrics.threshold;
    j["n_train"] = r.split.train.size();
    j["n_test"] = r.split.test.size();
    j["output_dim"] = r.output_dim;
    j["rank"] = r.weights.rank;
    json acc;
    for (std::size_t p = 0; p < forward::kNumParams; ++p)
        acc[std::string(forward::kParamNames[p])] = r.metrics.accuracy[p];
    j["accuracy"] = std::move(acc);
    j["checksums"] = {{"P_train", hex64(r.p_train_checksum)}, {"P_test", hex64(r.p_test_checksum)}};
    return j.dump(2) + "\n";
}

std::string manifest_json(const RunResult& r) {
    const RunConfig& c = r.config;
    json j;
    j["format"] = "qelm-run-1";
    j["config"] = c.to_map();
    j["config_hash"] = hex64(c.hash());
    j["seeds"] = {{"dataset", c.dataset_seed},   {"reservoir", c.reservoir_seed}, {"split", c.split_seed},
                  {"sampling", c.sampling_seed}, {"noise", c.noise_seed},         {"bootstrap", c.bootstrap_seed}};
    j["dataset"] = {{"source", c.dataset_path.empty() ? std::string("generated") : c.dataset_path},
                    {"spectra", r.split.train.size() + r.split.test.size()},
                    {"checksum", hex64(r.dataset_checksum)}};
    j["checksums"] = {{"P_train", hex64(r.p_train_checksum)}, {"P_test", hex64(r.p_test_checksum)}};
    j["simd"] = std::string(simd::isa_name(simd::active_kernels().isa));
    j["files"] = {"bank.json", "weights.json", "metrics.csv", "metrics.json", "predictions.csv", "config.ini"};
    return j.dump(2) + "\n";
}

void prepare_output_dir(const std::filesystem::path& dir, bool force) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (fs::exists(dir, ec)) {
        if (!fs::is_directory(dir, ec)) throw IoError(dir.string() + " exists and is not a directory");
        if (!fs::is_empty(dir, ec) && !force)
            throw IoError("refusing to overwrite non-empty " + dir.string() + " (pass --force)");
    }
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void write_run_dir(const RunResult& r, const std::filesystem::path& dir, bool force) {
    prepare_output_dir(dir, force);
    quantum::write_bank(r.bank, dir / "bank.json");
    readout::write_weights(r.weights, dir / "weights.json");
    readout::write_metrics_csv(r.metrics, dir / "metrics.csv");
    readout::write_predictions_csv(r.metrics, dir / "predictions.csv");
    write_text(dir / "metrics.json", metrics_json(r));
    std::string ini = "# canonical configuration of this run\n";
    for (const auto& [k, v] : r.config.to_map()) ini += k + " = " + v + "\n";
    write_text(dir / "config.ini", ini);
    // last, so a manifest marks a complete run
    write_text(dir / "manifest.json", manifest_json(r));
}

Manifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read manifest " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        const json j = json::parse(ss.str());
        if (j.at("format").get<std::string>() != "qelm-run-1") throw IoError("manifest: unknown format");
        Manifest m;
        m.config = RunConfig::from_map(j.at("config").get<KeyValues>());
        m.config_hash = parse_hex(j.at("config_hash").get<std::string>());
        m.dataset_checksum = parse_hex(j.at("dataset").at("checksum").get<std::string>());
        m.p_train_checksum = parse_hex(j.at("checksums").at("P_train").get<std::string>());
        m.p_test_checksum = parse_hex(j.at("checksums").at("P_test").get<std::string>());
        m.simd = j.value("simd", "");
        if (m.config.hash() != m.config_hash) throw IoError("manifest: config hash does not match its config");
        return m;
    } catch (const json::exception& ex) {
        throw IoError(std::string("manifest: ") + ex.what());
    }
}

} // namespace qelm::pipeline
