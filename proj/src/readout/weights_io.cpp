// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qelm/readout.hpp"

namespace qelm::readout {

using nlohmann::json;

std::string weights_to_json(const ReadoutWeights& w) {
    json j;
    j["format"] = "qelm-weights-1";
    j["rows"] = w.W.rows();
    j["cols"] = w.W.cols();
    j["cutoff"] = w.cutoff;
    j["rank"] = w.rank;
    j["sigma_max"] = w.sigma_max;
    json rows = json::array();
    for (Eigen::Index r = 0; r < w.W.rows(); ++r) {
        std::vector<double> row(static_cast<std::size_t>(w.W.cols()));
        for (Eigen::Index c = 0; c < w.W.cols(); ++c) row[static_cast<std::size_t>(c)] = w.W(r, c);
        rows.push_back(std::move(row));
    }
    j["W"] = std::move(rows);
    return j.dump(1);
}

ReadoutWeights weights_from_json(std::string_view text) {
    try {
        const json j = json::parse(text);
        if (j.at("format").get<std::string>() != "qelm-weights-1") throw IoError("weights file: unknown format");
        ReadoutWeights w;
        const auto rows = j.at("rows").get<Eigen::Index>();
        const auto cols = j.at("cols").get<Eigen::Index>();
        w.cutoff = j.at("cutoff").get<double>();
        w.rank = j.at("rank").get<std::size_t>();
        w.sigma_max = j.at("sigma_max").get<double>();
        const auto& W = j.at("W");
        if (static_cast<Eigen::Index>(W.size()) != rows) throw IoError("weights file: row count mismatch");
        w.W.resize(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            const auto row = W.at(static_cast<std::size_t>(r)).get<std::vector<double>>();
            if (static_cast<Eigen::Index>(row.size()) != cols) throw IoError("weights file: column count mismatch");
            for (Eigen::Index c = 0; c < cols; ++c) w.W(r, c) = row[static_cast<std::size_t>(c)];
        }
        return w;
    } catch (const json::exception& ex) {
        throw IoError(std::string("weights file: ") + ex.what());
    }
}

void write_weights(const ReadoutWeights& w, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << weights_to_json(w) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

ReadoutWeights read_weights(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return weights_from_json(ss.str());
}

} // namespace qelm::readout
