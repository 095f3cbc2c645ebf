// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include "json.hpp"
#include <sstream>

#include "qelm/qreservoir.hpp"

namespace qelm::quantum {

using nlohmann::json;

std::string bank_to_json(const ReservoirBank& bank) {
    json j;
    j["format"] = "qelm-bank-1";
    j["master_seed"] = bank.master_seed;
    j["components"] = bank.components;
    json list = json::array();
    for (std::size_t i = 0; i < bank.size(); ++i) {
        const auto& r = bank.reservoirs[i];
        json e;
        e["qubits"] = r.qubits;
        e["seed"] = r.seed;
        e["alpha"] = r.alpha;
        e["beta"] = r.beta;
        e["encoded"] = bank.encoded[i];
        if (i < bank.encoders.size()) {
            e["encoder_lo"] = bank.encoders[i].lo;
            e["encoder_hi"] = bank.encoders[i].hi;
        }
        list.push_back(std::move(e));
    }
    j["reservoirs"] = std::move(list);
    return j.dump(2);
}

ReservoirBank bank_from_json(std::string_view text) {
    try {
        const json j = json::parse(text);
        if (j.at("format").get<std::string>() != "qelm-bank-1") throw IoError("bank file: unknown format");
        ReservoirBank bank;
        bank.master_seed = j.at("master_seed").get<std::uint64_t>();
        bank.components = j.at("components").get<std::size_t>();
        bool any_encoder = false;
        for (const auto& e : j.at("reservoirs")) {
            ReservoirConfig r;
            r.qubits = e.at("qubits").get<std::size_t>();
            r.seed = e.at("seed").get<std::uint64_t>();
            r.alpha = e.at("alpha").get<std::vector<double>>();
            r.beta = e.at("beta").get<std::vector<double>>();
            r.validate();
            bank.reservoirs.push_back(std::move(r));
            bank.encoded.push_back(e.at("encoded").get<std::size_t>());
            AngleEncoder enc;
            if (e.contains("encoder_lo")) {
                enc.lo = e.at("encoder_lo").get<std::vector<double>>();
                enc.hi = e.at("encoder_hi").get<std::vector<double>>();
                any_encoder = true;
            }
            bank.encoders.push_back(std::move(enc));
        }
        if (!any_encoder) bank.encoders.clear();
        return bank;
    } catch (const json::exception& ex) {
        throw IoError(std::string("bank file: ") + ex.what());
    }
}

void write_bank(const ReservoirBank& bank, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << bank_to_json(bank) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

ReservoirBank read_bank(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return bank_from_json(ss.str());
}

} // namespace qelm::quantum
