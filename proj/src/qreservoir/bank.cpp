// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "qelm/qreservoir.hpp"

namespace qelm::quantum {

ReservoirBank ReservoirBank::make(std::size_t patches, std::size_t M, std::uint64_t master_seed) {
    if (patches == 0) throw ConfigError("bank: need at least one patch");
    if (M == 0) throw ConfigError("bank: M must be at least 1");
    if (patch_qubits(M) > kMaxQubits) throw ConfigError("bank: M = " + std::to_string(M) + " needs too many qubits");
    ReservoirBank bank;
    bank.master_seed = master_seed;
    bank.components = M;
    for (std::size_t i = 0; i <= patches; ++i) {
        const bool global = i == patches;
        const std::size_t q = global ? kGlobalQubits : patch_qubits(M);
        bank.reservoirs.push_back(ReservoirConfig::random(q, derive_seed(master_seed, i)));
        bank.encoded.push_back(global ? kGlobalFeatures : M);
    }
    return bank;
}

void ReservoirBank::fit_encoders(const preprocess::FeatureSet& train) {
    if (train.blocks.size() != reservoirs.size())
        throw ConfigError("bank has " + std::to_string(reservoirs.size()) + " reservoirs but X has " +
                          std::to_string(train.blocks.size()) + " rows");
    encoders.clear();
    for (std::size_t i = 0; i < reservoirs.size(); ++i) {
        if (static_cast<std::size_t>(train.blocks[i].rows()) != encoded[i])
            throw ConfigError("X row " + std::to_string(i) + " has the wrong length");
        encoders.push_back(AngleEncoder::fit(train.blocks[i]));
    }
}

bool ReservoirBank::fitted() const noexcept {
    if (encoders.size() != reservoirs.size()) return false;
    for (const auto& e : encoders)
        if (!e.fitted()) return false;
    return true;
}

std::size_t ReservoirBank::output_dim() const noexcept {
    std::size_t d = 0;
    for (const auto& r : reservoirs) d += std::size_t{1} << r.qubits;
    return d;
}

namespace {

void run_into(const preprocess::FeatureMatrix& x, const ReservoirBank& bank, Shots shots, std::uint64_t sampling_seed,
              std::uint64_t sample_id, std::size_t& clamps, std::vector<StateVector>& states, double* out) {
    if (!bank.fitted()) throw ConfigError("reservoir bank used before its encoders were fitted");
    if (x.size() != bank.size())
        throw ConfigError("X has " + std::to_string(x.size()) + " rows, bank has " + std::to_string(bank.size()));
    const auto& kern = simd::active_kernels();
    std::size_t offset = 0;
    for (std::size_t i = 0; i < bank.size(); ++i) {
        StateVector& s = states[i];
        s.reset();
        clamps += encode(s, x[i], bank.encoders[i], kern);
        evolve_reservoir(s, bank.reservoirs[i], kern);
        if (shots.is_infinite()) {
            kern.probabilities(s.amplitudes().data(), out + offset, s.size());
        } else {
            const auto p = exact_probabilities(s, kern);
            Rng rng(sampling_stream(sampling_seed, sample_id, i));
            const auto f = sample_probabilities(p, shots.count, rng);
            std::copy(f.begin(), f.end(), out + offset);
        }
        offset += s.size();
    }
}

std::vector<StateVector> make_states(const ReservoirBank& bank) {
    std::vector<StateVector> states;
    states.reserve(bank.size());
    for (const auto& r : bank.reservoirs) states.emplace_back(r.qubits);
    return states;
}

} // namespace

std::vector<double> run_bank(const preprocess::FeatureMatrix& x, const ReservoirBank& bank, Shots shots,
                             std::uint64_t sampling_seed, std::uint64_t sample_id, std::size_t* clamps) {
    std::vector<double> out(bank.output_dim());
    auto states = make_states(bank);
    std::size_t c = 0;
    run_into(x, bank, shots, sampling_seed, sample_id, c, states, out.data());
    if (clamps != nullptr) *clamps += c;
    return out;
}

std::uint64_t ProbabilityMatrix::checksum() const noexcept {
    return fnv1a(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())));
}

ProbabilityMatrix build_probability_matrix(const preprocess::FeatureSet& X, const ReservoirBank& bank, Shots shots,
                                           std::uint64_t sampling_seed, std::span<const std::uint64_t> sample_ids) {
    const std::size_t D = X.samples();
    if (!sample_ids.empty() && sample_ids.size() != D) throw ConfigError("sample id count does not match X");
    ProbabilityMatrix P;
    P.shots = shots;
    P.values.resize(static_cast<Eigen::Index>(bank.output_dim()), static_cast<Eigen::Index>(D));
    auto states = make_states(bank);
    for (std::size_t j = 0; j < D; ++j) {
        const std::uint64_t id = sample_ids.empty() ? j : sample_ids[j];
        run_into(X.sample(j), bank, shots, sampling_seed, id, P.clamped, states,
                 P.values.col(static_cast<Eigen::Index>(j)).data());
    }
    if (P.clamped > 0)
        log_warning(std::to_string(P.clamped) + " encoder inputs outside the training range were clamped");
    return P;
}

} // namespace qelm::quantum
