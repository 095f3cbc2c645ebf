// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>
#include <utility>

#include "qelm/qreservoir.hpp"

namespace qelm::quantum {

StateVector::StateVector(std::size_t qubits) : qubits_(qubits) {
    if (qubits == 0 || qubits > kMaxQubits)
        throw ConfigError("qubit count " + std::to_string(qubits) + " outside [1, " + std::to_string(kMaxQubits) + "]");
    amps_.assign(std::size_t{1} << qubits, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

double StateVector::norm_squared() const noexcept {
    double acc = 0.0;
    for (const auto& a : amps_) acc += std::norm(a);
    return acc;
}

void StateVector::reset() noexcept {
    std::fill(amps_.begin(), amps_.end(), cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

namespace {

void check_qubit(const StateVector& s, std::size_t k, const char* gate) {
    if (k >= s.qubits())
        throw ConfigError(std::string(gate) + ": qubit " + std::to_string(k) + " out of range for " +
                          std::to_string(s.qubits()) + " qubits");
}

} // namespace

void apply_rx(StateVector& state, std::size_t k, double theta, const simd::Kernels& kernels) {
    check_qubit(state, k, "rx");
    kernels.rotate_x(state.amplitudes().data(), state.size(), state.stride(k), std::cos(theta), std::sin(theta));
}

void apply_ry(StateVector& state, std::size_t k, double theta, const simd::Kernels& kernels) {
    check_qubit(state, k, "ry");
    kernels.rotate_y(state.amplitudes().data(), state.size(), state.stride(k), std::cos(theta), std::sin(theta));
}

void apply_cnot(StateVector& state, std::size_t k) {
    if (k + 1 >= state.qubits())
        throw ConfigError("cnot: control " + std::to_string(k) + " has no target in " + std::to_string(state.qubits()) +
                          " qubits");
    const std::size_t cb = state.stride(k);
    const std::size_t tb = state.stride(k + 1);
    auto& a = state.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i)
        if ((i & cb) && !(i & tb)) std::swap(a[i], a[i | tb]);
}

ReservoirConfig ReservoirConfig::random(std::size_t qubits, std::uint64_t seed) {
    ReservoirConfig cfg;
    cfg.qubits = qubits;
    cfg.seed = seed;
    Rng rng(seed);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    auto draw = [&] {
        const double a = angle(rng);
        return a < kTwoPi ? a : 0.0;
    };
    cfg.alpha.resize(qubits);
    cfg.beta.resize(qubits);
    for (auto& a : cfg.alpha) a = draw();
    for (auto& b : cfg.beta) b = draw();
    return cfg;
}

void ReservoirConfig::validate() const {
    if (qubits == 0 || qubits > kMaxQubits) throw ConfigError("reservoir qubit count out of range");
    if (alpha.size() != qubits || beta.size() != qubits) throw ConfigError("reservoir angle lists must have length Q");
    for (double a : alpha)
        if (!(a >= 0.0 && a < kTwoPi)) throw ConfigError("reservoir angle outside [0, 2pi)");
    for (double b : beta)
        if (!(b >= 0.0 && b < kTwoPi)) throw ConfigError("reservoir angle outside [0, 2pi)");
}

void evolve_reservoir(StateVector& state, const ReservoirConfig& config, const simd::Kernels& kernels) {
    if (config.qubits != state.qubits())
        throw ConfigError("reservoir has " + std::to_string(config.qubits) + " qubits, state has " +
                          std::to_string(state.qubits()));
    for (std::size_t k = 0; k < config.qubits; ++k) apply_ry(state, k, config.beta[k], kernels);
    for (std::size_t k = 0; k + 1 < config.qubits; ++k) apply_cnot(state, k);
    for (std::size_t k = 0; k < config.qubits; ++k) apply_ry(state, k, config.alpha[k], kernels);
}

std::vector<double> exact_probabilities(const StateVector& state, const simd::Kernels& kernels) {
    std::vector<double> p(state.size());
    kernels.probabilities(state.amplitudes().data(), p.data(), p.size());
    return p;
}

} // namespace qelm::quantum
