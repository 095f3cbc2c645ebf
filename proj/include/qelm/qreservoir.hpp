// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qelm/common.hpp"
#include "qelm/preprocess.hpp"
#include "qelm/simd/kernels.hpp"

namespace qelm::quantum {

using cplx = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 20;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Pure state of Q qubits. Qubit k is bit (Q-1-k) of the basis index, so
/// basis index 0b10 on two qubits is |1>_0 |0>_1, written |10>.
class StateVector {
public:
    explicit StateVector(std::size_t qubits);

    std::size_t qubits() const noexcept { return qubits_; }
    std::size_t size() const noexcept { return amps_.size(); }
    std::vector<cplx>& amplitudes() noexcept { return amps_; }
    const std::vector<cplx>& amplitudes() const noexcept { return amps_; }
    cplx operator[](std::size_t i) const { return amps_[i]; }
    double norm_squared() const noexcept;
    /// Back to |0...0>.
    void reset() noexcept;

    std::size_t stride(std::size_t k) const noexcept { return std::size_t{1} << (qubits_ - 1 - k); }

private:
    std::size_t qubits_;
    std::vector<cplx> amps_;
};

/// RX(theta) = exp(-i theta sigma_x) on qubit k. No half-angle factor.
void apply_rx(StateVector& state, std::size_t k, double theta, const simd::Kernels& kernels = simd::active_kernels());
/// RY(theta) = exp(-i theta sigma_y) on qubit k.
void apply_ry(StateVector& state, std::size_t k, double theta, const simd::Kernels& kernels = simd::active_kernels());
/// CNOT with control k, target k + 1.
void apply_cnot(StateVector& state, std::size_t k);

/// Per-feature affine map from the training range [lo, hi] onto [0, 2 pi].
struct AngleEncoder {
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t size() const noexcept { return lo.size(); }
    bool fitted() const noexcept { return !lo.empty() && lo.size() == hi.size(); }

    /// features: dim x samples (training split only).
    static AngleEncoder fit(const Eigen::MatrixXd& features);
    /// Out-of-range values clamp to 0 or 2 pi and set *clamped. A feature
    /// with lo == hi always maps to 0.
    double angle(std::size_t k, double x, bool* clamped = nullptr) const;
};

/// RX(encoder_k(x_k)) on qubits 0..len(x)-1. Returns the number of clamped values.
std::size_t encode(StateVector& state, std::span<const double> x, const AngleEncoder& encoder,
                   const simd::Kernels& kernels = simd::active_kernels());

struct ReservoirConfig {
    std::size_t qubits = 0;
    std::vector<double> alpha; // final RY layer
    std::vector<double> beta;  // first RY layer
    std::uint64_t seed = 0;

    /// Angles uniform on [0, 2 pi): alpha_0..alpha_{Q-1}, then beta_0..beta_{Q-1}.
    static ReservoirConfig random(std::size_t qubits, std::uint64_t seed);
    void validate() const;
};

/// RY(beta) layer, CNOT(k, k+1) for k = 0..Q-2, then RY(alpha) layer.
void evolve_reservoir(StateVector& state, const ReservoirConfig& config,
                      const simd::Kernels& kernels = simd::active_kernels());

std::vector<double> exact_probabilities(const StateVector& state,
                                        const simd::Kernels& kernels = simd::active_kernels());

/// Multinomial(shots, p) / shots. Throws ConfigError for shots == 0.
std::vector<double> sample_probabilities(std::span<const double> p, std::uint64_t shots, Rng& rng);

/// Shot count; 0 encodes infinite statistics (exact probabilities).
struct Shots {
    std::uint64_t count = 0;

    static constexpr Shots infinite() noexcept { return {0}; }
    bool is_infinite() const noexcept { return count == 0; }
    std::string to_string() const;
    /// Positive integer or "inf".
    static Shots parse(std::string_view text);
    friend bool operator==(Shots, Shots) = default;
};

/// One reservoir per row of X: N_p patch reservoirs plus the global one.
struct ReservoirBank {
    std::uint64_t master_seed = 0;
    std::size_t components = 0;              // M
    std::vector<ReservoirConfig> reservoirs;
    std::vector<std::size_t> encoded;        // features fed to each reservoir
    std::vector<AngleEncoder> encoders;

    static constexpr std::size_t kGlobalQubits = 5;
    static constexpr std::size_t kGlobalFeatures = 3;
    static std::size_t patch_qubits(std::size_t M) noexcept { return M < 3 ? 3 : M; }

    /// Patch reservoirs use Q = max(M, 3); the last reservoir has Q = 5 and
    /// encodes (max, min, mean). Reservoir i draws angles from derive_seed(master, i).
    static ReservoirBank make(std::size_t patches, std::size_t M, std::uint64_t master_seed);

    void fit_encoders(const preprocess::FeatureSet& train);
    bool fitted() const noexcept;
    std::size_t size() const noexcept { return reservoirs.size(); }
    /// Length of a P column: sum of 2^Q over reservoirs.
    std::size_t output_dim() const noexcept;
};

/// Seed of the measurement stream for (sample, reservoir).
constexpr std::uint64_t sampling_stream(std::uint64_t sampling_seed, std::uint64_t sample_id,
                                        std::uint64_t reservoir) noexcept {
    return derive_seed(sampling_seed, sample_id, reservoir);
}

/// Probability column for one spectrum: reservoir blocks concatenated in bank order. `clamps` accumulates clamped encoder inputs.
std::vector<double> run_bank(const preprocess::FeatureMatrix& x, const ReservoirBank& bank, Shots shots,
                             std::uint64_t sampling_seed = 0, std::uint64_t sample_id = 0,
                             std::size_t* clamps = nullptr);

struct ProbabilityMatrix {
    Eigen::MatrixXd values; // output_dim x samples
    Shots shots;
    std::size_t clamped = 0;

    std::uint64_t checksum() const noexcept;
};

/// Columns in sample order; sample_ids (defaults to 0..D-1) key the sampling streams.
ProbabilityMatrix build_probability_matrix(const preprocess::FeatureSet& X, const ReservoirBank& bank, Shots shots,
                                           std::uint64_t sampling_seed = 0,
                                           std::span<const std::uint64_t> sample_ids = {});

std::string bank_to_json(const ReservoirBank& bank);
ReservoirBank bank_from_json(std::string_view text);
void write_bank(const ReservoirBank& bank, const std::filesystem::path& path);
ReservoirBank read_bank(const std::filesystem::path& path);

} // namespace qelm::quantum
