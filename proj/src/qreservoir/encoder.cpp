// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "qelm/qreservoir.hpp"

namespace qelm::quantum {

AngleEncoder AngleEncoder::fit(const Eigen::MatrixXd& features) {
    if (features.rows() == 0 || features.cols() == 0) throw ConfigError("encoder: no training features");
    if (!features.allFinite()) throw NumericalError("encoder: non-finite training feature");
    AngleEncoder enc;
    enc.lo.resize(static_cast<std::size_t>(features.rows()));
    enc.hi.resize(enc.lo.size());
    for (Eigen::Index r = 0; r < features.rows(); ++r) {
        enc.lo[static_cast<std::size_t>(r)] = features.row(r).minCoeff();
        enc.hi[static_cast<std::size_t>(r)] = features.row(r).maxCoeff();
    }
    return enc;
}

double AngleEncoder::angle(std::size_t k, double x, bool* clamped) const {
    if (k >= size()) throw ConfigError("encoder: feature index out of range");
    if (std::isnan(x)) throw NumericalError("encoder: NaN feature");
    const double l = lo[k];
    const double h = hi[k];
    if (!(h > l)) return 0.0;
    double t = (x - l) / (h - l);
    if (t < 0.0 || t > 1.0) {
        if (clamped != nullptr) *clamped = true;
        t = t < 0.0 ? 0.0 : 1.0;
    }
    return t == 1.0 ? kTwoPi : kTwoPi * t;
}

std::size_t encode(StateVector& state, std::span<const double> x, const AngleEncoder& encoder,
                   const simd::Kernels& kernels) {
    if (!encoder.fitted()) throw ConfigError("encoder used before fit");
    if (x.size() > state.qubits())
        throw ConfigError("encode: " + std::to_string(x.size()) + " features for " + std::to_string(state.qubits()) +
                          " qubits");
    if (x.size() != encoder.size())
        throw ConfigError("encode: encoder expects " + std::to_string(encoder.size()) + " features, got " +
                          std::to_string(x.size()));
    std::size_t clamps = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        bool c = false;
        const double theta = encoder.angle(k, x[k], &c);
        clamps += c ? 1 : 0;
        if (theta != 0.0) apply_rx(state, k, theta, kernels);
    }
    return clamps;
}

} // namespace qelm::quantum
