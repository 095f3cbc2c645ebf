// SPDX-License-Identifier: Apache-2.0
#include "qelm/simd/kernels.hpp"

namespace qelm::simd {
namespace {

void rotate_x(cplx* amps, std::size_t n, std::size_t stride, double c, double s) {
    for (std::size_t base = 0; base < n; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const cplx a0 = amps[i];
            const cplx a1 = amps[i + stride];
            // -i s a = s (a.im, -a.re)
            amps[i] = {c * a0.real() + s * a1.imag(), c * a0.imag() - s * a1.real()};
            amps[i + stride] = {c * a1.real() + s * a0.imag(), c * a1.imag() - s * a0.real()};
        }
    }
}

void rotate_y(cplx* amps, std::size_t n, std::size_t stride, double c, double s) {
    for (std::size_t base = 0; base < n; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const cplx a0 = amps[i];
            const cplx a1 = amps[i + stride];
            amps[i] = {c * a0.real() - s * a1.real(), c * a0.imag() - s * a1.imag()};
            amps[i + stride] = {s * a0.real() + c * a1.real(), s * a0.imag() + c * a1.imag()};
        }
    }
}

void probabilities(const cplx* amps, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = amps[i].real() * amps[i].real() + amps[i].imag() * amps[i].imag();
}

double dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

constexpr Kernels kTable{Isa::scalar, rotate_x, rotate_y, probabilities, dot, axpy};

} // namespace

const Kernels& scalar_kernels() noexcept { return kTable; }

} // namespace qelm::simd
