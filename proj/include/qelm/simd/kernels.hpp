// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace qelm::simd {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Inner loops shared by the statevector simulator and PCA projection.
///
/// rotate_* act on every amplitude pair (i, i + stride) with bit `stride`
/// clear in i; n is the state length and stride a power of two < n.
struct Kernels {
    Isa isa;
    // (a0, a1) -> (c a0 - i s a1, -i s a0 + c a1)
    void (*rotate_x)(cplx* amps, std::size_t n, std::size_t stride, double c, double s);
    // (a0, a1) -> (c a0 - s a1, s a0 + c a1)
    void (*rotate_y)(cplx* amps, std::size_t n, std::size_t stride, double c, double s);
    void (*probabilities)(const cplx* amps, double* out, std::size_t n);
    double (*dot)(const double* x, const double* y, std::size_t n);
    // y += a x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
};

const Kernels& scalar_kernels() noexcept;
/// Null when the build target has no AVX2 variant.
const Kernels* avx2_kernels() noexcept;

bool cpu_supports(Isa isa) noexcept;

/// Kernels for a given ISA; throws ConfigError if this CPU cannot run it.
const Kernels& kernels_for(Isa isa);

/// Best supported table, chosen once. QELM_SIMD=scalar|avx2 overrides.
const Kernels& active_kernels();

} // namespace qelm::simd
