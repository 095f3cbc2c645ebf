// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <string>

#include "qelm/common.hpp"
#include "qelm/simd/kernels.hpp"

namespace qelm::simd {

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool cpu_supports(Isa isa) noexcept {
    if (isa == Isa::scalar) return true;
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Kernels& kernels_for(Isa isa) {
    if (!cpu_supports(isa)) throw ConfigError("SIMD variant '" + std::string(isa_name(isa)) + "' not supported here");
    return isa == Isa::avx2 ? *avx2_kernels() : scalar_kernels();
}

namespace {

const Kernels& choose() {
    const char* env = std::getenv("QELM_SIMD");
    if (env != nullptr && *env != '\0') {
        const std::string want(env);
        if (want == "scalar") return scalar_kernels();
        if (want == "avx2" && cpu_supports(Isa::avx2)) return *avx2_kernels();
        log_warning("QELM_SIMD=" + want + " not usable; selecting automatically");
    }
    return cpu_supports(Isa::avx2) ? *avx2_kernels() : scalar_kernels();
}

} // namespace

const Kernels& active_kernels() {
    static const Kernels& k = choose();
    return k;
}

} // namespace qelm::simd
