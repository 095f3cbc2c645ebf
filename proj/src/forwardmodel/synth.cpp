// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "qelm/forwardmodel.hpp"

namespace qelm::forward {

double ToyModel::scale_height_factor(const AtmosphericParams& p) const noexcept {
    return (p.temp / 1500.0) * p.radius * p.radius / p.mass;
}

double ToyModel::amplitude(const AtmosphericParams& p, std::size_t molecule) const noexcept {
    const double log_vmr = p.to_array()[molecule];
    return unit * scale_height_factor(p) * strength[molecule] * (log_vmr - abundance_floor);
}

std::vector<double> default_wavelength_grid(std::size_t bins, double lo, double hi) {
    if (bins < 2 || !(lo > 0.0) || !(lo < hi)) throw ConfigError("invalid wavelength grid specification");
    std::vector<double> grid(bins);
    const double a = std::log10(lo);
    const double step = (std::log10(hi) - a) / static_cast<double>(bins - 1);
    for (std::size_t i = 0; i < bins; ++i) grid[i] = std::pow(10.0, a + static_cast<double>(i) * step);
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

namespace {

inline double gaussian(double x, double center, double sigma) {
    const double z = (x - center) / sigma;
    return std::exp(-0.5 * z * z);
}

void check_grid(std::span<const double> wl) {
    if (wl.empty()) throw ConfigError("empty wavelength grid");
    for (std::size_t i = 0; i < wl.size(); ++i) {
        if (!std::isfinite(wl[i]) || wl[i] < kMinWavelength || wl[i] > kMaxWavelength)
            throw ConfigError("wavelength " + format_double(wl[i]) + " um outside [0.3, 50]");
        if (i > 0 && !(wl[i] > wl[i - 1])) throw ConfigError("wavelength grid not strictly increasing");
    }
}

} // namespace

Spectrum synth_spectrum(const AtmosphericParams& params, std::span<const double> wavelengths,
                        const ToyModel& model) {
    check_in_bounds(params, reference_bounds());
    check_grid(wavelengths);

    const double h = model.scale_height_factor(params);
    const double w = std::sqrt(params.temp / 1500.0);
    const double base = model.d0 * params.radius * params.radius;
    const double continuum = model.unit * h;

    Spectrum out;
    out.wavelengths.assign(wavelengths.begin(), wavelengths.end());
    out.depths.resize(wavelengths.size());
    out.params = params;

    for (std::size_t i = 0; i < wavelengths.size(); ++i) {
        const double lam = wavelengths[i];
        const double r = lam / 0.5;
        double cont = model.rayleigh / (r * r * r * r);
        for (const Band& b : model.cia) cont += b.strength * gaussian(lam, b.center, model.cia_width * b.center * w);
        double d = base + continuum * cont;
        for (std::size_t m = 0; m < 4; ++m) {
            const double amp = model.amplitude(params, m);
            double profile = 0.0;
            for (const Band& b : model.bands[m])
                profile += b.strength * gaussian(lam, b.center, model.band_width * b.center * w);
            d += amp * profile;
        }
        out.depths[i] = d;
    }
    return out;
}

Spectrum SpectralDataset::spectrum(std::size_t i) const {
    const Record& r = records.at(i);
    return Spectrum{wavelengths, r.depths, r.params};
}

SpectralDataset generate_dataset(std::size_t n, std::uint64_t seed, const ToyModel& model,
                                 std::span<const double> wavelengths) {
    if (n == 0) throw ConfigError("dataset size must be at least 1");
    SpectralDataset ds;
    ds.seed = seed;
    if (wavelengths.empty())
        ds.wavelengths = default_wavelength_grid();
    else
        ds.wavelengths.assign(wavelengths.begin(), wavelengths.end());

    const ParameterGrid grid = build_grid(reference_bounds());
    ds.records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng(derive_seed(seed, i));
        const AtmosphericParams p = sample_params(grid, rng);
        Spectrum s = synth_spectrum(p, ds.wavelengths, model);
        ds.records.push_back({p, std::move(s.depths)});
    }
    return ds;
}

} // namespace qelm::forward
