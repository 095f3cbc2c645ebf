// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qelm/common.hpp"

namespace qelm::forward {

inline constexpr std::size_t kNumParams = 7;
inline constexpr std::size_t kGridPoints = 10;

/// Retrieval targets in storage order. The four abundances are log10 VMRs.
enum class Param : std::size_t { ch4 = 0, co2, co, h2o, mass, radius, temp };

inline constexpr std::array<std::string_view, kNumParams> kParamNames = {"CH4", "CO2", "CO", "H2O",
                                                                         "M",   "R",   "T"};
/// Column names used by the dataset CSV.
inline constexpr std::array<std::string_view, kNumParams> kParamColumns = {
    "log10_ch4", "log10_co2", "log10_co", "log10_h2o", "mass_mj", "radius_rj", "temp_k"};

constexpr bool is_abundance(Param p) noexcept { return static_cast<std::size_t>(p) < 4; }

struct AtmosphericParams {
    double ch4 = -4.0; // log10 VMR
    double co2 = -4.0;
    double co = -4.0;
    double h2o = -4.0;
    double mass = 1.0;   // Jupiter masses
    double radius = 1.0; // Jupiter radii
    double temp = 1500.0; // K

    std::array<double, kNumParams> to_array() const noexcept {
        return {ch4, co2, co, h2o, mass, radius, temp};
    }
    static AtmosphericParams from_array(const std::array<double, kNumParams>& v) noexcept {
        return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
    }
    double get(Param p) const noexcept { return to_array()[static_cast<std::size_t>(p)]; }

    friend bool operator==(const AtmosphericParams&, const AtmosphericParams&) = default;
};

/// Physical (low, high) bounds. Abundance bounds are VMRs, not log10.
struct Bounds {
    double low;
    double high;
};
using ParameterBounds = std::array<Bounds, kNumParams>;

/// Bounds of the reference grid: VMR 1e-8..1e-1, M 0.8..2.0, R 0.8..1.5, T 1000..2000.
ParameterBounds reference_bounds();

/// Ten admissible values per parameter (log10 for abundances).
struct ParameterGrid {
    std::array<std::array<double, kGridPoints>, kNumParams> values{};

    const std::array<double, kGridPoints>& operator[](Param p) const noexcept {
        return values[static_cast<std::size_t>(p)];
    }
};

/// VMR grids are uniform in log10, physical grids uniform; both inclusive.
ParameterGrid build_grid(const ParameterBounds& bounds);

/// Each field independently uniform over its ten grid values.
AtmosphericParams sample_params(const ParameterGrid& grid, Rng& rng);

/// Throws ConfigError naming the first field outside `bounds`.
void check_in_bounds(const AtmosphericParams& params, const ParameterBounds& bounds);

struct Spectrum {
    std::vector<double> wavelengths; // micrometres, strictly increasing
    std::vector<double> depths;      // transit depth per bin
    std::optional<AtmosphericParams> params;
};

/// Gaussian absorption band: centre in micrometres, relative strength.
struct Band {
    double center;
    double strength;
};

/// Constants of the desk-scale transmission model.
///
///   h      = (T / 1500) * R^2 / M
///   depth  = d0 * R^2
///          + unit * h * [ rayleigh * (lambda / 0.5)^-4 + sum_cia s * g(lambda; c, cia_width * c * w) ]
///          + sum_mol unit * h * k_mol * (log10 VMR - abundance_floor) * sum_bands s * g(lambda; c, band_width * c * w)
///   w      = sqrt(T / 1500),  g = exp(-(lambda - c)^2 / (2 sigma^2))
///
/// The H2 continuum term gives each patch a VMR-independent reference, so
/// abundance ratios survive per-patch normalisation.
struct ToyModel {
    double d0 = 0.0049542;     // (R_J / 1.46 R_sun)^2
    double unit = 1.0e-4;
    double abundance_floor = -9.0;
    double band_width = 0.04;  // sigma / centre at T = 1500 K
    double rayleigh = 2.0;
    double cia_width = 0.15;
    std::vector<Band> cia{{1.2, 1.0}, {2.4, 1.0}};
    // Per-molecule strength and bands, in Param order (CH4, CO2, CO, H2O).
    std::array<double, 4> strength{1.3, 0.7, 0.5, 1.0};
    std::array<std::vector<Band>, 4> bands{{
        {{1.7, 0.6}, {2.3, 0.8}, {3.3, 1.2}, {7.7, 0.8}},
        {{2.0, 0.5}, {2.7, 0.5}, {4.3, 1.5}, {15.0, 1.0}},
        {{2.3, 0.4}, {4.7, 1.0}},
        {{1.4, 1.0}, {1.9, 1.0}, {2.7, 1.2}, {6.3, 1.0}},
    }};

    double scale_height_factor(const AtmosphericParams& p) const noexcept;
    /// Amplitude multiplying molecule m's band profile.
    double amplitude(const AtmosphericParams& p, std::size_t molecule) const noexcept;
};

inline constexpr double kMinWavelength = 0.3;
inline constexpr double kMaxWavelength = 50.0;
inline constexpr std::size_t kDefaultBins = 515;

/// 515 bins uniform in log10(lambda) over [0.3, 50] um, endpoints exact.
std::vector<double> default_wavelength_grid(std::size_t bins = kDefaultBins, double lo = kMinWavelength,
                                            double hi = kMaxWavelength);

/// Pure function of its inputs; rejects out-of-bounds params and grids
/// that are not strictly increasing inside [0.3, 50] um.
Spectrum synth_spectrum(const AtmosphericParams& params, std::span<const double> wavelengths,
                        const ToyModel& model = {});

struct SpectralDataset {
    struct Record {
        AtmosphericParams params;
        std::vector<double> depths;
    };

    std::uint64_t seed = 0;
    std::vector<double> wavelengths;
    std::vector<Record> records;

    std::size_t size() const noexcept { return records.size(); }
    Spectrum spectrum(std::size_t i) const;
};

SpectralDataset generate_dataset(std::size_t n, std::uint64_t seed, const ToyModel& model = {},
                                 std::span<const double> wavelengths = {});

class DatasetParseError : public IoError {
public:
    DatasetParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

void write_dataset(const SpectralDataset& ds, const std::filesystem::path& path);
void write_dataset(const SpectralDataset& ds, std::ostream& out);
SpectralDataset read_dataset(const std::filesystem::path& path);
SpectralDataset read_dataset(std::istream& in);

} // namespace qelm::forward
