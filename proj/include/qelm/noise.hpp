// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "qelm/common.hpp"
#include "qelm/forwardmodel.hpp"

namespace qelm::noise {

namespace constants {
inline constexpr double h = 6.62607015e-34;  // J s
inline constexpr double c = 2.99792458e8;    // m / s
inline constexpr double k_B = 1.380649e-23;  // J / K
inline constexpr double solar_radius = 6.957e8; // m
inline constexpr double parsec = 3.0856775814913673e16; // m
} // namespace constants

/// JWST-like photon-counting setup. The aperture keeps the bare value 16
/// (read as metres) and the other fields take the listed units.
struct InstrumentModel {
    double star_radius = 1.46;   // solar radii
    double star_temp = 6460.0;   // K
    double distance = 270.0;     // parsec
    double aperture = 16.0;
    double throughput = 0.4;
    double exposure = 21340.0;   // s
    double floor_ppm = 30.0;
    double min_wavelength = 0.6; // um, range where the noise model applies
    double max_wavelength = 2.8;

    void validate() const;
};

/// Spectral radiance B(lambda, T) in W m^-3 sr^-1; lambda in metres.
double planck(double lambda, double temperature);

/// Mean photoelectron count collected over [lambda1, lambda2] (micrometres).
double photon_count(double lambda1, double lambda2, const InstrumentModel& inst);

/// max(1/sqrt(N), floor). Throws NumericalError for N <= 0.
double sigma_from_count(double photons, double floor_ppm);

/// Relative noise for the bin [lambda1, lambda2].
double noise_sigma(double lambda1, double lambda2, const InstrumentModel& inst);

/// Bin edges from bin centres: midpoints inside, mirrored half-widths at the ends.
std::vector<double> bin_edges(std::span<const double> centers);

/// Per-bin sigma for a grid of bin centres (micrometres).
std::vector<double> noise_sigmas(std::span<const double> centers, const InstrumentModel& inst);

/// depth_i + N(0, sigma_i), independent per bin.
void add_shot_noise(std::span<double> depths, std::span<const double> sigmas, Rng& rng);
forward::Spectrum add_shot_noise(const forward::Spectrum& spectrum, std::span<const double> sigmas, Rng& rng);
forward::Spectrum add_shot_noise(const forward::Spectrum& spectrum, const InstrumentModel& inst, Rng& rng);

} // namespace qelm::noise
