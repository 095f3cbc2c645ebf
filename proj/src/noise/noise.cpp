// SPDX-License-Identifier: Apache-2.0
#include "qelm/noise.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>
#include <string>

namespace qelm::noise {

void InstrumentModel::validate() const {
    const auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || std::isnan(v)) throw ConfigError(std::string("instrument.") + name + " must be positive");
    };
    positive(star_radius, "star_radius");
    positive(star_temp, "star_temp");
    positive(distance, "distance");
    positive(aperture, "aperture");
    positive(throughput, "throughput");
    positive(exposure, "exposure");
    if (!(floor_ppm >= 0.0)) throw ConfigError("instrument.floor_ppm must be nonnegative");
    if (!(min_wavelength > 0.0) || !(min_wavelength < max_wavelength))
        throw ConfigError("instrument wavelength range is empty");
}

double planck(double lambda, double temperature) {
    if (!std::isfinite(lambda) || !std::isfinite(temperature))
        throw NumericalError("planck: non-finite input");
    if (lambda <= 0.0 || temperature <= 0.0) throw NumericalError("planck: wavelength and temperature must be positive");
    using namespace constants;
    const double x = h * c / (lambda * k_B * temperature);
    const double l5 = lambda * lambda * lambda * lambda * lambda;
    return 2.0 * h * c * c / l5 / std::expm1(x);
}

double photon_count(double lambda1, double lambda2, const InstrumentModel& inst) {
    if (!(lambda1 > 0.0)) throw NumericalError("photon_count: lambda1 must be positive");
    if (lambda2 < lambda1) throw NumericalError("photon_count: inverted bin edges");
    if (lambda2 == lambda1) return 0.0;
    using namespace constants;

    // Integrate in micrometres: B(x 1e-6) * (x 1e-6) * 1e-6 dx.
    const double T = inst.star_temp;
    auto integrand = [T](double x_um) { return planck(x_um * 1e-6, T) * x_um * 1e-12; };
    double err = 0.0;
    const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, lambda1, lambda2, 15, 1e-10, &err);

    const double geom = inst.star_radius * solar_radius * inst.aperture / (2.0 * inst.distance * parsec);
    return M_PI * inst.throughput * inst.exposure / (h * c) * geom * geom * integral;
}

double sigma_from_count(double photons, double floor_ppm) {
    if (!(photons > 0.0)) throw NumericalError("noise_sigma: zero photon count gives infinite sigma");
    return std::max(1.0 / std::sqrt(photons), floor_ppm / 1e6);
}

double noise_sigma(double lambda1, double lambda2, const InstrumentModel& inst) {
    return sigma_from_count(photon_count(lambda1, lambda2, inst), inst.floor_ppm);
}

std::vector<double> bin_edges(std::span<const double> centers) {
    if (centers.size() < 2) throw ConfigError("bin_edges: need at least two bin centres");
    std::vector<double> edges(centers.size() + 1);
    for (std::size_t i = 1; i < centers.size(); ++i) edges[i] = 0.5 * (centers[i - 1] + centers[i]);
    edges.front() = centers.front() - (edges[1] - centers.front());
    edges.back() = centers.back() + (centers.back() - edges[centers.size() - 1]);
    return edges;
}

std::vector<double> noise_sigmas(std::span<const double> centers, const InstrumentModel& inst) {
    inst.validate();
    for (double c : centers)
        if (c < inst.min_wavelength || c > inst.max_wavelength)
            throw ConfigError("wavelength " + format_double(c) + " um outside the instrument range");
    const auto edges = bin_edges(centers);
    std::vector<double> sig(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) sig[i] = noise_sigma(edges[i], edges[i + 1], inst);
    return sig;
}

void add_shot_noise(std::span<double> depths, std::span<const double> sigmas, Rng& rng) {
    if (sigmas.size() != depths.size()) throw ConfigError("add_shot_noise: sigma count does not match bins");
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < depths.size(); ++i) {
        const double z = normal(rng);
        if (sigmas[i] > 0.0) depths[i] += sigmas[i] * z;
    }
}

forward::Spectrum add_shot_noise(const forward::Spectrum& spectrum, std::span<const double> sigmas, Rng& rng) {
    forward::Spectrum out = spectrum;
    add_shot_noise(std::span<double>(out.depths), sigmas, rng);
    return out;
}

forward::Spectrum add_shot_noise(const forward::Spectrum& spectrum, const InstrumentModel& inst, Rng& rng) {
    return add_shot_noise(spectrum, noise_sigmas(spectrum.wavelengths, inst), rng);
}

} // namespace qelm::noise
