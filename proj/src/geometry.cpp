#include "nfce/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nfce {

ArrayGeometry ArrayGeometry::make(int n_elements, double carrier_hz, double spacing) {
    if (n_elements < 1) throw std::invalid_argument("n_elements must be >= 1");
    if (carrier_hz <= 0.0) throw std::invalid_argument("carrier_hz must be > 0");
    ArrayGeometry g;
    g.n_elements = n_elements;
    g.carrier_hz = carrier_hz;
    g.spacing = spacing > 0.0 ? spacing : kSpeedOfLight / (2.0 * carrier_hz);
    return g;
}

double element_distance(const ArrayGeometry& geometry, double angle_rad,
                        double distance_m, int n) {
    if (n < 0 || n >= geometry.n_elements)
        throw std::out_of_range("element index out of range");
    const double off = geometry.element_offset(n);
    const double r = distance_m;
    return std::sqrt(r * r + off * off - 2.0 * r * off * std::sin(angle_rad));
}

Eigen::VectorXcd steering_vector(const ArrayGeometry& geometry, double angle_rad,
                                 double distance_m) {
    if (!std::isfinite(angle_rad) || !std::isfinite(distance_m) || distance_m <= 0.0)
        throw std::invalid_argument("steering_vector: non-finite or non-positive input");
    const double kappa = geometry.wavenumber();
    Eigen::VectorXcd a(geometry.n_elements);
    for (int n = 0; n < geometry.n_elements; ++n) {
        const double rn = element_distance(geometry, angle_rad, distance_m, n);
        const double phase = -kappa * (rn - distance_m);
        a(n) = std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return a;
}

ChannelRealization synthesize_channel(const ArrayGeometry& geometry,
                                      const std::vector<NearFieldPath>& paths) {
    if (paths.empty()) throw std::invalid_argument("synthesize_channel: empty path list");
    ChannelRealization out;
    out.paths = paths;
    out.h = Eigen::VectorXcd::Zero(geometry.n_elements);
    for (const auto& p : paths)
        out.h += p.gain * steering_vector(geometry, p.angle_rad, p.distance_m);
    return out;
}

std::vector<NearFieldPath> sample_scenario(const ScenarioConfig& config, Rng& rng) {
    if (config.n_paths < 1 || config.n_paths > 2)
        throw std::invalid_argument("sample_scenario: n_paths must be 1 or 2");
    if (config.distance_min_m <= 0.0 || config.distance_max_m < config.distance_min_m)
        throw std::invalid_argument("sample_scenario: bad distance range");
    if (config.angle_max_rad < config.angle_min_rad)
        throw std::invalid_argument("sample_scenario: bad angle range");

    std::vector<double> angles(config.n_paths);
    for (auto& a : angles) a = rng.uniform(config.angle_min_rad, config.angle_max_rad);
    std::sort(angles.begin(), angles.end());

    std::vector<NearFieldPath> paths(config.n_paths);
    for (int l = 0; l < config.n_paths; ++l) {
        NearFieldPath& p = paths[l];
        p.kind = (l == 0) ? PathKind::kLos : PathKind::kNlos;
        p.angle_rad = angles[l];
        p.distance_m = rng.uniform(config.distance_min_m, config.distance_max_m);
        if (config.gain_model == GainModel::kLosUnitNlosWeak) {
            if (l == 0) {
                const double th = rng.uniform(0.0, 2.0 * kPi);
                p.gain = std::complex<double>(std::cos(th), std::sin(th));
            } else {
                p.gain = rng.cnormal(0.1);
            }
        } else {
            p.gain = rng.cnormal(1.0);
        }
    }
    return paths;
}

double rayleigh_distance(const ArrayGeometry& geometry) {
    const double d = geometry.aperture();
    return 2.0 * d * d / geometry.wavelength();
}

}  // namespace nfce
