#ifndef NFCE_GEOMETRY_HPP
#define NFCE_GEOMETRY_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "nfce/rng.hpp"

namespace nfce {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact SI
inline constexpr double kPi = 3.141592653589793238462643383279;

// Uniform linear array. Element n sits at coordinate (delta_n * d, 0) with
// delta_n = (2n - N + 1) / 2, so the offsets are symmetric about the origin.
struct ArrayGeometry {
    int n_elements = 0;
    double spacing = 0.0;     // d [m]
    double carrier_hz = 0.0;  // f_c

    // spacing <= 0 selects the half-wavelength default d = c / (2 f_c)
    static ArrayGeometry make(int n_elements, double carrier_hz, double spacing = 0.0);

    double wavelength() const { return kSpeedOfLight / carrier_hz; }
    double wavenumber() const { return 2.0 * kPi * carrier_hz / kSpeedOfLight; }
    double element_offset(int n) const {
        return spacing * (2.0 * n - n_elements + 1.0) / 2.0;
    }
    double aperture() const { return (n_elements - 1) * spacing; }
};

enum class PathKind { kLos, kNlos };

struct NearFieldPath {
    std::complex<double> gain;
    double angle_rad = 0.0;   // phi
    double distance_m = 0.0;  // r
    PathKind kind = PathKind::kLos;
};

struct ChannelRealization {
    Eigen::VectorXcd h;
    std::vector<NearFieldPath> paths;
};

enum class GainModel {
    kLosUnitNlosWeak,  // |rho_1| = 1 with random phase; NLOS gains CN(0, 0.1)
    kAllGaussian,      // every gain CN(0, 1)
};

struct ScenarioConfig {
    int n_paths = 2;
    double distance_min_m = 10.0;
    double distance_max_m = 50.0;
    double angle_min_rad = -kPi;
    double angle_max_rad = kPi;
    GainModel gain_model = GainModel::kLosUnitNlosWeak;
};

// Distance from element n to a source at polar (r, phi):
//   sqrt(r^2 + delta_n^2 d^2 - 2 r delta_n d sin(phi))
double element_distance(const ArrayGeometry& geometry, double angle_rad,
                        double distance_m, int n);

inline double element_distance(const ArrayGeometry& geometry,
                               const NearFieldPath& path, int n) {
    return element_distance(geometry, path.angle_rad, path.distance_m, n);
}

// Spherical-wavefront steering vector; entry n is exp(-j k (r^(n) - r)).
Eigen::VectorXcd steering_vector(const ArrayGeometry& geometry, double angle_rad,
                                 double distance_m);

// h = sum_l rho_l * steering(phi_l, r_l)
ChannelRealization synthesize_channel(const ArrayGeometry& geometry,
                                      const std::vector<NearFieldPath>& paths);

// Draw path parameters per the scenario config. First path is LOS, the rest
// NLOS; angles are sorted ascending across paths.
std::vector<NearFieldPath> sample_scenario(const ScenarioConfig& config, Rng& rng);

// 2 D^2 / lambda with aperture D = (N-1) d
double rayleigh_distance(const ArrayGeometry& geometry);

}  // namespace nfce

#endif
