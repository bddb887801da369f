#ifndef NFCE_ESTIMATORS_HPP
#define NFCE_ESTIMATORS_HPP

#include <Eigen/Dense>
#include <vector>

#include "nfce/geometry.hpp"
#include "nfce/solvers.hpp"

namespace nfce {

struct EstimateResult {
    Eigen::VectorXcd h_hat;
    Eigen::VectorXcd z_hat;
    std::vector<int> support;
    double wall_time_s = 0.0;
    AdmmTrace trace;
};

struct BesvrConfig {
    int n_peaks = 30;        // U
    AdmmParams lasso;        // max_iter <= 0 means i_max = |R|
    bool split_clusters = false;  // split the peak set at its largest gap
    // drop peaks whose selection-time correlation is below this fraction of
    // the first peak before forming R (0 = keep all n_peaks picks)
    double peak_floor = 0.0;
};

struct Stage1Result {
    std::vector<int> peaks;  // omega, ascending
    std::vector<int> range;  // R, one or two contiguous runs
};

// Greedy peak search (residual correlation without column normalization, LS
// refit each round), then R = {min(omega) .. max(omega)}. With split_clusters
// the peak set is cut at its largest gap into two contiguous runs.
Stage1Result besvr_stage1(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& psi,
                          int n_peaks, bool split_clusters = false,
                          double peak_floor = 0.0);

// Two-stage estimator: stage 1 locates the block, stage 2 runs the l1 ADMM on
// the restricted columns and embeds the sub-vector back (zeros elsewhere).
EstimateResult besvr(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& psi,
                     const Eigen::MatrixXcd& dft, const BesvrConfig& config);

// One-stage estimator: TV-regularized ADMM over the full angular vector.
// max_iter <= 0 defaults to the number of columns.
EstimateResult tvr_estimate(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& psi,
                            const Eigen::MatrixXcd& dft, const AdmmParams& params);

struct PolarGrid {
    std::vector<double> angle_samples;   // radians
    std::vector<double> distance_rings;  // meters; last entry is +inf (far field)
    Eigen::MatrixXcd dictionary;         // N_R x G, unit-norm columns, ring-major
};

// Angles uniform in sin-space over [-1, 1]; finite rings uniform in inverse
// distance between min_radius and the Rayleigh distance, plus a far-field ring.
PolarGrid build_polar_grid(const ArrayGeometry& geometry, int n_angle, int n_rings,
                           double min_radius = 5.0);

// OMP over the effective dictionary W_M * grid.dictionary (normalized
// correlations), LS refit, h_hat = grid columns x coefficients.
EstimateResult pomp_estimate(const Eigen::VectorXcd& y,
                             const Eigen::MatrixXcd& stacked_combiner,
                             const PolarGrid& grid, int sparsity,
                             const Eigen::MatrixXcd& dft);

// Plain OMP on the DFT dictionary psi; z embedding and h_hat = F z_hat.
EstimateResult domp_estimate(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& psi,
                             const Eigen::MatrixXcd& dft, int sparsity);

}  // namespace nfce

#endif
