#include "nfce/estimators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace nfce {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct OmpResult {
    std::vector<int> support;  // ascending
    Eigen::VectorXcd coeffs;   // LS coefficients aligned with support
    std::vector<std::pair<int, double>> picks;  // (index, correlation) per round
};

// Greedy selection with LS refit. When normalize is set the correlation is
// divided by the column norm (standard OMP); the plain variant matches the
// boundary-search loop, which correlates against raw columns.
OmpResult omp_select(const Eigen::MatrixXcd& dict, const Eigen::VectorXcd& y,
                     int sparsity, bool normalize) {
    if (sparsity < 1) throw std::invalid_argument("omp: sparsity must be >= 1");
    if (sparsity > dict.cols())
        throw std::invalid_argument("omp: sparsity exceeds dictionary size");
    if (dict.rows() != y.size()) throw std::invalid_argument("omp: dimension mismatch");

    Eigen::VectorXd inv_norms;
    if (normalize) {
        inv_norms = dict.colwise().norm();
        for (Eigen::Index i = 0; i < inv_norms.size(); ++i)
            inv_norms(i) = inv_norms(i) > 0.0 ? 1.0 / inv_norms(i) : 0.0;
    }

    OmpResult out;
    Eigen::VectorXcd r = y;
    Eigen::MatrixXcd selected(dict.rows(), 0);
    bool warned_rank = false;
    for (int u = 0; u < sparsity; ++u) {
        Eigen::VectorXd corr = (dict.adjoint() * r).cwiseAbs();
        if (normalize) corr = corr.cwiseProduct(inv_norms);
        Eigen::Index best = 0;
        const double peak = corr.maxCoeff(&best);
        const int p = static_cast<int>(best);
        out.picks.emplace_back(p, peak);
        const auto pos = std::lower_bound(out.support.begin(), out.support.end(), p);
        if (pos == out.support.end() || *pos != p) {
            const Eigen::Index at = pos - out.support.begin();
            out.support.insert(pos, p);
            Eigen::MatrixXcd grown(dict.rows(), selected.cols() + 1);
            grown << selected.leftCols(at), dict.col(p), selected.rightCols(selected.cols() - at);
            selected = std::move(grown);
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(selected);
        if (!warned_rank && cod.rank() < selected.cols()) {
            std::fprintf(stderr, "omp: rank-deficient LS fit (%ld of %ld)\n",
                         static_cast<long>(cod.rank()), static_cast<long>(selected.cols()));
            warned_rank = true;
        }
        out.coeffs = cod.solve(y);
        r = y - selected * out.coeffs;
    }
    return out;
}

}  // namespace

Stage1Result besvr_stage1(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& psi,
                          int n_peaks, bool split_clusters, double peak_floor) {
    OmpResult omp = omp_select(psi, y, n_peaks, /*normalize=*/false);
    Stage1Result out;
    if (peak_floor > 0.0 && !omp.picks.empty()) {
        // keep only peaks whose selection-time correlation clears the noise
        // floor relative to the first (strongest) pick
        const double floor_abs = peak_floor * omp.picks.front().second;
        for (const auto& [idx, corr] : omp.picks)
            if (corr >= floor_abs) out.peaks.push_back(idx);
        std::sort(out.peaks.begin(), out.peaks.end());
        out.peaks.erase(std::unique(out.peaks.begin(), out.peaks.end()),
                        out.peaks.end());
    } else {
        out.peaks = omp.support;  // already ascending
    }

    if (out.peaks.empty()) return out;
    if (split_clusters && out.peaks.size() >= 2) {
        // cut at the largest gap; R becomes two contiguous runs
        size_t cut = 0;
        int widest = -1;
        for (size_t i = 0; i + 1 < out.peaks.size(); ++i) {
            const int gap = out.peaks[i + 1] - out.peaks[i];
            if (gap > widest) {
                widest = gap;
                cut = i;
            }
        }
        for (int j = out.peaks.front(); j <= out.peaks[cut]; ++j) out.range.push_back(j);
        for (int j = out.peaks[cut + 1]; j <= out.peaks.back(); ++j)
            out.range.push_back(j);
    } else {
        for (int j = out.peaks.front(); j <= out.peaks.back(); ++j) out.range.push_back(j);
    }
    return out;
}

EstimateResult besvr(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& psi,
                     const Eigen::MatrixXcd& dft, const BesvrConfig& config) {
    const auto t0 = Clock::now();
    const Eigen::Index n = psi.cols();

    EstimateResult out;
    if (y.norm() == 0.0) {
        out.z_hat = Eigen::VectorXcd::Zero(n);
        out.h_hat = Eigen::VectorXcd::Zero(n);
        out.wall_time_s = seconds_since(t0);
        return out;
    }

    const Stage1Result stage1 =
        besvr_stage1(y, psi, config.n_peaks, config.split_clusters, config.peak_floor);
    const int r_size = static_cast<int>(stage1.range.size());
    Eigen::MatrixXcd psi_r(psi.rows(), r_size);
    for (int i = 0; i < r_size; ++i) psi_r.col(i) = psi.col(stage1.range[i]);

    // scale the restricted problem so that unit penalty is well conditioned;
    // the minimizer is unchanged (reg_weight scales with the data term)
    const double m = static_cast<double>(psi.rows());
    AdmmParams params = config.lasso;
    params.reg_weight /= m;
    if (params.max_iter <= 0) params.max_iter = r_size;
    auto [zeta, trace] =
        admm_lasso(psi_r / std::sqrt(m), y / std::sqrt(m), params);

    out.z_hat = Eigen::VectorXcd::Zero(n);
    for (int i = 0; i < r_size; ++i) out.z_hat(stage1.range[i]) = zeta(i);
    out.h_hat = dft * out.z_hat;
    out.support = stage1.range;
    out.trace = std::move(trace);
    out.wall_time_s = seconds_since(t0);
    return out;
}

EstimateResult tvr_estimate(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& psi,
                            const Eigen::MatrixXcd& dft, const AdmmParams& params) {
    const auto t0 = Clock::now();
    const double m = static_cast<double>(psi.rows());
    AdmmParams scaled = params;
    scaled.reg_weight /= m;
    if (scaled.max_iter <= 0) scaled.max_iter = static_cast<int>(psi.cols());
    auto [z, trace] = admm_tv(psi / std::sqrt(m), y / std::sqrt(m), scaled);

    EstimateResult out;
    out.z_hat = std::move(z);
    out.h_hat = dft * out.z_hat;
    out.trace = std::move(trace);
    out.wall_time_s = seconds_since(t0);
    return out;
}

PolarGrid build_polar_grid(const ArrayGeometry& geometry, int n_angle, int n_rings,
                           double min_radius) {
    if (n_angle < 1 || n_rings < 1)
        throw std::invalid_argument("build_polar_grid: bad sample counts");
    const int n = geometry.n_elements;
    const double kappa = geometry.wavenumber();
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));

    PolarGrid grid;
    grid.angle_samples.reserve(n_angle);
    for (int i = 0; i < n_angle; ++i) {
        const double s = -1.0 + (2.0 * i + 1.0) / n_angle;
        grid.angle_samples.push_back(std::asin(s));
    }

    const double inv_max = 1.0 / min_radius;
    const double inv_min = 1.0 / std::max(rayleigh_distance(geometry), min_radius);
    for (int s = 0; s < n_rings; ++s) {
        const double inv = (n_rings == 1)
                               ? inv_max
                               : inv_max - s * (inv_max - inv_min) / (n_rings - 1);
        grid.distance_rings.push_back(1.0 / inv);
    }
    grid.distance_rings.push_back(std::numeric_limits<double>::infinity());

    const int g = n_angle * static_cast<int>(grid.distance_rings.size());
    grid.dictionary.resize(n, g);
    int col = 0;
    for (const double r : grid.distance_rings) {
        for (const double angle : grid.angle_samples) {
            if (std::isinf(r)) {
                const double slope = kappa * std::sin(angle);
                for (int e = 0; e < n; ++e) {
                    const double phase = slope * geometry.element_offset(e);
                    grid.dictionary(e, col) =
                        norm * std::complex<double>(std::cos(phase), std::sin(phase));
                }
            } else {
                grid.dictionary.col(col) = norm * steering_vector(geometry, angle, r);
            }
            ++col;
        }
    }
    return grid;
}

EstimateResult pomp_estimate(const Eigen::VectorXcd& y,
                             const Eigen::MatrixXcd& stacked_combiner,
                             const PolarGrid& grid, int sparsity,
                             const Eigen::MatrixXcd& dft) {
    const auto t0 = Clock::now();
    EstimateResult out;
    const Eigen::Index n = stacked_combiner.cols();
    if (y.norm() == 0.0) {
        out.h_hat = Eigen::VectorXcd::Zero(n);
        out.z_hat = Eigen::VectorXcd::Zero(n);
        out.wall_time_s = seconds_since(t0);
        return out;
    }
    Eigen::MatrixXcd effective;
    effective.noalias() = stacked_combiner * grid.dictionary;
    const OmpResult omp = omp_select(effective, y, sparsity, /*normalize=*/true);

    out.h_hat = Eigen::VectorXcd::Zero(n);
    for (size_t i = 0; i < omp.support.size(); ++i)
        out.h_hat += omp.coeffs(static_cast<Eigen::Index>(i)) *
                     grid.dictionary.col(omp.support[i]);
    out.z_hat = dft.adjoint() * out.h_hat;
    out.support = omp.support;
    out.wall_time_s = seconds_since(t0);
    return out;
}

EstimateResult domp_estimate(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& psi,
                             const Eigen::MatrixXcd& dft, int sparsity) {
    const auto t0 = Clock::now();
    EstimateResult out;
    const Eigen::Index n = psi.cols();
    if (y.norm() == 0.0) {
        out.h_hat = Eigen::VectorXcd::Zero(n);
        out.z_hat = Eigen::VectorXcd::Zero(n);
        out.wall_time_s = seconds_since(t0);
        return out;
    }
    const OmpResult omp = omp_select(psi, y, sparsity, /*normalize=*/true);
    out.z_hat = Eigen::VectorXcd::Zero(n);
    for (size_t i = 0; i < omp.support.size(); ++i)
        out.z_hat(omp.support[i]) = omp.coeffs(static_cast<Eigen::Index>(i));
    out.h_hat = dft * out.z_hat;
    out.support = omp.support;
    out.wall_time_s = seconds_since(t0);
    return out;
}

}  // namespace nfce
