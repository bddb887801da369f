#include "nfce/solvers.hpp"

#include <cmath>
#include <stdexcept>

namespace nfce {

namespace {

void check_common(const Eigen::MatrixXcd& psi, const Eigen::VectorXcd& y,
                  const AdmmParams& params) {
    if (psi.rows() != y.size())
        throw std::invalid_argument("admm: dimension mismatch between psi and y");
    if (psi.cols() < 1) throw std::invalid_argument("admm: psi has no columns");
    if (params.penalty <= 0.0) throw std::invalid_argument("admm: penalty must be > 0");
    if (params.reg_weight < 0.0)
        throw std::invalid_argument("admm: reg_weight must be >= 0");
    if (params.max_iter < 1) throw std::invalid_argument("admm: max_iter must be >= 1");
    if (!psi.allFinite() || !y.allFinite())
        throw std::invalid_argument("admm: non-finite inputs");
}

#ifndef NDEBUG
void check_normal_equation(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& z,
                           const Eigen::VectorXcd& rhs) {
    const double denom = std::max(rhs.norm(), 1e-300);
    if ((a * z - rhs).norm() / denom > 1e-8)
        throw std::runtime_error("admm: linear-system residual exceeds 1e-8");
}
#endif

// first-difference product, (n-1)-vector
Eigen::VectorXcd apply_diff(const Eigen::VectorXcd& z) {
    const Eigen::Index n = z.size();
    return z.segment(1, n - 1) - z.segment(0, n - 1);
}

// adjoint of apply_diff, n-vector
Eigen::VectorXcd apply_diff_adjoint(const Eigen::VectorXcd& w) {
    const Eigen::Index n = w.size() + 1;
    Eigen::VectorXcd out(n);
    out(0) = -w(0);
    for (Eigen::Index j = 1; j < n - 1; ++j) out(j) = w(j - 1) - w(j);
    out(n - 1) = w(n - 2);
    return out;
}

}  // namespace

Eigen::VectorXcd soft_threshold(const Eigen::VectorXcd& a, double t) {
    if (t < 0.0) throw std::invalid_argument("soft_threshold: negative threshold");
    Eigen::VectorXcd out(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double mag = std::abs(a(i));
        out(i) = (mag > t) ? a(i) * ((mag - t) / mag) : std::complex<double>(0.0, 0.0);
    }
    return out;
}

std::pair<Eigen::VectorXcd, AdmmTrace> admm_lasso(const Eigen::MatrixXcd& psi,
                                                  const Eigen::VectorXcd& y,
                                                  const AdmmParams& params) {
    check_common(psi, y, params);
    const Eigen::Index n = psi.cols();
    const double eps = params.penalty;
    const double thresh = params.reg_weight / eps;

    Eigen::MatrixXcd a = psi.adjoint() * psi;
    a.diagonal().array() += eps;
    const Eigen::LDLT<Eigen::MatrixXcd> ldlt(a);
    const Eigen::VectorXcd psi_h_y = psi.adjoint() * y;

    Eigen::VectorXcd z = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd zeta = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(n);

    AdmmTrace trace;
    for (int it = 0; it < params.max_iter; ++it) {
        const Eigen::VectorXcd rhs = psi_h_y + eps * (zeta - phi);
        z = ldlt.solve(rhs);
#ifndef NDEBUG
        check_normal_equation(a, z, rhs);
#endif
        zeta = soft_threshold(z + phi, thresh);
        phi += eps * (z - zeta);

        const double primal = (z - zeta).norm();
        trace.primal_residual_history.push_back(primal);
        if (params.record_objective)
            trace.objective_history.push_back(
                0.5 * (y - psi * zeta).squaredNorm() +
                params.reg_weight * zeta.cwiseAbs().sum());
        ++trace.iterations_run;
        if (params.rel_tol > 0.0 && primal / std::max(z.norm(), 1.0) < params.rel_tol)
            break;
    }
    return {zeta, trace};
}

Eigen::MatrixXd first_difference_matrix(int n) {
    if (n < 2) throw std::invalid_argument("first_difference_matrix: n must be >= 2");
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n - 1, n);
    for (int j = 0; j < n - 1; ++j) {
        d(j, j) = -1.0;
        d(j, j + 1) = 1.0;
    }
    return d;
}

std::pair<Eigen::VectorXcd, AdmmTrace> admm_tv(const Eigen::MatrixXcd& psi,
                                               const Eigen::VectorXcd& y,
                                               const AdmmParams& params) {
    check_common(psi, y, params);
    const Eigen::Index n = psi.cols();
    if (n < 2) throw std::invalid_argument("admm_tv: psi must have >= 2 columns");
    const double eps = params.penalty;
    const double thresh = params.reg_weight / eps;

    // D^T D is tridiagonal: diag 2 (1 at the ends), off-diagonals -1
    Eigen::MatrixXcd a = psi.adjoint() * psi;
    for (Eigen::Index j = 0; j < n; ++j)
        a(j, j) += eps * ((j == 0 || j == n - 1) ? 1.0 : 2.0);
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
        a(j, j + 1) -= eps;
        a(j + 1, j) -= eps;
    }
    const Eigen::LDLT<Eigen::MatrixXcd> ldlt(a);
    const Eigen::VectorXd diag = ldlt.vectorD().real();
    if (diag.cwiseAbs().minCoeff() <= 1e-12 * diag.cwiseAbs().maxCoeff())
        throw std::runtime_error("admm_tv: singular system matrix");
    // explicit inverse trades the per-iteration triangular solves for a GEMV
    const Eigen::MatrixXcd inv =
        ldlt.solve(Eigen::MatrixXcd::Identity(n, n));
    const Eigen::VectorXcd psi_h_y = psi.adjoint() * y;
    const Eigen::VectorXcd z_base = inv * psi_h_y;

    Eigen::VectorXcd z = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd beta = Eigen::VectorXcd::Zero(n - 1);
    Eigen::VectorXcd xi = Eigen::VectorXcd::Zero(n - 1);

    AdmmTrace trace;
    for (int it = 0; it < params.max_iter; ++it) {
        const Eigen::VectorXcd dt = apply_diff_adjoint(beta - xi);
        z.noalias() = z_base + eps * (inv * dt);
#ifndef NDEBUG
        check_normal_equation(a, z, psi_h_y + eps * dt);
#endif
        const Eigen::VectorXcd dz = apply_diff(z);
        beta = soft_threshold(dz + xi, thresh);
        xi += eps * (dz - beta);

        const double primal = (dz - beta).norm();
        trace.primal_residual_history.push_back(primal);
        if (params.record_objective)
            trace.objective_history.push_back(
                0.5 * (y - psi * z).squaredNorm() +
                params.reg_weight * dz.cwiseAbs().sum());
        ++trace.iterations_run;
        if (params.rel_tol > 0.0 && primal / std::max(z.norm(), 1.0) < params.rel_tol)
            break;
    }
    return {z, trace};
}

}  // namespace nfce
