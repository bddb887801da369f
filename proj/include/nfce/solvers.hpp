#ifndef NFCE_SOLVERS_HPP
#define NFCE_SOLVERS_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace nfce {

struct AdmmParams {
    double reg_weight = 0.0;       // eta (or eta_TV)
    double penalty = 1.0;          // eps (or eps_TV), > 0
    int max_iter = 0;              // <= 0 lets the caller-side default apply
    double rel_tol = 0.0;          // 0 disables early stopping
    bool record_objective = true;  // objective history costs one extra matvec/iter
};

struct AdmmTrace {
    int iterations_run = 0;
    std::vector<double> primal_residual_history;
    std::vector<double> objective_history;  // empty when record_objective is off
};

// Complex soft threshold: (a/|a|) * max(|a| - t, 0), with 0 mapped to 0.
Eigen::VectorXcd soft_threshold(const Eigen::VectorXcd& a, double t);

// ADMM for  min 0.5 ||y - Psi x||^2 + eta ||x||_1.
// Updates per iteration:
//   z    <- (Psi^H Psi + eps I)^-1 [Psi^H y + eps (zeta - phi)]
//   zeta <- S(z + phi, eta / eps)
//   phi  <- phi + eps (z - zeta)
// starting from zeros; returns the final zeta (the sparse iterate).
std::pair<Eigen::VectorXcd, AdmmTrace> admm_lasso(const Eigen::MatrixXcd& psi,
                                                  const Eigen::VectorXcd& y,
                                                  const AdmmParams& params);

// Dense (n-1) x n first-difference operator: row j has -1 at j, +1 at j+1.
Eigen::MatrixXd first_difference_matrix(int n);

// ADMM for  min 0.5 ||y - Psi z||^2 + eta_TV ||D z||_1.
// Updates per iteration:
//   z    <- (Psi^H Psi + eps D^T D)^-1 [Psi^H y + eps D^T (beta - xi)]
//   beta <- S(D z + xi, eta / eps)
//   xi   <- xi + eps (D z - beta)
// zero-initialized; returns the final z. The system matrix is factored once.
std::pair<Eigen::VectorXcd, AdmmTrace> admm_tv(const Eigen::MatrixXcd& psi,
                                               const Eigen::VectorXcd& y,
                                               const AdmmParams& params);

}  // namespace nfce

#endif
