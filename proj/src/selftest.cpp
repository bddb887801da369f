#include "nfce/selftest.hpp"

#include <cmath>
#include <ostream>

#include "nfce/estimators.hpp"
#include "nfce/harness.hpp"
#include "nfce/measurement.hpp"
#include "nfce/solvers.hpp"

namespace nfce {

namespace {

struct Reporter {
    std::ostream& out;
    int failures = 0;

    void check(const char* name, bool ok) {
        out << (ok ? "PASS " : "FAIL ") << name << '\n';
        if (!ok) ++failures;
    }
};

}  // namespace

int run_selftest(std::ostream& out, bool corrupt_dft) {
    Reporter rep{out};

    Eigen::MatrixXcd f = dft_matrix(16);
    if (corrupt_dft) f *= 1.5;
    rep.check("dft_unitarity",
              (f * f.adjoint() - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() <
                  1e-10);

    {
        Eigen::VectorXcd a(3);
        a << std::complex<double>(0.5, 0.0), std::complex<double>(3.0, 4.0),
            std::complex<double>(-2.0, 0.0);
        const Eigen::VectorXcd s1 = soft_threshold(a, 1.0);
        rep.check("soft_threshold_below", std::abs(s1(0)) == 0.0);
        rep.check("soft_threshold_complex",
                  std::abs(s1(1) - std::complex<double>(2.4, 3.2)) < 1e-12);
        const Eigen::VectorXcd s2 = soft_threshold(a, 0.5);
        rep.check("soft_threshold_real_sign",
                  std::abs(s2(2) - std::complex<double>(-1.5, 0.0)) < 1e-12);
    }

    {
        const ArrayGeometry g = ArrayGeometry::make(64, 28e9);
        const Eigen::VectorXcd a = steering_vector(g, 0.4, 12.0);
        rep.check("steering_unit_modulus",
                  (a.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
        rep.check("rayleigh_positive", rayleigh_distance(g) > 0.0);
    }

    {
        // orthonormal sensing: the LASSO minimizer is the soft threshold of y
        Eigen::VectorXcd y(4);
        y << 2.0, 0.5, -3.0, 0.0;
        AdmmParams params;
        params.reg_weight = 1.0;
        params.penalty = 1.0;
        params.max_iter = 500;
        auto [zeta, trace] =
            admm_lasso(Eigen::MatrixXcd::Identity(4, 4), y, params);
        const Eigen::VectorXcd expect = soft_threshold(y, 1.0);
        rep.check("admm_lasso_orthonormal", (zeta - expect).norm() < 1e-6);
        rep.check("admm_lasso_trace",
                  trace.iterations_run == static_cast<int>(trace.objective_history.size()));
    }

    {
        // vanishing TV weight on an identity system reproduces the data
        Eigen::VectorXcd y(4);
        y << 1.0, 1.0, 5.0, 5.0;
        AdmmParams params;
        params.reg_weight = 1e-6;
        params.penalty = 1.0;
        params.max_iter = 1000;
        auto [z, trace] = admm_tv(Eigen::MatrixXcd::Identity(4, 4), y, params);
        rep.check("admm_tv_identity", (z - y).norm() < 1e-3);
    }

    {
        Eigen::VectorXcd h(4);
        h << 1.0, 2.0, 3.0, 4.0;
        rep.check("nmse_identities",
                  nmse(h, h) == 0.0 && nmse(h, Eigen::VectorXcd::Zero(4)) == 1.0);
    }

    out << (rep.failures == 0 ? "selftest: all checks passed\n"
                              : "selftest: FAILURES detected\n");
    return rep.failures;
}

}  // namespace nfce
