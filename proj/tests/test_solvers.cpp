#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nfce/rng.hpp"
#include "nfce/solvers.hpp"
#include "oracles.hpp"

using namespace nfce;

namespace {

Eigen::MatrixXcd random_matrix(int rows, int cols, Rng& rng, bool unit_columns) {
    Eigen::MatrixXcd a(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            a(r, c) = std::complex<double>(rng.normal(), rng.normal());
    if (unit_columns)
        for (int c = 0; c < cols; ++c) a.col(c) /= a.col(c).norm();
    return a;
}

Eigen::VectorXcd random_vector(int n, Rng& rng) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = std::complex<double>(rng.normal(), rng.normal());
    return v;
}

AdmmParams make_params(double reg, double penalty, int iters) {
    AdmmParams p;
    p.reg_weight = reg;
    p.penalty = penalty;
    p.max_iter = iters;
    return p;
}

}  // namespace

TEST_CASE("soft threshold") {
    Eigen::VectorXcd a(4);
    a << std::complex<double>(0.5, 0.0), std::complex<double>(3.0, 4.0),
        std::complex<double>(-2.0, 0.0), std::complex<double>(0.0, 0.0);
    SUBCASE("below threshold maps to zero") {
        CHECK(std::abs(soft_threshold(a, 1.0)(0)) == 0.0);
        CHECK(std::abs(soft_threshold(a, 1.0)(3)) == 0.0);
    }
    SUBCASE("complex shrinkage preserves phase") {
        // |3+4j| = 5, shrink factor 4/5
        CHECK(std::abs(soft_threshold(a, 1.0)(1) - std::complex<double>(2.4, 3.2)) <
              1e-14);
    }
    SUBCASE("real negative input matches the printed sign form") {
        CHECK(std::abs(soft_threshold(a, 0.5)(2) - std::complex<double>(-1.5, 0.0)) <
              1e-14);
    }
    SUBCASE("negative threshold rejected") {
        CHECK_THROWS_AS(soft_threshold(a, -0.1), std::invalid_argument);
    }
}

TEST_CASE("admm lasso") {
    SUBCASE("zero observation gives the zero fixed point") {
        Rng rng(1);
        const Eigen::MatrixXcd psi = random_matrix(8, 12, rng, true);
        auto [zeta, trace] =
            admm_lasso(psi, Eigen::VectorXcd::Zero(8), make_params(0.5, 1.0, 50));
        CHECK(zeta.norm() == 0.0);
        CHECK(trace.iterations_run == 50);
    }
    SUBCASE("orthonormal sensing reduces to a soft threshold of y") {
        Eigen::VectorXcd y(4);
        y << 2.0, 0.5, -3.0, 0.0;
        auto [zeta, trace] =
            admm_lasso(Eigen::MatrixXcd::Identity(4, 4), y, make_params(1.0, 1.0, 500));
        Eigen::VectorXcd expect(4);
        expect << 1.0, 0.0, -2.0, 0.0;
        CHECK((zeta - expect).cwiseAbs().maxCoeff() < 1e-6);
        // sparse-iterate support never leaves the support of Psi^H y
        CHECK(std::abs(zeta(3)) == 0.0);
    }
    SUBCASE("agrees with a coordinate-descent oracle") {
        Rng rng(7);
        const Eigen::MatrixXcd psi = random_matrix(10, 6, rng, true);
        const Eigen::VectorXcd y = random_vector(10, rng);
        const double eta = 0.3;
        auto [zeta, trace] = admm_lasso(psi, y, make_params(eta, 1.0, 3000));
        const Eigen::VectorXcd cd = oracles::coordinate_descent_lasso(psi, y, eta, 3000);
        CHECK(std::abs(oracles::lasso_objective(psi, y, zeta, eta) -
                       oracles::lasso_objective(psi, y, cd, eta)) /
                  oracles::lasso_objective(psi, y, cd, eta) <
              1e-6);
    }
    SUBCASE("final objective close to a long ISTA run") {
        Rng rng(21);
        const Eigen::MatrixXcd psi = random_matrix(16, 32, rng, true);
        const Eigen::VectorXcd y = random_vector(16, rng);
        const double eta = 0.1;
        auto [zeta, trace] = admm_lasso(psi, y, make_params(eta, 1.0, 2000));
        const Eigen::VectorXcd ista = oracles::ista_lasso(psi, y, eta, 100000);
        const double ref = oracles::lasso_objective(psi, y, ista, eta);
        CHECK(std::abs(oracles::lasso_objective(psi, y, zeta, eta) - ref) / ref < 1e-4);
    }
    SUBCASE("objective trace is monotone non-increasing on random instances") {
        Rng rng(33);
        for (int inst = 0; inst < 20; ++inst) {
            const Eigen::MatrixXcd psi = random_matrix(12, 20, rng, true);
            const Eigen::VectorXcd y = random_vector(12, rng);
            auto [zeta, trace] = admm_lasso(psi, y, make_params(0.2, 1.0, 200));
            for (size_t i = 1; i < trace.objective_history.size(); ++i)
                CHECK(trace.objective_history[i] <=
                      trace.objective_history[i - 1] + 1e-8);
        }
    }
    SUBCASE("deterministic") {
        Rng rng(5);
        const Eigen::MatrixXcd psi = random_matrix(9, 14, rng, true);
        const Eigen::VectorXcd y = random_vector(9, rng);
        auto [z1, t1] = admm_lasso(psi, y, make_params(0.2, 1.0, 100));
        auto [z2, t2] = admm_lasso(psi, y, make_params(0.2, 1.0, 100));
        CHECK((z1 - z2).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("early stopping honors rel_tol") {
        Rng rng(6);
        const Eigen::MatrixXcd psi = random_matrix(10, 10, rng, true);
        const Eigen::VectorXcd y = random_vector(10, rng);
        AdmmParams p = make_params(0.1, 1.0, 10000);
        p.rel_tol = 1e-10;
        auto [zeta, trace] = admm_lasso(psi, y, p);
        CHECK(trace.iterations_run < 10000);
    }
    SUBCASE("input validation") {
        const Eigen::MatrixXcd psi = Eigen::MatrixXcd::Identity(4, 4);
        const Eigen::VectorXcd y = Eigen::VectorXcd::Ones(3);
        CHECK_THROWS_AS(admm_lasso(psi, y, make_params(0.1, 1.0, 10)),
                        std::invalid_argument);
        CHECK_THROWS_AS(admm_lasso(psi, Eigen::VectorXcd::Ones(4),
                                   make_params(0.1, -1.0, 10)),
                        std::invalid_argument);
        CHECK_THROWS_AS(admm_lasso(psi, Eigen::VectorXcd::Ones(4),
                                   make_params(0.1, 1.0, 0)),
                        std::invalid_argument);
    }
}

TEST_CASE("first difference operator") {
    SUBCASE("n=3 closed form") {
        const Eigen::MatrixXd d = first_difference_matrix(3);
        Eigen::MatrixXd expect(2, 3);
        expect << -1, 1, 0, 0, -1, 1;
        CHECK((d - expect).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("constant vectors are in the nullspace") {
        const Eigen::MatrixXd d = first_difference_matrix(7);
        CHECK((d * Eigen::VectorXd::Ones(7)).cwiseAbs().maxCoeff() == 0.0);
        CHECK(d.fullPivLu().rank() == 6);
    }
    SUBCASE("total variation of a two-jump signal") {
        Eigen::VectorXd z(5);
        z << 0, 0, 5, 5, 0;
        CHECK((first_difference_matrix(5) * z).cwiseAbs().sum() == doctest::Approx(10.0));
    }
    SUBCASE("n < 2 rejected") {
        CHECK_THROWS_AS(first_difference_matrix(1), std::invalid_argument);
    }
}

TEST_CASE("admm tv") {
    SUBCASE("vanishing weight reproduces the data") {
        Eigen::VectorXcd y(4);
        y << 1.0, 1.0, 5.0, 5.0;
        auto [z, trace] =
            admm_tv(Eigen::MatrixXcd::Identity(4, 4), y, make_params(1e-6, 1.0, 1000));
        CHECK((z - y).cwiseAbs().maxCoeff() < 1e-3);
    }
    SUBCASE("heavy weight flattens to the mean") {
        Eigen::VectorXcd y(4);
        y << 1.0, 1.0, 5.0, 5.0;
        auto [z, trace] =
            admm_tv(Eigen::MatrixXcd::Identity(4, 4), y, make_params(1e3, 1.0, 1000));
        for (int i = 0; i < 4; ++i) CHECK(std::abs(z(i) - 3.0) < 1e-3);
    }
    SUBCASE("zero observation gives zero") {
        auto [z, trace] = admm_tv(Eigen::MatrixXcd::Identity(4, 4),
                                  Eigen::VectorXcd::Zero(4), make_params(0.5, 1.0, 50));
        CHECK(z.norm() == 0.0);
    }
    SUBCASE("matches the exact 1-D TV denoiser on piecewise-constant data") {
        Rng rng(17);
        for (int inst = 0; inst < 5; ++inst) {
            const int n = 24;
            std::vector<double> y(n);
            double level = rng.uniform(-2.0, 2.0);
            for (int i = 0; i < n; ++i) {
                if (rng.uniform() < 0.15) level = rng.uniform(-2.0, 2.0);
                y[i] = level + 0.05 * rng.normal();
            }
            const double lambda = 0.2;
            const std::vector<double> exact = oracles::tv_denoise_1d(y, lambda);
            REQUIRE(oracles::tv_kkt_violation(y, exact, lambda) < 1e-8);
            Eigen::VectorXcd yc(n);
            for (int i = 0; i < n; ++i) yc(i) = y[i];
            auto [z, trace] = admm_tv(Eigen::MatrixXcd::Identity(n, n), yc,
                                      make_params(lambda, 1.0, 4000));
            for (int i = 0; i < n; ++i) CHECK(std::abs(z(i) - exact[i]) < 1e-3);
        }
    }
    SUBCASE("jump count stays near the truth for tuned weight") {
        Rng rng(19);
        const int n = 40;
        Eigen::VectorXcd truth = Eigen::VectorXcd::Zero(n);
        for (int i = 10; i < 20; ++i) truth(i) = 2.0;
        for (int i = 28; i < 34; ++i) truth(i) = -1.5;  // 4 true jumps
        Eigen::VectorXcd y = truth;
        for (int i = 0; i < n; ++i) y(i) += 0.01 * rng.normal();
        auto [z, trace] =
            admm_tv(Eigen::MatrixXcd::Identity(n, n), y, make_params(0.05, 1.0, 4000));
        int jumps = 0;
        for (int i = 0; i + 1 < n; ++i)
            if (std::abs(z(i + 1) - z(i)) > 0.05) ++jumps;
        CHECK(jumps <= 5);
    }
    SUBCASE("deterministic and traces sized to iterations") {
        Rng rng(23);
        const Eigen::MatrixXcd psi = random_matrix(12, 16, rng, true);
        const Eigen::VectorXcd y = random_vector(12, rng);
        auto [z1, t1] = admm_tv(psi, y, make_params(0.1, 1.0, 64));
        auto [z2, t2] = admm_tv(psi, y, make_params(0.1, 1.0, 64));
        CHECK((z1 - z2).cwiseAbs().maxCoeff() == 0.0);
        CHECK(t1.iterations_run == 64);
        CHECK(t1.primal_residual_history.size() == 64);
        CHECK(t1.objective_history.size() == 64);
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(admm_tv(Eigen::MatrixXcd::Identity(4, 4),
                                Eigen::VectorXcd::Ones(4), make_params(0.1, 0.0, 10)),
                        std::invalid_argument);
        CHECK_THROWS_AS(admm_tv(Eigen::MatrixXcd::Ones(4, 1),
                                Eigen::VectorXcd::Ones(4), make_params(0.1, 1.0, 10)),
                        std::invalid_argument);
    }
}
