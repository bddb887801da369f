// Long-running acceptance suite. Each criterion prints exactly one
// [PASS]/[FAIL] line; the exit status is the number of failed criteria.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nfce/harness.hpp"
#include "nfce/rng.hpp"
#include "oracles.hpp"

using namespace nfce;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what,
            const std::string& detail) {
    if (!pass) ++g_failures;
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": "
              << what << " (" << detail << ")\n"
              << std::flush;
}

ExperimentConfig paper_config() {
    ExperimentConfig c;
    c.threads = 1;
    return c;  // defaults mirror the reference setup: N_R=450, T=45, N_RF=5
}

// mean NMSE / mean time of an estimator at one sweep point
struct PointStats {
    double mean_nmse = 0.0;
    double mean_time = 0.0;
};

PointStats run_point(const ExperimentConfig& config, const std::string& estimator,
                     double snr_db, int n_trials, const PolarGrid* grid) {
    PointStats s;
    for (int t = 0; t < n_trials; ++t) {
        const TrialRecord r = run_trial(config, estimator, snr_db, t, grid);
        s.mean_nmse += r.nmse;
        s.mean_time += r.wall_time_s;
    }
    s.mean_nmse /= n_trials;
    s.mean_time /= n_trials;
    return s;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

void criterion_block_sparsity() {
    const ExperimentConfig cfg = paper_config();
    const ArrayGeometry g = cfg.geometry();
    const Eigen::MatrixXcd dft = dft_matrix(g.n_elements);
    Rng rng(2025);
    int ok = 0;
    for (int i = 0; i < 100; ++i) {
        const auto paths = sample_scenario(cfg.scenario, rng);
        const ChannelRealization c = synthesize_channel(g, paths);
        const Eigen::VectorXcd z = dft.adjoint() * c.h;
        if (oracles::min_two_window_width(z, 0.95) <= g.n_elements / 4) ++ok;
    }
    report(1, ok >= 90,
           "two windows of combined width <= N_R/4 capture 95% of the angular energy",
           std::to_string(ok) + "/100 scenarios");
}

void criteria_snr_behaviour() {
    // single-dominant-path geometry where the error floor of the gridded
    // baseline is visible
    ExperimentConfig cfg = paper_config();
    cfg.scenario.n_paths = 1;
    const PolarGrid grid = make_polar_grid(cfg, cfg.geometry());
    const int trials = cfg.n_trials;

    const PointStats tvr20 = run_point(cfg, "tvr", 20.0, trials, nullptr);
    const PointStats tvr25 = run_point(cfg, "tvr", 25.0, trials, nullptr);
    const PointStats tvr30 = run_point(cfg, "tvr", 30.0, trials, nullptr);
    const PointStats pomp25 = run_point(cfg, "pomp", 25.0, trials, &grid);
    const PointStats pomp30 = run_point(cfg, "pomp", 30.0, trials, &grid);

    const bool floor_ok = pomp25.mean_nmse >= 3e-3 && pomp25.mean_nmse <= 3e-2 &&
                          pomp30.mean_nmse >= 3e-3 && pomp30.mean_nmse <= 3e-2;
    report(2, floor_ok, "gridded polar baseline floors in [3e-3, 3e-2] at high SNR",
           "pomp nmse 25dB=" + fmt(pomp25.mean_nmse) +
               " 30dB=" + fmt(pomp30.mean_nmse));

    const bool tvr_ok = tvr25.mean_nmse < pomp25.mean_nmse &&
                        tvr30.mean_nmse < pomp30.mean_nmse &&
                        tvr30.mean_nmse < tvr20.mean_nmse;
    report(3, tvr_ok, "TV estimator beats the gridded baseline and keeps improving",
           "tvr nmse 20dB=" + fmt(tvr20.mean_nmse) + " 25dB=" + fmt(tvr25.mean_nmse) +
               " 30dB=" + fmt(tvr30.mean_nmse) + " vs pomp 25dB=" +
               fmt(pomp25.mean_nmse) + " 30dB=" + fmt(pomp30.mean_nmse));
}

void criterion_rf_chains() {
    ExperimentConfig cfg = paper_config();  // two-path scenarios
    const std::vector<double> snrs = {15.0, 20.0, 25.0, 30.0};
    std::map<int, std::map<double, double>> tvr;
    for (int rf : {4, 6}) {
        ExperimentConfig c = cfg;
        c.n_rf = rf;
        for (double s : snrs)
            tvr[rf][s] = run_point(c, "tvr", s, c.n_trials, nullptr).mean_nmse;
    }
    ExperimentConfig c4 = cfg;
    c4.n_rf = 4;
    const PolarGrid grid = make_polar_grid(c4, c4.geometry());
    const double pomp25 = run_point(c4, "pomp", 25.0, c4.n_trials, &grid).mean_nmse;
    const double pomp30 = run_point(c4, "pomp", 30.0, c4.n_trials, &grid).mean_nmse;

    bool pass = true;
    std::string detail;
    for (double s : snrs) {
        if (!(tvr[6][s] < tvr[4][s])) pass = false;
        detail += "tvr@" + fmt(s) + "dB rf4=" + fmt(tvr[4][s]) +
                  " rf6=" + fmt(tvr[6][s]) + "; ";
    }
    if (!(tvr[4][25.0] < pomp25 && tvr[4][30.0] < pomp30)) pass = false;
    detail += "pomp rf4 25dB=" + fmt(pomp25) + " 30dB=" + fmt(pomp30);
    report(4, pass, "more RF chains help the TV estimator; rf4 still beats the baseline",
           detail);
}

void criterion_cpu_time() {
    ExperimentConfig cfg = paper_config();
    cfg.estimators = {"besvr", "tvr", "pomp"};
    const MetricsSummary m = sweep_elements_time(cfg);
    std::map<std::string, std::map<double, double>> t;
    for (const auto& row : m.rows) t[row.estimator][row.axis_value] = row.mean_time_s;

    const bool tvr_fast = t["tvr"][450.0] < t["pomp"][450.0];
    double bmin = std::numeric_limits<double>::infinity(), bmax = 0.0;
    for (double n : {150.0, 300.0, 450.0}) {
        bmin = std::min(bmin, t["besvr"][n]);
        bmax = std::max(bmax, t["besvr"][n]);
    }
    const bool besvr_flat = bmax <= 2.0 * bmin;
    report(5, tvr_fast && besvr_flat,
           "TV beats the gridded baseline on CPU time; two-stage time is near-flat in N_R",
           "t450 tvr=" + fmt(t["tvr"][450.0]) + "s pomp=" + fmt(t["pomp"][450.0]) +
               "s; besvr " + fmt(t["besvr"][150.0]) + "/" + fmt(t["besvr"][300.0]) +
               "/" + fmt(t["besvr"][450.0]) + "s");
}

void criterion_solver_oracles() {
    Rng rng(404);
    bool lasso_ok = true;
    double worst_rel = 0.0;
    for (int inst = 0; inst < 20; ++inst) {
        Eigen::MatrixXcd psi(16, 32);
        for (int r = 0; r < 16; ++r)
            for (int c = 0; c < 32; ++c) psi(r, c) = rng.cnormal();
        for (int c = 0; c < 32; ++c) psi.col(c) /= psi.col(c).norm();
        Eigen::VectorXcd y(16);
        for (int r = 0; r < 16; ++r) y(r) = rng.cnormal();
        const double eta = 0.05 + 0.2 * rng.uniform();
        AdmmParams p;
        p.reg_weight = eta;
        p.penalty = 1.0;
        p.max_iter = 3000;
        const auto [zeta, trace] = admm_lasso(psi, y, p);
        const Eigen::VectorXcd ref = oracles::ista_lasso(psi, y, eta, 60000);
        const double fref = oracles::lasso_objective(psi, y, ref, eta);
        const double rel = std::abs(oracles::lasso_objective(psi, y, zeta, eta) - fref) /
                           std::abs(fref);
        worst_rel = std::max(worst_rel, rel);
        if (rel > 1e-4) lasso_ok = false;
    }

    bool tv_ok = true;
    double worst_err = 0.0;
    for (int inst = 0; inst < 20; ++inst) {
        const int n = 48;
        std::vector<double> y(n);
        double level = rng.uniform(-2.0, 2.0);
        for (int i = 0; i < n; ++i) {
            if (rng.uniform() < 0.1) level = rng.uniform(-2.0, 2.0);
            y[i] = level + 0.05 * rng.normal();
        }
        const double lambda = 0.1 + 0.3 * rng.uniform();
        const std::vector<double> exact = oracles::tv_denoise_1d(y, lambda);
        if (oracles::tv_kkt_violation(y, exact, lambda) > 1e-8) tv_ok = false;
        Eigen::VectorXcd yc(n);
        for (int i = 0; i < n; ++i) yc(i) = y[i];
        AdmmParams p;
        p.reg_weight = lambda;
        p.penalty = 1.0;
        p.max_iter = 6000;
        const auto [z, trace] = admm_tv(Eigen::MatrixXcd::Identity(n, n), yc, p);
        for (int i = 0; i < n; ++i)
            worst_err = std::max(worst_err, std::abs(z(i) - exact[i]));
    }
    if (worst_err > 1e-3) tv_ok = false;
    report(6, lasso_ok && tv_ok, "both ADMM solvers match independent oracles",
           "lasso worst rel obj gap=" + fmt(worst_rel) +
               ", tv worst abs err=" + fmt(worst_err));
}

void criterion_noiseless_toy() {
    ExperimentConfig cfg;
    cfg.n_elements = 64;
    cfg.n_slots = 16;
    cfg.n_rf = 4;
    cfg.scenario.n_paths = 1;
    cfg.threads = 1;
    cfg.besvr_peak_floor = 0.0;  // keep the full printed peak set in the toy
    cfg.n_peaks = 64;            // square toy: R spans every column, so the
                                 // restricted solve cannot truncate tail energy
    cfg.lasso_rel_tol = 0.0;     // run stage 2 to i_max; the toy needs full accuracy
    cfg.tv_reg = 1e-6;
    cfg.tv_penalty = 0.01;
    cfg.tv_max_iter = 500;
    cfg.lasso_reg = 1e-7;
    cfg.lasso_penalty = 0.01;
    cfg.lasso_max_iter = 500;
    const double inf = std::numeric_limits<double>::infinity();
    double worst_besvr = 0.0, worst_tvr = 0.0;
    for (int t = 0; t < 5; ++t) {
        worst_besvr = std::max(worst_besvr, run_trial(cfg, "besvr", inf, t).nmse);
        worst_tvr = std::max(worst_tvr, run_trial(cfg, "tvr", inf, t).nmse);
    }
    report(7, worst_besvr <= 1e-3 && worst_tvr <= 1e-3,
           "noiseless square-system recovery is near exact",
           "worst nmse besvr=" + fmt(worst_besvr) + " tvr=" + fmt(worst_tvr));
}

std::string strip_time_column(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        std::stringstream fields(line);
        std::string field;
        int idx = 0;
        bool first = true;
        while (std::getline(fields, field, ',')) {
            if (idx++ == 6) continue;  // time_s
            out << (first ? "" : ",") << field;
            first = false;
        }
        out << '\n';
    }
    return out.str();
}

void criterion_reproducibility() {
    ExperimentConfig cfg;
    cfg.n_elements = 64;
    cfg.n_slots = 16;
    cfg.n_rf = 4;
    cfg.snr_db = {10.0, 20.0};
    cfg.n_trials = 3;
    cfg.threads = 1;
    cfg.n_peaks = 12;
    cfg.pomp_n_rings = 3;
    write_trials_csv("acc_run_a.csv", sweep_snr(cfg).trials);
    write_trials_csv("acc_run_b.csv", sweep_snr(cfg).trials);
    const bool same = strip_time_column("acc_run_a.csv") ==
                      strip_time_column("acc_run_b.csv");
    std::remove("acc_run_a.csv");
    std::remove("acc_run_b.csv");
    report(8, same, "repeated sweeps are byte-identical apart from timing",
           same ? "trial logs match" : "trial logs differ");
}

}  // namespace

int main() {
    criterion_block_sparsity();
    criteria_snr_behaviour();
    criterion_rf_chains();
    criterion_cpu_time();
    criterion_solver_oracles();
    criterion_noiseless_toy();
    criterion_reproducibility();
    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED"
                                  : std::to_string(g_failures) + " CRITERIA FAILED")
              << "\n";
    return g_failures;
}
