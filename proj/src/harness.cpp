#include "nfce/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace nfce {

namespace {

// format doubles so that CSV round trips are lossless
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t double_bits(double v) {
    std::uint64_t out;
    std::memcpy(&out, &v, sizeof(out));
    return out;
}

double noise_var_for_snr(double snr_db) {
    if (std::isinf(snr_db) && snr_db > 0) return 0.0;
    return std::pow(10.0, -snr_db / 10.0);
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < n; i += threads) body(i);
        });
    for (auto& t : pool) t.join();
}

struct SweepPoint {
    std::string estimator;
    std::string axis_name;
    double axis_value = 0.0;
    double snr_db = 0.0;
    ExperimentConfig config;  // point-adjusted copy
};

MetricsSummary run_points(const std::vector<SweepPoint>& points, int n_trials,
                          int threads) {
    MetricsSummary out;
    for (const SweepPoint& pt : points) {
        // grids depend only on the geometry, so build once per sweep point and
        // share across trials
        const bool needs_grid =
            pt.config.estimators.size() == 1 && pt.config.estimators[0] == "pomp";
        PolarGrid grid;
        if (needs_grid) grid = make_polar_grid(pt.config, pt.config.geometry());

        std::vector<TrialRecord> records(n_trials);
        parallel_for(n_trials, threads, [&](int i) {
            records[i] = run_trial(pt.config, pt.config.estimators[0], pt.snr_db, i,
                                   needs_grid ? &grid : nullptr);
        });

        SummaryRow row;
        row.estimator = pt.estimator;
        row.axis_name = pt.axis_name;
        row.axis_value = pt.axis_value;
        row.n_trials = n_trials;
        for (const TrialRecord& r : records) {
            row.mean_nmse += r.nmse;
            row.mean_time_s += r.wall_time_s;
        }
        row.mean_nmse /= n_trials;
        row.mean_time_s /= n_trials;
        out.rows.push_back(row);
        for (TrialRecord& r : records) {
            r.estimator_id = pt.estimator;  // carries any sweep suffix
            out.trials.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace

double nmse(const Eigen::VectorXcd& h_true, const Eigen::VectorXcd& h_hat) {
    if (h_true.size() != h_hat.size())
        throw std::invalid_argument("nmse: length mismatch");
    const double denom = h_true.squaredNorm();
    if (denom == 0.0) throw std::invalid_argument("nmse: zero true channel");
    return (h_true - h_hat).squaredNorm() / denom;
}

std::uint64_t trial_seed(std::uint64_t base_seed, int trial_index, double snr_db,
                         int n_r, int n_rf) {
    std::uint64_t s = mix_seed(base_seed, static_cast<std::uint64_t>(trial_index));
    s = mix_seed(s, double_bits(snr_db));
    s = mix_seed(s, static_cast<std::uint64_t>(n_r) * 1000003ull +
                        static_cast<std::uint64_t>(n_rf));
    return s;
}

PolarGrid make_polar_grid(const ExperimentConfig& config, const ArrayGeometry& geometry) {
    const int n_angle =
        config.pomp_n_angle > 0 ? config.pomp_n_angle : 2 * geometry.n_elements;
    return build_polar_grid(geometry, n_angle, config.pomp_n_rings,
                            config.pomp_min_radius);
}

EstimateResult run_estimator(const ExperimentConfig& config, const std::string& id,
                             const ArrayGeometry& geometry, const SensingOperator& op,
                             const PolarGrid* grid, const Eigen::VectorXcd& y_scaled,
                             double noise_var) {
    const double sigma = std::sqrt(noise_var);
    const double level =
        sigma * std::sqrt(static_cast<double>(op.psi.rows()) * geometry.n_elements);
    if (id == "besvr") {
        BesvrConfig cfg;
        cfg.n_peaks = config.n_peaks;
        cfg.split_clusters = config.besvr_split;
        cfg.peak_floor = config.besvr_peak_floor;
        cfg.lasso.rel_tol = config.lasso_rel_tol;
        cfg.lasso.reg_weight = config.lasso_reg >= 0.0
                                   ? config.lasso_reg
                                   : std::max(kAutoLassoFloor, kAutoLassoScale * level);
        cfg.lasso.penalty = config.lasso_penalty;
        cfg.lasso.max_iter = config.lasso_max_iter;
        cfg.lasso.record_objective = false;
        return besvr(y_scaled, op.psi, op.dft, cfg);
    }
    if (id == "tvr") {
        AdmmParams params;
        params.reg_weight = config.tv_reg >= 0.0
                                ? config.tv_reg
                                : std::max(kAutoTvFloor, kAutoTvScale * level);
        params.penalty = config.tv_penalty;
        params.max_iter = config.tv_max_iter;
        params.record_objective = false;
        return tvr_estimate(y_scaled, op.psi, op.dft, params);
    }
    if (id == "pomp") {
        if (grid == nullptr) throw std::invalid_argument("pomp requires a polar grid");
        const int sparsity = config.pomp_sparsity > 0 ? config.pomp_sparsity : 4;
        return pomp_estimate(y_scaled, op.stacked_combiner, *grid, sparsity, op.dft);
    }
    if (id == "domp") {
        const int sparsity =
            config.domp_sparsity > 0 ? config.domp_sparsity : config.n_peaks;
        return domp_estimate(y_scaled, op.psi, op.dft, sparsity);
    }
    throw std::invalid_argument("unknown estimator id: " + id);
}

TrialRecord run_trial(const ExperimentConfig& config, const std::string& estimator_id,
                      double snr_db, int trial_index, const PolarGrid* grid) {
    const ArrayGeometry geometry = config.geometry();
    const double noise_var = noise_var_for_snr(snr_db);
    const std::uint64_t seed =
        trial_seed(config.base_seed, trial_index, snr_db, config.n_elements, config.n_rf);
    Rng rng(seed);

    const auto paths = sample_scenario(config.scenario, rng);
    const ChannelRealization channel = synthesize_channel(geometry, paths);
    const TrainingConfig training = config.training(noise_var);
    const SensingOperator op = build_sensing(training, geometry, rng);
    const ReceivedSignal rx = simulate_reception(channel, op, training, rng);

    PolarGrid local_grid;
    if (estimator_id == "pomp" && grid == nullptr) {
        local_grid = make_polar_grid(config, geometry);
        grid = &local_grid;
    }

    const Eigen::VectorXcd y_scaled = rx.y / std::sqrt(config.tx_power);
    const EstimateResult est =
        run_estimator(config, estimator_id, geometry, op, grid, y_scaled, noise_var);

    TrialRecord rec;
    rec.trial_index = trial_index;
    rec.estimator_id = estimator_id;
    rec.snr_db = snr_db;
    rec.n_r = config.n_elements;
    rec.n_rf = config.n_rf;
    rec.nmse = nmse(channel.h, est.h_hat);
    rec.wall_time_s = est.wall_time_s;
    rec.support_size = static_cast<int>(est.support.size());
    rec.seed_used = seed;
    return rec;
}

MetricsSummary sweep_snr(const ExperimentConfig& config) {
    if (config.snr_db.empty()) throw std::invalid_argument("sweep_snr: empty SNR list");
    std::vector<SweepPoint> points;
    for (const std::string& est : config.estimators) {
        for (const double snr : config.snr_db) {
            SweepPoint pt;
            pt.estimator = est;
            pt.axis_name = "snr_db";
            pt.axis_value = snr;
            pt.snr_db = snr;
            pt.config = config;
            pt.config.estimators = {est};
            points.push_back(std::move(pt));
        }
    }
    return run_points(points, config.n_trials, config.threads);
}

MetricsSummary sweep_rf(const ExperimentConfig& config) {
    if (config.n_rf_list.empty()) throw std::invalid_argument("sweep_rf: empty list");
    std::vector<SweepPoint> points;
    for (const int n_rf : config.n_rf_list) {
        for (const std::string& est : config.estimators) {
            for (const double snr : config.snr_db) {
                SweepPoint pt;
                pt.estimator = est + "_rf" + std::to_string(n_rf);
                pt.axis_name = "snr_db";
                pt.axis_value = snr;
                pt.snr_db = snr;
                pt.config = config;
                pt.config.estimators = {est};
                pt.config.n_rf = n_rf;
                points.push_back(std::move(pt));
            }
        }
    }
    return run_points(points, config.n_trials, config.threads);
}

MetricsSummary sweep_elements_time(const ExperimentConfig& config) {
    if (config.n_elements_list.empty())
        throw std::invalid_argument("sweep_elements_time: empty list");
    std::vector<SweepPoint> points;
    for (const int n_r : config.n_elements_list) {
        for (const std::string& est : config.estimators) {
            SweepPoint pt;
            pt.estimator = est;
            pt.axis_name = "n_r";
            pt.axis_value = n_r;
            pt.snr_db = 20.0;
            pt.config = config;
            pt.config.estimators = {est};
            pt.config.n_elements = n_r;
            pt.config.scenario.n_paths = 1;
            points.push_back(std::move(pt));
        }
    }
    return run_points(points, config.cpu_trials, config.threads);
}

GridSearchResult grid_search_reg(const ExperimentConfig& config,
                                 const std::string& estimator_id,
                                 const std::vector<std::pair<double, double>>& grid) {
    if (grid.empty()) throw std::invalid_argument("grid_search_reg: empty grid");
    GridSearchResult out;
    out.best_nmse = std::numeric_limits<double>::infinity();
    for (size_t g = 0; g < grid.size(); ++g) {
        ExperimentConfig point = config;
        // held-out stream, shared across grid points so the comparison is paired
        point.base_seed = mix_seed(config.base_seed, 0xC0FFEEull);
        point.estimators = {estimator_id};
        if (estimator_id == "tvr") {
            point.tv_reg = grid[g].first;
            point.tv_penalty = grid[g].second;
        } else {
            point.lasso_reg = grid[g].first;
            point.lasso_penalty = grid[g].second;
        }
        double total = 0.0;
        int count = 0;
        for (const double snr : config.snr_db) {
            std::vector<TrialRecord> records(config.n_trials);
            parallel_for(config.n_trials, config.threads, [&](int i) {
                records[i] = run_trial(point, estimator_id, snr, i);
            });
            for (const TrialRecord& r : records) total += r.nmse;
            count += config.n_trials;
        }
        SummaryRow row;
        row.estimator = estimator_id;
        row.axis_name = "grid_index";
        row.axis_value = static_cast<double>(g);
        row.mean_nmse = total / count;
        row.n_trials = count;
        out.table.push_back(row);
        if (row.mean_nmse < out.best_nmse) {
            out.best_nmse = row.mean_nmse;
            out.best_reg = grid[g].first;
            out.best_penalty = grid[g].second;
        }
    }
    return out;
}

void write_trials_csv(const std::string& path, const std::vector<TrialRecord>& trials) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "trial,estimator,snr_db,n_r,n_rf,nmse,time_s,seed\n";
    for (const TrialRecord& r : trials)
        out << r.trial_index << ',' << r.estimator_id << ',' << fmt(r.snr_db) << ','
            << r.n_r << ',' << r.n_rf << ',' << fmt(r.nmse) << ','
            << fmt(r.wall_time_s) << ',' << r.seed_used << '\n';
}

std::vector<TrialRecord> read_trials_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "trial,estimator,snr_db,n_r,n_rf,nmse,time_s,seed")
        throw std::runtime_error("bad trial CSV header in " + path);
    std::vector<TrialRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        TrialRecord r;
        std::getline(ss, field, ',');
        r.trial_index = std::stoi(field);
        std::getline(ss, r.estimator_id, ',');
        std::getline(ss, field, ',');
        r.snr_db = std::stod(field);
        std::getline(ss, field, ',');
        r.n_r = std::stoi(field);
        std::getline(ss, field, ',');
        r.n_rf = std::stoi(field);
        std::getline(ss, field, ',');
        r.nmse = std::stod(field);
        std::getline(ss, field, ',');
        r.wall_time_s = std::stod(field);
        std::getline(ss, field, ',');
        r.seed_used = std::stoull(field);
        out.push_back(std::move(r));
    }
    return out;
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "estimator,axis_name,axis_value,mean_nmse,mean_time_s,n_trials\n";
    for (const SummaryRow& r : rows)
        out << r.estimator << ',' << r.axis_name << ',' << fmt(r.axis_value) << ','
            << fmt(r.mean_nmse) << ',' << fmt(r.mean_time_s) << ',' << r.n_trials
            << '\n';
}

}  // namespace nfce
