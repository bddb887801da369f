#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "nfce/config.hpp"
#include "nfce/selftest.hpp"

namespace {

using nfce::CliConfig;

void print_summary(const std::vector<nfce::SummaryRow>& rows) {
    std::printf("%-12s %-10s %12s %14s %14s %8s\n", "estimator", "axis", "value",
                "mean_nmse", "mean_time_s", "trials");
    for (const auto& r : rows)
        std::printf("%-12s %-10s %12g %14.6g %14.6g %8d\n", r.estimator.c_str(),
                    r.axis_name.c_str(), r.axis_value, r.mean_nmse, r.mean_time_s,
                    r.n_trials);
}

std::string out_path(const CliConfig& config, const std::string& name) {
    std::filesystem::create_directories(config.output_dir);
    return (std::filesystem::path(config.output_dir) / name).string();
}

void write_spectrum(const CliConfig& config) {
    nfce::ExperimentConfig e = config.experiment;
    e.scenario.n_paths = 2;
    const nfce::ArrayGeometry geometry = e.geometry();
    nfce::Rng rng(e.base_seed);
    const auto paths = nfce::sample_scenario(e.scenario, rng);
    const auto channel = nfce::synthesize_channel(geometry, paths);
    const Eigen::VectorXcd z = nfce::dft_matrix(geometry.n_elements).adjoint() * channel.h;

    const std::string path = out_path(config, "spectrum.csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "bin,amplitude\n";
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%lld,%.17g\n", static_cast<long long>(i),
                      std::abs(z(i)));
        out << buf;
    }
    std::printf("wrote %s (%lld bins)\n", path.c_str(), static_cast<long long>(z.size()));
}

void write_sweep(const CliConfig& config, const nfce::MetricsSummary& summary,
                 const std::string& stem) {
    nfce::write_trials_csv(out_path(config, stem + "_trials.csv"), summary.trials);
    nfce::write_summary_csv(out_path(config, stem + "_summary.csv"), summary.rows);
    print_summary(summary.rows);
    std::printf("wrote %s and %s\n", (stem + "_trials.csv").c_str(),
                (stem + "_summary.csv").c_str());
}

std::vector<std::pair<double, double>> parse_grid(const std::string& text) {
    std::vector<std::pair<double, double>> grid;
    for (const std::string& item : nfce::parse_string_list(text)) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("grid entries must be reg:penalty");
        grid.emplace_back(std::stod(item.substr(0, colon)),
                          std::stod(item.substr(colon + 1)));
    }
    return grid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"near-field RIS channel estimation experiment harness"};
    app.require_subcommand(0, 1);
    app.fallthrough();  // global flags may appear after the subcommand

    std::string config_path, estimators, snr_list, nr_list, nrf_list, out_dir;
    std::string seed_str, trials_str, threads_str;
    bool dump = false;
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--seed", seed_str, "base RNG seed");
    app.add_option("--estimators", estimators, "comma list: besvr,tvr,pomp,domp");
    app.add_option("--snr", snr_list, "comma list of SNR values [dB]");
    app.add_option("--nr", nr_list, "comma list of element counts");
    app.add_option("--nrf", nrf_list, "comma list of RF chain counts");
    app.add_option("--trials", trials_str, "Monte-Carlo trials per point");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads_str, "worker thread cap (0 = hardware)");
    app.add_flag("--dump-defaults", dump, "print every default key=value and exit");

    auto* spectrum = app.add_subcommand("spectrum", "angular-domain amplitude of one channel");
    auto* snr_sweep = app.add_subcommand("snr-sweep", "NMSE versus SNR");
    auto* rf_sweep = app.add_subcommand("rf-sweep", "NMSE versus SNR per RF-chain count");
    auto* cpu_sweep = app.add_subcommand("cpu-sweep", "mean estimator time versus element count");
    auto* grid_search = app.add_subcommand("grid-search", "regularization grid search");
    auto* selftest = app.add_subcommand("selftest", "fast invariant suite");

    std::string gs_estimator = "tvr";
    std::string gs_grid = "0.01:1,0.1:1,1:1,10:1,100:1";
    grid_search->add_option("--estimator", gs_estimator, "estimator id to tune");
    grid_search->add_option("--grid", gs_grid, "comma list of reg:penalty pairs");

    bool corrupt_dft = false;
    selftest->add_flag("--corrupt-dft", corrupt_dft, "fault-injection hook")
        ->group("");  // hidden

    CLI11_PARSE(app, argc, argv);

    if (dump) {
        nfce::dump_defaults(std::cout);
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return 1;
    }

    CliConfig config;
    try {
        if (!config_path.empty()) nfce::load_config_file(config, config_path);
        if (!seed_str.empty()) nfce::apply_key(config, "base_seed", seed_str, "--seed");
        if (!estimators.empty())
            nfce::apply_key(config, "estimators", estimators, "--estimators");
        if (!snr_list.empty()) nfce::apply_key(config, "snr_list", snr_list, "--snr");
        if (!nr_list.empty()) nfce::apply_key(config, "nr_list", nr_list, "--nr");
        if (!nrf_list.empty()) nfce::apply_key(config, "nrf_list", nrf_list, "--nrf");
        if (!trials_str.empty()) nfce::apply_key(config, "n_trials", trials_str, "--trials");
        if (!threads_str.empty()) nfce::apply_key(config, "threads", threads_str, "--threads");
        if (!out_dir.empty()) nfce::apply_key(config, "out_dir", out_dir, "--out");
        for (const auto& [key, source] : config.provenance)
            std::cerr << "config: " << key << " (" << source << ")\n";
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (spectrum->parsed()) {
            write_spectrum(config);
        } else if (snr_sweep->parsed()) {
            write_sweep(config, nfce::sweep_snr(config.experiment), "snr");
        } else if (rf_sweep->parsed()) {
            write_sweep(config, nfce::sweep_rf(config.experiment), "rf");
        } else if (cpu_sweep->parsed()) {
            write_sweep(config, nfce::sweep_elements_time(config.experiment), "cpu");
        } else if (grid_search->parsed()) {
            const auto result = nfce::grid_search_reg(config.experiment, gs_estimator,
                                                      parse_grid(gs_grid));
            print_summary(result.table);
            std::printf("best: reg=%g penalty=%g mean_nmse=%g\n", result.best_reg,
                        result.best_penalty, result.best_nmse);
        } else if (selftest->parsed()) {
            if (nfce::run_selftest(std::cout, corrupt_dft) != 0) return 3;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
