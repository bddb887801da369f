#include "nfce/config.hpp"

#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nfce {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        if (item == "inf") {
            out.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        std::size_t consumed = 0;
        const double v = std::stod(item, &consumed);
        if (consumed != item.size())
            throw std::invalid_argument("malformed number: " + item);
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty numeric list");
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const double v : parse_double_list(text)) {
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v)
            throw std::invalid_argument("expected an integer: " + text);
        out.push_back(i);
    }
    return out;
}

std::vector<std::string> parse_string_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

void apply_key(CliConfig& config, const std::string& key, const std::string& value,
               const std::string& source) {
    ExperimentConfig& e = config.experiment;
    try {
        if (key == "n_elements") e.n_elements = std::stoi(value);
        else if (key == "carrier_hz") e.carrier_hz = std::stod(value);
        else if (key == "spacing") e.spacing = std::stod(value);
        else if (key == "n_paths") e.scenario.n_paths = std::stoi(value);
        else if (key == "distance_min") e.scenario.distance_min_m = std::stod(value);
        else if (key == "distance_max") e.scenario.distance_max_m = std::stod(value);
        else if (key == "angle_min") e.scenario.angle_min_rad = std::stod(value);
        else if (key == "angle_max") e.scenario.angle_max_rad = std::stod(value);
        else if (key == "gain_model") {
            if (value == "los_unit") e.scenario.gain_model = GainModel::kLosUnitNlosWeak;
            else if (value == "gaussian") e.scenario.gain_model = GainModel::kAllGaussian;
            else throw std::invalid_argument("gain_model must be los_unit or gaussian");
        }
        else if (key == "n_slots") e.n_slots = std::stoi(value);
        else if (key == "n_rf") e.n_rf = std::stoi(value);
        else if (key == "n_active") e.n_active = std::stoi(value);
        else if (key == "tx_power") e.tx_power = std::stod(value);
        else if (key == "estimators") e.estimators = parse_string_list(value);
        else if (key == "snr_list") e.snr_db = parse_double_list(value);
        else if (key == "nrf_list") {
            e.n_rf_list = parse_int_list(value);
            if (e.n_rf_list.size() == 1) e.n_rf = e.n_rf_list[0];
        }
        else if (key == "nr_list") {
            e.n_elements_list = parse_int_list(value);
            // a single value also pins the element count for the other commands
            if (e.n_elements_list.size() == 1) e.n_elements = e.n_elements_list[0];
        }
        else if (key == "n_trials") e.n_trials = std::stoi(value);
        else if (key == "cpu_trials") e.cpu_trials = std::stoi(value);
        else if (key == "base_seed") e.base_seed = std::stoull(value);
        else if (key == "threads") e.threads = std::stoi(value);
        else if (key == "n_peaks") e.n_peaks = std::stoi(value);
        else if (key == "besvr_split") e.besvr_split = std::stoi(value) != 0;
        else if (key == "besvr_peak_floor") e.besvr_peak_floor = std::stod(value);
        else if (key == "lasso_rel_tol") e.lasso_rel_tol = std::stod(value);
        else if (key == "lasso_reg") e.lasso_reg = std::stod(value);
        else if (key == "lasso_penalty") e.lasso_penalty = std::stod(value);
        else if (key == "lasso_max_iter") e.lasso_max_iter = std::stoi(value);
        else if (key == "tv_reg") e.tv_reg = std::stod(value);
        else if (key == "tv_penalty") e.tv_penalty = std::stod(value);
        else if (key == "tv_max_iter") e.tv_max_iter = std::stoi(value);
        else if (key == "pomp_n_angle") e.pomp_n_angle = std::stoi(value);
        else if (key == "pomp_n_rings") e.pomp_n_rings = std::stoi(value);
        else if (key == "pomp_min_radius") e.pomp_min_radius = std::stod(value);
        else if (key == "pomp_sparsity") e.pomp_sparsity = std::stoi(value);
        else if (key == "domp_sparsity") e.domp_sparsity = std::stoi(value);
        else if (key == "out_dir") config.output_dir = value;
        else throw std::invalid_argument("unknown config key: " + key);
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad value for key " + key + ": " + value);
    }
    config.provenance.emplace_back(key, source);
}

void load_config_file(CliConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key=value");
        apply_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)),
                  path + ":" + std::to_string(lineno));
    }
}

void dump_defaults(std::ostream& out) {
    const CliConfig d;
    const ExperimentConfig& e = d.experiment;
    out << "n_elements=" << e.n_elements << '\n'
        << "carrier_hz=" << e.carrier_hz << '\n'
        << "spacing=" << e.spacing << "  # 0 = half wavelength\n"
        << "n_paths=" << e.scenario.n_paths << '\n'
        << "distance_min=" << e.scenario.distance_min_m << '\n'
        << "distance_max=" << e.scenario.distance_max_m << '\n'
        << "angle_min=" << e.scenario.angle_min_rad << '\n'
        << "angle_max=" << e.scenario.angle_max_rad << '\n'
        << "gain_model=los_unit\n"
        << "n_slots=" << e.n_slots << '\n'
        << "n_rf=" << e.n_rf << '\n'
        << "n_active=" << e.n_active << "  # 0 = all elements\n"
        << "tx_power=" << e.tx_power << '\n'
        << "estimators=besvr,tvr,pomp,domp\n"
        << "snr_list=0,5,10,15,20,25,30\n"
        << "nrf_list=4,6\n"
        << "nr_list=150,300,450\n"
        << "n_trials=" << e.n_trials << '\n'
        << "cpu_trials=" << e.cpu_trials << '\n'
        << "base_seed=" << e.base_seed << '\n'
        << "threads=" << e.threads << "  # 0 = hardware concurrency\n"
        << "n_peaks=" << e.n_peaks << '\n'
        << "besvr_split=" << (e.besvr_split ? 1 : 0) << '\n'
        << "besvr_peak_floor=" << e.besvr_peak_floor << "  # 0 = off\n"
        << "lasso_rel_tol=" << e.lasso_rel_tol << "  # 0 = run i_max\n"
        << "lasso_reg=" << e.lasso_reg << "  # <0 = noise-adaptive\n"
        << "lasso_penalty=" << e.lasso_penalty << '\n'
        << "lasso_max_iter=" << e.lasso_max_iter << "  # 0 = |R|\n"
        << "tv_reg=" << e.tv_reg << "  # <0 = noise-adaptive\n"
        << "tv_penalty=" << e.tv_penalty << '\n'
        << "tv_max_iter=" << e.tv_max_iter << "  # 0 = 2 * n_elements\n"
        << "pomp_n_angle=" << e.pomp_n_angle << "  # 0 = 2 * n_elements\n"
        << "pomp_n_rings=" << e.pomp_n_rings << '\n'
        << "pomp_min_radius=" << e.pomp_min_radius << '\n'
        << "pomp_sparsity=" << e.pomp_sparsity << "  # 0 = 4\n"
        << "domp_sparsity=" << e.domp_sparsity << "  # 0 = n_peaks\n"
        << "out_dir=" << d.output_dir << '\n';
}

}  // namespace nfce
