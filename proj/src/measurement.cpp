#include "nfce/measurement.hpp"

#include <cstdint>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace nfce {

Eigen::MatrixXcd dft_matrix(int n) {
    if (n < 1) throw std::invalid_argument("dft_matrix: n must be >= 1");
    Eigen::MatrixXcd f(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            // reduce a*b mod n before the trig call to keep the argument small
            const long long ab = (static_cast<long long>(a) * b) % n;
            const double phase = -2.0 * kPi * static_cast<double>(ab) / n;
            f(a, b) = scale * std::complex<double>(std::cos(phase), std::sin(phase));
        }
    }
    return f;
}

SensingOperator build_sensing(const TrainingConfig& config,
                              const ArrayGeometry& geometry, Rng& rng) {
    const int n = geometry.n_elements;
    const int m = config.active_count(n);
    if (m > n) throw std::invalid_argument("build_sensing: n_active exceeds n_elements");
    if (config.n_rf > m)
        throw std::invalid_argument("build_sensing: n_rf exceeds n_active");
    if (config.n_slots < 1) throw std::invalid_argument("build_sensing: n_slots < 1");

    SensingOperator op;
    op.dft = dft_matrix(n);
    op.stacked_combiner = Eigen::MatrixXcd::Zero(config.n_slots * config.n_rf, n);
    op.per_slot.resize(config.n_slots);

    for (int t = 0; t < config.n_slots; ++t) {
        SlotPattern& slot = op.per_slot[t];
        slot.active = (m == n) ? [&] {
            std::vector<int> all(n);
            for (int i = 0; i < n; ++i) all[i] = i;
            return all;
        }() : rng.sample_without_replacement(n, m);
        slot.combiner.resize(config.n_rf, m);
        for (int r = 0; r < config.n_rf; ++r) {
            for (int c = 0; c < m; ++c) {
                const double th = rng.uniform(0.0, 2.0 * kPi);
                slot.combiner(r, c) = std::complex<double>(std::cos(th), std::sin(th));
            }
        }
        for (int c = 0; c < m; ++c)
            op.stacked_combiner.block(t * config.n_rf, slot.active[c], config.n_rf, 1) =
                slot.combiner.col(c);
    }
    op.psi.noalias() = op.stacked_combiner * op.dft;
    return op;
}

ReceivedSignal simulate_reception(const ChannelRealization& channel,
                                  const SensingOperator& op,
                                  const TrainingConfig& config, Rng& rng) {
    const int n = static_cast<int>(channel.h.size());
    if (op.stacked_combiner.cols() != n)
        throw std::invalid_argument("simulate_reception: dimension mismatch");
    const double amp = std::sqrt(config.tx_power);

    ReceivedSignal rx;
    rx.y.resize(op.stacked_combiner.rows());
    rx.noise.resize(op.stacked_combiner.rows());
    for (int t = 0; t < config.n_slots; ++t) {
        const SlotPattern& slot = op.per_slot[t];
        // element-space noise on the active elements only; the inactive ones
        // are discarded by M_t before combining
        Eigen::VectorXcd nt = Eigen::VectorXcd::Zero(static_cast<int>(slot.active.size()));
        if (config.noise_var > 0.0)
            for (int i = 0; i < nt.size(); ++i) nt(i) = rng.cnormal(config.noise_var);
        Eigen::VectorXcd h_sel(static_cast<int>(slot.active.size()));
        for (size_t i = 0; i < slot.active.size(); ++i)
            h_sel(static_cast<int>(i)) = channel.h(slot.active[i]);
        const Eigen::VectorXcd combined_noise = slot.combiner * nt;
        rx.y.segment(t * config.n_rf, config.n_rf) =
            amp * (slot.combiner * h_sel) + combined_noise;
        rx.noise.segment(t * config.n_rf, config.n_rf) = combined_noise;
    }
    return rx;
}

Eigen::VectorXcd angular_coefficients(const Eigen::VectorXcd& h,
                                      const SensingOperator& op) {
    if (h.size() != op.dft.rows())
        throw std::invalid_argument("angular_coefficients: dimension mismatch");
    return op.dft.adjoint() * h;
}

void write_complex_matrix(std::ostream& out, const Eigen::MatrixXcd& m) {
    const std::uint32_t rows = static_cast<std::uint32_t>(m.rows());
    const std::uint32_t cols = static_cast<std::uint32_t>(m.cols());
    out.write(reinterpret_cast<const char*>(&rows), 4);
    out.write(reinterpret_cast<const char*>(&cols), 4);
    for (std::uint32_t r = 0; r < rows; ++r) {
        for (std::uint32_t c = 0; c < cols; ++c) {
            const float re = static_cast<float>(m(r, c).real());
            const float im = static_cast<float>(m(r, c).imag());
            out.write(reinterpret_cast<const char*>(&re), 4);
            out.write(reinterpret_cast<const char*>(&im), 4);
        }
    }
}

Eigen::MatrixXcd read_complex_matrix(std::istream& in) {
    std::uint32_t rows = 0, cols = 0;
    in.read(reinterpret_cast<char*>(&rows), 4);
    in.read(reinterpret_cast<char*>(&cols), 4);
    if (!in) throw std::runtime_error("read_complex_matrix: truncated header");
    Eigen::MatrixXcd m(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r) {
        for (std::uint32_t c = 0; c < cols; ++c) {
            float re = 0.0f, im = 0.0f;
            in.read(reinterpret_cast<char*>(&re), 4);
            in.read(reinterpret_cast<char*>(&im), 4);
            m(r, c) = std::complex<double>(re, im);
        }
    }
    if (!in) throw std::runtime_error("read_complex_matrix: truncated payload");
    return m;
}

void dump_sensing(const std::string& psi_path, const std::string& y_path,
                  const SensingOperator& op, const ReceivedSignal& rx) {
    std::ofstream psi_out(psi_path, std::ios::binary);
    if (!psi_out) throw std::runtime_error("dump_sensing: cannot open " + psi_path);
    write_complex_matrix(psi_out, op.psi);
    std::ofstream y_out(y_path, std::ios::binary);
    if (!y_out) throw std::runtime_error("dump_sensing: cannot open " + y_path);
    write_complex_matrix(y_out, rx.y);
}

}  // namespace nfce
