#ifndef NFCE_MEASUREMENT_HPP
#define NFCE_MEASUREMENT_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "nfce/geometry.hpp"
#include "nfce/rng.hpp"

namespace nfce {

struct TrainingConfig {
    int n_slots = 45;        // T
    int n_rf = 5;            // N_RF,R outputs per slot
    int n_active = 0;        // M; 0 means "all elements"
    double tx_power = 1.0;   // P
    double noise_var = 0.0;  // sigma^2

    int active_count(int n_elements) const {
        return n_active > 0 ? n_active : n_elements;
    }
};

struct SlotPattern {
    std::vector<int> active;    // M selected element indices, ascending
    Eigen::MatrixXcd combiner;  // W_t, n_rf x M, unit-modulus entries
};

struct SensingOperator {
    Eigen::MatrixXcd stacked_combiner;  // W_M: (T n_rf) x N_R
    Eigen::MatrixXcd dft;               // F, unitary N_R x N_R
    Eigen::MatrixXcd psi;               // W_M * F
    std::vector<SlotPattern> per_slot;
};

struct ReceivedSignal {
    Eigen::VectorXcd y;      // length T n_rf
    Eigen::VectorXcd noise;  // combined noise term, same length, y - sqrt(P) W_M h
};

// entry (a, b) = exp(-j 2 pi a b / n) / sqrt(n)
Eigen::MatrixXcd dft_matrix(int n);

// Per slot: draw the active set (size M, uniform without replacement) and a
// combiner with i.i.d. phases U[0, 2pi); stack into W_M and form psi = W_M F.
SensingOperator build_sensing(const TrainingConfig& config,
                              const ArrayGeometry& geometry, Rng& rng);

// y_t = W_t M_t (sqrt(P) h + n_t), noise drawn per element then combined.
ReceivedSignal simulate_reception(const ChannelRealization& channel,
                                  const SensingOperator& op,
                                  const TrainingConfig& config, Rng& rng);

// z = F^H h
Eigen::VectorXcd angular_coefficients(const Eigen::VectorXcd& h,
                                      const SensingOperator& op);

// Binary matrix exchange format: uint32 rows, uint32 cols (little endian),
// then row-major complex64 (float32 re, float32 im) pairs.
void write_complex_matrix(std::ostream& out, const Eigen::MatrixXcd& m);
Eigen::MatrixXcd read_complex_matrix(std::istream& in);
void dump_sensing(const std::string& psi_path, const std::string& y_path,
                  const SensingOperator& op, const ReceivedSignal& rx);

}  // namespace nfce

#endif
