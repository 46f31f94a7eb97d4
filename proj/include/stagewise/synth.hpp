#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "stagewise/dataset.hpp"
#include "stagewise/rng.hpp"

namespace stagewise {

enum class Innovations { kGaussian, kUniform };

// Ground-truth generator spec. Sources are unit-marginal-variance AR(1)
// processes; non-stationary sources additionally follow per-segment
// mean/variance schedules, switching at the change cycles.
struct SynthSpec {
    int n_cycles = 80;
    int samples_per_cycle = 400;
    int d_true = 2;           // stationary source count
    int n_nonstationary = 1;
    // change cycle c = last cycle of a segment; the next segment starts at c+1
    std::vector<int> change_cycles;
    Eigen::MatrixXd mixing;   // empty -> random orthogonal from the seed
    double noise_sigma = 0.01;
    double ar_coeff = 0.6;
    Innovations innovations = Innovations::kGaussian;
    // per-segment schedules for every non-stationary source;
    // empty variance schedule defaults to {1, 4, 9, ...}
    std::vector<double> segment_variances;
    std::vector<double> segment_means;

    int n_sources() const { return d_true + n_nonstationary; }
    int n_segments() const { return static_cast<int>(change_cycles.size()) + 1; }
    void validate() const;
};

struct GroundTruth {
    std::vector<int> change_cycles;
    Eigen::MatrixXd mixing;               // channels x sources
    Eigen::MatrixXd stationary_subspace;  // columns spanning the true subspace
    int d_true = 0;
};

// Unit-marginal-variance AR(1) draw (x_0 at the stationary law).
Eigen::VectorXd ar1_series(Rng& rng, Eigen::Index n, double phi, Innovations law);

// Emits a 3-channel dataset through the ingest schema so synthetic data flows
// the same pipeline path as real data. Requires n_sources() <= 3.
std::pair<BatteryDataset, GroundTruth> generate(const SynthSpec& spec, std::uint64_t seed);

// Largest principal angle (degrees) between the column spaces of two
// full-column-rank matrices of equal row count.
double principal_angle_degrees(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

} // namespace stagewise
