#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "stagewise/errors.hpp"

namespace stagewise {

// Per-cycle first and second moments after pooled centering.
struct EpochStats {
    Eigen::VectorXd mean;        // u_i, length Jr
    Eigen::MatrixXd covariance;  // Sigma_i, Jr x Jr (about the epoch's own mean)
};

struct SsaConfig {
    int n_restarts = 5;       // random orthogonal starts tried beyond identity
    int max_iters = 500;
    double grad_tol = 1e-6;   // Frobenius norm of the Lie-algebra gradient
    std::uint64_t seed = 42;
    double adf_alpha = 0.05;  // significance for the source-count scan
};

// Learned stationary subspace of one training window.
struct StationaryBasis {
    Eigen::MatrixXd whitener;   // W, Jr x Jr
    Eigen::MatrixXd rotation;   // B, orthogonal Jr x Jr
    int d = 0;                  // stationary source count (0 = scan failed)
    Eigen::MatrixXd projector;  // B_s = first d rows of B, composed with W
    double objective_value = 0.0;
    bool converged = false;
};

// Symmetric inverse square root of the pooled covariance of the row-stacked,
// mean-centered cycles, with ridge eps = ridge_scale * trace(Sigma)/Jr.
// ridge_scale = 0 demands strict positive definiteness.
// Returns (W, pooled mean).
std::pair<Eigen::MatrixXd, Eigen::VectorXd> pooled_whitener(
    const std::vector<Eigen::MatrixXd>& cycles, double ridge_scale = 1e-10);

// Epoch statistics of pooled-centered cycles: u_i is the centered epoch mean,
// Sigma_i the covariance about the epoch's own mean (n-1 denominator).
std::vector<EpochStats> compute_epoch_stats(const std::vector<Eigen::MatrixXd>& cycles,
                                            const Eigen::VectorXd& center);

// KL divergence of N(mean, covariance) from the standard normal:
// 0.5*(trace(S) - log det(S) + |u|^2 - d).
double kld_to_standard_normal(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance);

// Epoch stats premapped through the whitener (cached for the optimizer).
struct WhitenedStats {
    std::vector<Eigen::VectorXd> m;  // W * u_i
    std::vector<Eigen::MatrixXd> A;  // W * Sigma_i * W
    Eigen::Index dim() const { return m.empty() ? 0 : m.front().size(); }
};

WhitenedStats whiten_stats(const std::vector<EpochStats>& epochs, const Eigen::MatrixXd& W);

// Sum over epochs of the KLD of the first d rotated-whitened coordinates.
double ssa_objective(const Eigen::MatrixXd& rotation, int d, const WhitenedStats& stats);
double ssa_objective(const Eigen::MatrixXd& rotation, int d,
                     const std::vector<EpochStats>& epochs, const Eigen::MatrixXd& whitener);

// Gradient in the Lie algebra of O(n): the skew matrix G such that
// d/dt L(expm(t*D)*B) at t=0 equals <G, D>_F for every skew D.
Eigen::MatrixXd ssa_gradient(const Eigen::MatrixXd& rotation, int d, const WhitenedStats& stats);

// Conjugate-gradient minimization over the orthogonal group from the given
// start; Polak-Ribiere+ with geodesic (matrix-exponential) steps and Armijo
// backtracking. Returns the final rotation; outputs are written in place.
struct CgOutcome {
    Eigen::MatrixXd rotation;
    double objective = 0.0;
    bool converged = false;
    int iterations = 0;
};
CgOutcome cg_minimize(const WhitenedStats& stats, int d, const Eigen::MatrixXd& start,
                      int max_iters, double grad_tol);

// Best basis over identity plus n_restarts random orthogonal starts.
StationaryBasis optimize_rotation(const std::vector<EpochStats>& epochs,
                                  const Eigen::MatrixXd& whitener, int d,
                                  const SsaConfig& config);

// Projects one embedded cycle onto the stationary subspace: rows preserved,
// columns become the d invariant scores.
Eigen::MatrixXd project_invariants(const StationaryBasis& basis, const Eigen::MatrixXd& cycle,
                                   const Eigen::VectorXd& center);

// Descending scan for the stationary source count: largest d in 1..Jr whose
// optimized projection makes all d concatenated training score series pass
// the ADF stationarity test. Returns basis with d = 0 when no d passes.
StationaryBasis select_d(const std::vector<Eigen::MatrixXd>& training_cycles,
                         const Eigen::MatrixXd& whitener, const Eigen::VectorXd& center,
                         const SsaConfig& config);

} // namespace stagewise
