#pragma once

#include <Eigen/Dense>
#include <vector>

#include "stagewise/dataset.hpp"
#include "stagewise/errors.hpp"

namespace stagewise {

struct EmbeddingParams {
    int tau = 1;  // delay in samples
    int r = 1;    // embedding dimension
};

struct EmbeddedCycle {
    int cycle_index = 0;
    Eigen::MatrixXd data;  // (K_c - (r-1)*tau) x (J*r)
};

// Delay-stacks one series: output row k = [v_k, v_{k+tau}, ..., v_{k+(r-1)tau}].
Eigen::MatrixXd embed(const Eigen::VectorXd& series, const EmbeddingParams& params);

// Average mutual information between the series and its lag, estimated with a
// 16-bin equal-width histogram over the series' global range. Unit: nats.
double average_mutual_information(const Eigen::VectorXd& series, int lag, int bins = 16);

// Lag of the first local minimum of AMI over lags 1..max_lag; global minimum
// if no local minimum exists; smallest lag wins ties.
int select_tau(const Eigen::VectorXd& series, int max_lag = 50);

// Fraction of false nearest neighbors when going from dimension m to m+1
// (distance-ratio tolerance plus loneliness criterion against attractor size).
double fnn_fraction(const Eigen::VectorXd& series, int tau, int m, double r_tol = 15.0,
                    double a_tol = 2.0);

// Smallest r in 1..max_r whose FNN fraction drops to f_tol or below; max_r if
// the fraction never collapses (stochastic series).
int select_r(const Eigen::VectorXd& series, int tau, int max_r = 10, double f_tol = 0.01);

// Merged embedding of all channels of one cycle: params = (max tau, max r)
// over the per-variable params; channel blocks concatenated column-wise in
// fixed channel order.
EmbeddedCycle embed_multivariate(const CycleRecord& cycle,
                                 const std::vector<EmbeddingParams>& params_per_variable);

EmbeddingParams merge_params(const std::vector<EmbeddingParams>& params_per_variable);

} // namespace stagewise
