#pragma once

#include <Eigen/Dense>

#include "stagewise/errors.hpp"

namespace stagewise {

// Normal-region model over training invariants: PCA retaining R components
// plus a Hotelling T^2 control limit.
struct MonitoringModel {
    Eigen::VectorXd center;        // training-invariant mean (length d)
    Eigen::MatrixXd loadings;      // R x d, orthonormal rows
    Eigen::MatrixXd score_cov;     // Xi_s, R x R
    Eigen::MatrixXd score_cov_inv; // cached inverse
    double t2_limit = 0.0;
    int n_components = 0;          // R
    double alpha = 0.05;
    Eigen::Index n_train = 0;      // N_C
};

struct CycleScore {
    int cycle_index = 0;
    Eigen::VectorXd t2;              // per-sample statistics
    double abnormality_rate = 0.0;   // fraction of t2 above the limit
};

// Upper quantile of the F distribution (via the regularized incomplete beta
// inverse), used for the control limit.
double f_quantile(double p, double df1, double df2);

// PCA + T^2 limit on the row-stacked training invariants.
// R = smallest count whose cumulative explained variance reaches
// variance_target; limit = R(N-1)(N+1)/(N(N-R)) * F_{R,N-R,1-alpha}.
MonitoringModel fit_monitor(const Eigen::MatrixXd& training_invariants, double variance_target,
                            double alpha);

// Per-sample t^2(k) of one cycle's invariants plus its abnormality rate.
CycleScore score_cycle(const MonitoringModel& model, const Eigen::MatrixXd& invariants,
                       int cycle_index = 0);

} // namespace stagewise
