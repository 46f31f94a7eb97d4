#pragma once

#include <Eigen/Dense>

#include "stagewise/errors.hpp"

namespace stagewise {

struct AdfResult {
    double statistic = 0.0;       // t-statistic on the level coefficient
    double critical_value = 0.0;  // MacKinnon response-surface value at alpha
    int lag = 0;                  // augmentation order used
    int nobs = 0;                 // effective regression sample count
    bool stationary = false;      // statistic < critical_value
};

// Augmented Dickey-Fuller test, constant-only regression
//   dy_t = c + g*y_{t-1} + sum_j phi_j dy_{t-j} + e_t,
// lag order by the Schwert rule ceil(12*(L/100)^(1/4)) unless overridden
// (lag_override >= 0). Unit-root null rejected when the t-statistic on g is
// below the MacKinnon critical value for the given alpha (0.01/0.05/0.10).
AdfResult adf_test(const Eigen::VectorXd& series, double alpha = 0.05, int lag_override = -1);

bool adf_is_stationary(const Eigen::VectorXd& series, double alpha = 0.05);

} // namespace stagewise
