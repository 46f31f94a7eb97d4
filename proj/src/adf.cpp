#include "stagewise/adf.hpp"

#include <cmath>

namespace stagewise {

namespace {

// Response-surface coefficients for the constant-only Dickey-Fuller
// distribution (MacKinnon 2010): crit = b0 + b1/T + b2/T^2 + b3/T^3.
struct Surface {
    double alpha;
    double b[4];
};
constexpr Surface kSurfaces[] = {
    {0.01, {-3.43035, -6.5393, -16.786, -79.433}},
    {0.05, {-2.86154, -2.8903, -4.234, -40.040}},
    {0.10, {-2.56677, -1.5384, -2.809, 0.0}},
};

double mackinnon_critical(double alpha, int T) {
    for (const Surface& s : kSurfaces) {
        if (std::abs(alpha - s.alpha) < 1e-12) {
            double t = static_cast<double>(T);
            return s.b[0] + s.b[1] / t + s.b[2] / (t * t) + s.b[3] / (t * t * t);
        }
    }
    throw DomainError("adf_test: alpha must be one of 0.01, 0.05, 0.10");
}

} // namespace

AdfResult adf_test(const Eigen::VectorXd& y, double alpha, int lag_override) {
    const Eigen::Index L = y.size();
    if (L < 20)
        throw DegenerateInputError("adf_test: series shorter than 20 samples");
    if (y.maxCoeff() == y.minCoeff())
        throw DegenerateInputError("adf_test: constant series");

    int lag = lag_override >= 0
                  ? lag_override
                  : static_cast<int>(std::ceil(12.0 * std::pow(L / 100.0, 0.25)));
    Eigen::VectorXd dy = y.tail(L - 1) - y.head(L - 1);
    const Eigen::Index n_dy = dy.size();
    const Eigen::Index nobs = n_dy - lag;
    const Eigen::Index ncols = 2 + lag;  // constant, level, lagged differences
    if (nobs <= ncols)
        throw DegenerateInputError("adf_test: too few observations for lag order " +
                                   std::to_string(lag));

    Eigen::MatrixXd X(nobs, ncols);
    Eigen::VectorXd Y = dy.tail(nobs);
    X.col(0).setOnes();
    X.col(1) = y.segment(lag, nobs);              // y_{t-1}
    for (int j = 1; j <= lag; ++j)
        X.col(1 + j) = dy.segment(lag - j, nobs);  // dy_{t-j}

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < ncols)
        throw SingularityError("adf_test: collinear regressors");
    Eigen::VectorXd beta = qr.solve(Y);
    Eigen::VectorXd resid = Y - X * beta;
    const double dof = static_cast<double>(nobs - ncols);
    const double s2 = resid.squaredNorm() / dof;
    Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(ncols, ncols));
    const double se = std::sqrt(s2 * xtx_inv(1, 1));

    AdfResult res;
    res.lag = lag;
    res.nobs = static_cast<int>(nobs);
    res.statistic = beta[1] / se;
    res.critical_value = mackinnon_critical(alpha, res.nobs);
    res.stationary = res.statistic < res.critical_value;
    return res;
}

bool adf_is_stationary(const Eigen::VectorXd& series, double alpha) {
    return adf_test(series, alpha).stationary;
}

} // namespace stagewise
