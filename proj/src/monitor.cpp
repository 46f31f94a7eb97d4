#include "stagewise/monitor.hpp"

#include <boost/math/distributions/fisher_f.hpp>

#include <cmath>

namespace stagewise {

double f_quantile(double p, double df1, double df2) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("f_quantile: p must lie in (0,1)");
    if (!(df1 > 0.0 && df2 > 0.0))
        throw DomainError("f_quantile: degrees of freedom must be positive");
    boost::math::fisher_f dist(df1, df2);
    return boost::math::quantile(dist, p);
}

MonitoringModel fit_monitor(const Eigen::MatrixXd& train, double variance_target, double alpha) {
    if (!(variance_target > 0.0 && variance_target <= 1.0))
        throw UsageError("fit_monitor: variance_target must lie in (0,1]");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("fit_monitor: alpha must lie in (0,1)");
    const Eigen::Index N = train.rows();
    const Eigen::Index d = train.cols();
    if (N < d + 2)
        throw UsageError("fit_monitor: need at least d+2 training samples, got " +
                         std::to_string(N));

    MonitoringModel model;
    model.alpha = alpha;
    model.n_train = N;
    model.center = train.colwise().mean().transpose();
    Eigen::MatrixXd Z = train.rowwise() - model.center.transpose();
    Eigen::MatrixXd C = Z.transpose() * Z / static_cast<double>(N - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    if (es.info() != Eigen::Success)
        throw SingularityError("fit_monitor: eigendecomposition failed");
    // eigenvalues ascending; walk from the top
    Eigen::VectorXd ev = es.eigenvalues();
    const double total = ev.sum();
    if (!(total > 0.0))
        throw SingularityError("fit_monitor: training invariants have zero variance");

    int R = 0;
    double cum = 0.0;
    for (Eigen::Index i = ev.size() - 1; i >= 0; --i) {
        cum += ev[i];
        ++R;
        if (cum / total >= variance_target) break;
    }
    model.n_components = R;
    model.loadings.resize(R, d);
    for (int j = 0; j < R; ++j)
        model.loadings.row(j) = es.eigenvectors().col(ev.size() - 1 - j).transpose();

    Eigen::MatrixXd scores = Z * model.loadings.transpose();
    Eigen::VectorXd smean = scores.colwise().mean().transpose();
    Eigen::MatrixXd Zs = scores.rowwise() - smean.transpose();
    model.score_cov = Zs.transpose() * Zs / static_cast<double>(N - 1);
    Eigen::LLT<Eigen::MatrixXd> llt(model.score_cov);
    if (llt.info() != Eigen::Success)
        throw SingularityError("fit_monitor: retained-score covariance not positive definite");
    model.score_cov_inv = llt.solve(Eigen::MatrixXd::Identity(R, R));

    const double n = static_cast<double>(N);
    const double fq = f_quantile(1.0 - alpha, static_cast<double>(R), n - R);
    model.t2_limit = R * (n - 1.0) * (n + 1.0) / (n * (n - R)) * fq;
    return model;
}

CycleScore score_cycle(const MonitoringModel& model, const Eigen::MatrixXd& inv,
                       int cycle_index) {
    if (inv.cols() != model.center.size())
        throw DimensionError("score_cycle: invariant width != model dimension");
    CycleScore out;
    out.cycle_index = cycle_index;
    Eigen::MatrixXd scores =
        (inv.rowwise() - model.center.transpose()) * model.loadings.transpose();
    out.t2.resize(scores.rows());
    Eigen::Index n_abnormal = 0;
    for (Eigen::Index k = 0; k < scores.rows(); ++k) {
        Eigen::VectorXd s = scores.row(k).transpose();
        out.t2[k] = s.dot(model.score_cov_inv * s);
        if (out.t2[k] > model.t2_limit) ++n_abnormal;
    }
    out.abnormality_rate =
        scores.rows() > 0 ? static_cast<double>(n_abnormal) / static_cast<double>(scores.rows())
                          : 0.0;
    return out;
}

} // namespace stagewise
