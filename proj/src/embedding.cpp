#include "stagewise/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stagewise {

namespace {

void require_varying(const Eigen::VectorXd& s, const char* who) {
    if (s.size() < 2 || s.maxCoeff() == s.minCoeff())
        throw DegenerateInputError(std::string(who) + ": constant or empty series");
}

} // namespace

Eigen::MatrixXd embed(const Eigen::VectorXd& series, const EmbeddingParams& p) {
    if (p.tau < 1 || p.r < 1)
        throw UsageError("embed: tau and r must be >= 1");
    const Eigen::Index L = series.size();
    const Eigen::Index span = static_cast<Eigen::Index>(p.r - 1) * p.tau;
    if (L < span + 1)
        throw DimensionError("embed: series length " + std::to_string(L) +
                             " too short for tau=" + std::to_string(p.tau) +
                             ", r=" + std::to_string(p.r) + " (needs >= " +
                             std::to_string(span + 1) + ")");
    const Eigen::Index rows = L - span;
    Eigen::MatrixXd out(rows, p.r);
    for (int j = 0; j < p.r; ++j)
        out.col(j) = series.segment(static_cast<Eigen::Index>(j) * p.tau, rows);
    return out;
}

double average_mutual_information(const Eigen::VectorXd& series, int lag, int bins) {
    require_varying(series, "average_mutual_information");
    if (lag < 1 || lag >= series.size())
        throw UsageError("average_mutual_information: lag out of range");
    const Eigen::Index n = series.size() - lag;
    const double lo = series.minCoeff();
    const double hi = series.maxCoeff();
    const double scale = bins / (hi - lo);

    Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(bins, bins);
    for (Eigen::Index k = 0; k < n; ++k) {
        int a = std::clamp(static_cast<int>((series[k] - lo) * scale), 0, bins - 1);
        int b = std::clamp(static_cast<int>((series[k + lag] - lo) * scale), 0, bins - 1);
        joint(a, b) += 1.0;
    }
    joint /= static_cast<double>(n);
    Eigen::VectorXd pa = joint.rowwise().sum();
    Eigen::VectorXd pb = joint.colwise().sum();

    double mi = 0.0;
    for (int a = 0; a < bins; ++a)
        for (int b = 0; b < bins; ++b) {
            double p = joint(a, b);
            if (p > 0.0) mi += p * std::log(p / (pa[a] * pb[b]));
        }
    return mi;
}

int select_tau(const Eigen::VectorXd& series, int max_lag) {
    require_varying(series, "select_tau");
    if (max_lag < 1)
        throw UsageError("select_tau: max_lag must be >= 1");
    if (series.size() < 2 * static_cast<Eigen::Index>(max_lag))
        throw UsageError("select_tau: series shorter than 2*max_lag");

    std::vector<double> ami(static_cast<size_t>(max_lag));
    for (int lag = 1; lag <= max_lag; ++lag)
        ami[static_cast<size_t>(lag - 1)] = average_mutual_information(series, lag);

    constexpr double inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < max_lag; ++i) {
        double prev = (i > 0) ? ami[static_cast<size_t>(i - 1)] : inf;
        double next = (i + 1 < max_lag) ? ami[static_cast<size_t>(i + 1)] : inf;
        double cur = ami[static_cast<size_t>(i)];
        if (cur < prev && cur <= next) return i + 1;  // first local minimum
    }
    int best = 0;
    for (int i = 1; i < max_lag; ++i)
        if (ami[static_cast<size_t>(i)] < ami[static_cast<size_t>(best)]) best = i;
    return best + 1;
}

double fnn_fraction(const Eigen::VectorXd& series, int tau, int m, double r_tol, double a_tol) {
    require_varying(series, "fnn_fraction");
    // Embed at m+1 so every point also has its (m+1)-th coordinate available.
    Eigen::MatrixXd V = embed(series, {tau, m + 1});
    const Eigen::Index n = V.rows();
    if (n < 2) return 0.0;
    Eigen::MatrixXd base = V.leftCols(m);
    Eigen::VectorXd extra_coord = V.col(m);

    const double mean = series.mean();
    const double ra = std::sqrt((series.array() - mean).square().sum() /
                                static_cast<double>(series.size()));
    const double floor_dist = 1e-10 * ra;  // guards exact-duplicate neighbors

    Eigen::Index n_false = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        Eigen::Index nn = -1;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            double d2 = (base.row(j) - base.row(i)).squaredNorm();
            if (d2 < best) {
                best = d2;
                nn = j;
            }
        }
        double rd = std::max(std::sqrt(best), floor_dist);
        double extra = std::abs(extra_coord[i] - extra_coord[nn]);
        double grown = std::sqrt(rd * rd + extra * extra);
        if (extra / rd > r_tol || grown / ra > a_tol) ++n_false;
    }
    return static_cast<double>(n_false) / static_cast<double>(n);
}

int select_r(const Eigen::VectorXd& series, int tau, int max_r, double f_tol) {
    require_varying(series, "select_r");
    if (tau < 1 || max_r < 1)
        throw UsageError("select_r: tau and max_r must be >= 1");
    for (int m = 1; m <= max_r; ++m) {
        if (series.size() < static_cast<Eigen::Index>(m) * tau + 1)
            return std::max(1, m - 1);  // cannot embed deeper; keep last feasible
        if (fnn_fraction(series, tau, m) <= f_tol) return m;
    }
    return max_r;
}

EmbeddingParams merge_params(const std::vector<EmbeddingParams>& per_var) {
    if (per_var.empty())
        throw UsageError("merge_params: empty parameter list");
    EmbeddingParams merged{1, 1};
    for (const auto& p : per_var) {
        merged.tau = std::max(merged.tau, p.tau);
        merged.r = std::max(merged.r, p.r);
    }
    return merged;
}

EmbeddedCycle embed_multivariate(const CycleRecord& cycle,
                                 const std::vector<EmbeddingParams>& per_var) {
    if (per_var.size() != static_cast<size_t>(cycle.channels.cols()))
        throw DimensionError("embed_multivariate: params count != channel count");
    EmbeddingParams merged = merge_params(per_var);
    const int J = static_cast<int>(cycle.channels.cols());

    EmbeddedCycle out;
    out.cycle_index = cycle.cycle_index;
    Eigen::MatrixXd first = embed(cycle.channels.col(0), merged);
    out.data.resize(first.rows(), static_cast<Eigen::Index>(J) * merged.r);
    out.data.leftCols(merged.r) = first;
    for (int j = 1; j < J; ++j)
        out.data.middleCols(static_cast<Eigen::Index>(j) * merged.r, merged.r) =
            embed(cycle.channels.col(j), merged);
    return out;
}

} // namespace stagewise
