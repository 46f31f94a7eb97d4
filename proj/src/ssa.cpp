#include "stagewise/ssa.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>

#include "stagewise/adf.hpp"
#include "stagewise/rng.hpp"

namespace stagewise {

std::pair<Eigen::MatrixXd, Eigen::VectorXd> pooled_whitener(
    const std::vector<Eigen::MatrixXd>& cycles, double ridge_scale) {
    if (cycles.size() < 2)
        throw UsageError("pooled_whitener: need at least two cycles to pool");
    const Eigen::Index dim = cycles.front().cols();
    Eigen::Index total = 0;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
    for (const auto& X : cycles) {
        if (X.cols() != dim)
            throw DimensionError("pooled_whitener: inconsistent column counts");
        total += X.rows();
        sum += X.colwise().sum().transpose();
    }
    if (total < 2)
        throw UsageError("pooled_whitener: fewer than 2 pooled rows");
    Eigen::VectorXd center = sum / static_cast<double>(total);

    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& X : cycles) {
        Eigen::MatrixXd Z = X.rowwise() - center.transpose();
        S.noalias() += Z.transpose() * Z;
    }
    S /= static_cast<double>(total - 1);

    const double eps = ridge_scale * S.trace() / static_cast<double>(dim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S +
                                                      eps * Eigen::MatrixXd::Identity(dim, dim));
    if (es.info() != Eigen::Success)
        throw SingularityError("pooled_whitener: eigendecomposition failed");
    Eigen::VectorXd ev = es.eigenvalues();
    // relative floor: exact rank deficiency comes out of the solver as noise
    // around zero, so compare against the spectrum's scale
    const double floor = static_cast<double>(dim) *
                         std::numeric_limits<double>::epsilon() * ev.cwiseAbs().maxCoeff();
    if (ev.minCoeff() <= floor)
        throw SingularityError("pooled_whitener: pooled covariance not positive definite");
    Eigen::MatrixXd W = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                        es.eigenvectors().transpose();
    return {W, center};
}

std::vector<EpochStats> compute_epoch_stats(const std::vector<Eigen::MatrixXd>& cycles,
                                            const Eigen::VectorXd& center) {
    if (cycles.size() < 2)
        throw UsageError("compute_epoch_stats: epoch contrast needs at least two cycles");
    std::vector<EpochStats> out;
    out.reserve(cycles.size());
    for (const auto& X : cycles) {
        if (X.cols() != center.size())
            throw DimensionError("compute_epoch_stats: cycle width != center length");
        if (X.rows() < 2)
            throw DegenerateInputError("compute_epoch_stats: cycle with < 2 rows");
        Eigen::MatrixXd Y = X.rowwise() - center.transpose();
        EpochStats st;
        st.mean = Y.colwise().mean().transpose();
        Eigen::MatrixXd Z = Y.rowwise() - st.mean.transpose();
        st.covariance = Z.transpose() * Z / static_cast<double>(X.rows() - 1);
        out.push_back(std::move(st));
    }
    return out;
}

double kld_to_standard_normal(const Eigen::VectorXd& u, const Eigen::MatrixXd& S) {
    if (S.rows() != S.cols() || S.rows() != u.size())
        throw DimensionError("kld_to_standard_normal: shape mismatch");
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success)
        throw DomainError("kld_to_standard_normal: covariance not positive definite");
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < S.rows(); ++i)
        logdet += 2.0 * std::log(llt.matrixL()(i, i));
    return 0.5 * (S.trace() - logdet + u.squaredNorm() - static_cast<double>(u.size()));
}

WhitenedStats whiten_stats(const std::vector<EpochStats>& epochs, const Eigen::MatrixXd& W) {
    WhitenedStats ws;
    ws.m.reserve(epochs.size());
    ws.A.reserve(epochs.size());
    for (const auto& e : epochs) {
        ws.m.push_back(W * e.mean);
        ws.A.push_back(W * e.covariance * W);
    }
    return ws;
}

double ssa_objective(const Eigen::MatrixXd& B, int d, const WhitenedStats& stats) {
    if (d < 1 || d > B.rows())
        throw UsageError("ssa_objective: d out of range");
    if (stats.m.empty())
        throw UsageError("ssa_objective: no epochs");
    const auto Bs = B.topRows(d);
    double val = 0.0;
    for (size_t i = 0; i < stats.m.size(); ++i) {
        Eigen::VectorXd mu = Bs * stats.m[i];
        Eigen::MatrixXd S = Bs * stats.A[i] * Bs.transpose();
        val += kld_to_standard_normal(mu, S);
    }
    return val;
}

double ssa_objective(const Eigen::MatrixXd& B, int d, const std::vector<EpochStats>& epochs,
                     const Eigen::MatrixXd& W) {
    return ssa_objective(B, d, whiten_stats(epochs, W));
}

Eigen::MatrixXd ssa_gradient(const Eigen::MatrixXd& B, int d, const WhitenedStats& stats) {
    const Eigen::Index n = B.rows();
    const auto Bs = B.topRows(d);
    Eigen::MatrixXd Ge = Eigen::MatrixXd::Zero(n, n);
    for (size_t i = 0; i < stats.m.size(); ++i) {
        Eigen::VectorXd mu = Bs * stats.m[i];
        Eigen::MatrixXd S = Bs * stats.A[i] * Bs.transpose();
        Eigen::MatrixXd Sinv = S.llt().solve(Eigen::MatrixXd::Identity(d, d));
        Ge.topRows(d).noalias() +=
            (Eigen::MatrixXd::Identity(d, d) - Sinv) * Bs * stats.A[i];
        Ge.topRows(d).noalias() += mu * stats.m[i].transpose();
    }
    Eigen::MatrixXd GBt = Ge * B.transpose();
    return 0.5 * (GBt - GBt.transpose());
}

CgOutcome cg_minimize(const WhitenedStats& stats, int d, const Eigen::MatrixXd& start,
                      int max_iters, double grad_tol) {
    CgOutcome out;
    Eigen::MatrixXd B = start;
    double f = ssa_objective(B, d, stats);
    Eigen::MatrixXd g = ssa_gradient(B, d, stats);
    Eigen::MatrixXd D = -g;
    double t_prev = 1.0;

    for (int it = 0; it < max_iters; ++it) {
        out.iterations = it;
        const double gn = g.norm();
        if (gn <= grad_tol) {
            out.converged = true;
            break;
        }
        double dd = (g.array() * D.array()).sum();
        if (dd >= 0.0) {  // conjugate direction lost descent; restart steepest
            D = -g;
            dd = -gn * gn;
        }
        double t = t_prev * 2.0;
        bool accepted = false;
        Eigen::MatrixXd Bn;
        double fn = f;
        for (int halvings = 0; halvings < 60; ++halvings) {
            Bn = (t * D).exp() * B;
            fn = ssa_objective(Bn, d, stats);
            if (fn <= f + 1e-4 * t * dd) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            if ((D + g).norm() <= 1e-14 * gn) break;  // already steepest descent: stuck
            D = -g;
            continue;
        }
        Eigen::MatrixXd g_new = ssa_gradient(Bn, d, stats);
        double beta = (g_new.array() * (g_new - g).array()).sum() / (gn * gn);
        beta = std::max(0.0, beta);
        D = -g_new + beta * D;
        B = std::move(Bn);
        f = fn;
        g = std::move(g_new);
        t_prev = t;
    }
    out.rotation = std::move(B);
    out.objective = f;
    return out;
}

StationaryBasis optimize_rotation(const std::vector<EpochStats>& epochs,
                                  const Eigen::MatrixXd& W, int d, const SsaConfig& config) {
    if (epochs.size() < 2)
        throw UsageError("optimize_rotation: need at least 2 epochs");
    const Eigen::Index n = W.rows();
    if (d < 1 || d > n)
        throw UsageError("optimize_rotation: d out of range");
    WhitenedStats stats = whiten_stats(epochs, W);

    Rng rng(config.seed);
    CgOutcome best;
    bool have = false;
    for (int s = 0; s <= config.n_restarts; ++s) {
        Eigen::MatrixXd start =
            (s == 0) ? Eigen::MatrixXd::Identity(n, n) : rng.random_orthogonal(n);
        CgOutcome o = cg_minimize(stats, d, start, config.max_iters, config.grad_tol);
        if (!have || o.objective < best.objective) {
            best = std::move(o);
            have = true;
        }
    }

    StationaryBasis basis;
    basis.whitener = W;
    basis.rotation = std::move(best.rotation);
    basis.d = d;
    basis.projector = basis.rotation.topRows(d) * W;
    basis.objective_value = best.objective;
    basis.converged = best.converged;
    return basis;
}

Eigen::MatrixXd project_invariants(const StationaryBasis& basis, const Eigen::MatrixXd& cycle,
                                   const Eigen::VectorXd& center) {
    if (cycle.cols() != basis.whitener.rows())
        throw DimensionError("project_invariants: cycle width != basis dimension");
    return (cycle.rowwise() - center.transpose()) * basis.projector.transpose();
}

StationaryBasis select_d(const std::vector<Eigen::MatrixXd>& training, const Eigen::MatrixXd& W,
                         const Eigen::VectorXd& center, const SsaConfig& config) {
    std::vector<EpochStats> epochs = compute_epoch_stats(training, center);
    const int Jr = static_cast<int>(W.rows());
    Eigen::Index total_rows = 0;
    for (const auto& X : training) total_rows += X.rows();

    for (int d = Jr; d >= 1; --d) {
        StationaryBasis basis = optimize_rotation(epochs, W, d, config);
        Eigen::MatrixXd scores(total_rows, d);
        Eigen::Index at = 0;
        for (const auto& X : training) {
            scores.middleRows(at, X.rows()) = project_invariants(basis, X, center);
            at += X.rows();
        }
        bool all_stationary = true;
        for (int j = 0; j < d && all_stationary; ++j)
            all_stationary = adf_is_stationary(scores.col(j), config.adf_alpha);
        if (all_stationary) return basis;
    }

    StationaryBasis none;
    none.whitener = W;
    none.rotation = Eigen::MatrixXd::Identity(Jr, Jr);
    none.d = 0;
    none.projector = Eigen::MatrixXd(0, Jr);
    return none;  // caller treats d == 0 as a pipeline error
}

} // namespace stagewise
