#include "stagewise/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "stagewise/adf.hpp"
#include "stagewise/monitor.hpp"
#include "stagewise/rng.hpp"
#include "stagewise/segment.hpp"
#include "stagewise/ssa.hpp"
#include "stagewise/synth.hpp"

namespace stagewise {

int RecoveryOutcome::n_within(double tol) const {
    return static_cast<int>(
        std::count_if(angles_deg.begin(), angles_deg.end(), [&](double a) { return a <= tol; }));
}

double RecoveryOutcome::median() const {
    std::vector<double> v = angles_deg;
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n == 0 ? 0.0 : (n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]));
}

double RecoveryOutcome::max() const {
    return angles_deg.empty() ? 0.0
                              : *std::max_element(angles_deg.begin(), angles_deg.end());
}

RecoveryOutcome recovery_battery(int n_seeds) {
    // Battery geometry chosen for identifiability: variance steps 1 -> 4
    // between the epoch halves and per-(epoch, source) sign-flipped mean
    // offsets so every non-stationary direction carries first-moment contrast.
    constexpr int kEpochs = 16;
    constexpr Eigen::Index kSamples = 1500;
    constexpr double kVarianceRatio = 4.0;
    constexpr double kMeanAmp = 3.0;
    constexpr double kNoise = 0.01;
    constexpr double kPhi = 0.6;

    RecoveryOutcome out;
    const auto t0 = std::chrono::steady_clock::now();
    for (int seed = 0; seed < n_seeds; ++seed) {
        Rng rng(static_cast<std::uint64_t>(seed));
        const int n_dim = 2 + seed % 5;
        const int d_true = 1 + seed % std::min(3, n_dim - 1);

        Eigen::MatrixXd A = rng.random_orthogonal(n_dim);
        Eigen::MatrixXd signs(kEpochs, n_dim);
        for (int c = 0; c < kEpochs; ++c)
            for (int j = 0; j < n_dim; ++j) signs(c, j) = rng.uniform01() < 0.5 ? -1.0 : 1.0;

        std::vector<Eigen::MatrixXd> cycles;
        cycles.reserve(kEpochs);
        for (int c = 0; c < kEpochs; ++c) {
            const bool hi = c >= kEpochs / 2;
            const double sd = hi ? std::sqrt(kVarianceRatio) : 1.0;
            const double amp = hi ? kMeanAmp : 0.0;
            Eigen::MatrixXd S(kSamples, n_dim);
            for (int j = 0; j < n_dim; ++j) {
                Eigen::VectorXd x = ar1_series(rng, kSamples, kPhi, Innovations::kUniform);
                if (j < d_true)
                    S.col(j) = x;
                else
                    S.col(j) = (amp * signs(c, j) + sd * x.array()).matrix();
            }
            cycles.push_back(S * A.transpose() + kNoise * rng.gaussian_matrix(kSamples, n_dim));
        }

        auto [W, center] = pooled_whitener(cycles);
        std::vector<EpochStats> epochs = compute_epoch_stats(cycles, center);
        SsaConfig cfg;
        cfg.n_restarts = 3;
        cfg.seed = 1000 + static_cast<std::uint64_t>(seed);
        StationaryBasis basis = optimize_rotation(epochs, W, d_true, cfg);

        out.angles_deg.push_back(
            principal_angle_degrees(basis.projector.transpose(), A.leftCols(d_true)));
    }
    out.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

BoundaryOutcome boundary_battery(int n_seeds) {
    SynthSpec base;
    base.n_cycles = 80;
    base.samples_per_cycle = 400;
    base.d_true = 2;
    base.n_nonstationary = 1;
    base.ar_coeff = 0.3;  // weak autocorrelation keeps projected tails thin
    base.innovations = Innovations::kUniform;
    base.noise_sigma = 0.01;

    SegmenterConfig cfg;
    cfg.max_r = 4;  // stochastic sources saturate FNN; cap the embedding
    cfg.ssa.n_restarts = 3;

    BoundaryOutcome out;
    out.n_seeds = n_seeds;
    for (int seed = 0; seed < n_seeds; ++seed) {
        SynthSpec spec = base;
        spec.change_cycles = {40};
        spec.segment_variances = {1.0, 9.0};
        cfg.ssa.seed = static_cast<std::uint64_t>(seed);
        auto [ds, truth] = generate(spec, static_cast<std::uint64_t>(seed));
        Segmentation seg = divide_stages(ds, cfg);
        if (seg.stages.size() == 2) {
            int err = seg.stages[0].end_cycle - truth.change_cycles[0];
            out.boundary_errors.push_back(err);
            if (std::abs(err) <= 2) ++out.n_hit;
        } else {
            out.boundary_errors.push_back(99);
        }

        SynthSpec flat = base;  // no change cycles: one segment
        auto [ds2, truth2] = generate(flat, 10000 + static_cast<std::uint64_t>(seed));
        Segmentation seg2 = divide_stages(ds2, cfg);
        if (seg2.stages.size() > 1) ++out.n_false_split;
    }
    return out;
}

double training_abnormality_battery(int n_seeds) {
    double total = 0.0;
    for (int seed = 0; seed < n_seeds; ++seed) {
        Rng rng(static_cast<std::uint64_t>(seed));
        const int d = 3;
        const Eigen::Index n = 1000;
        // anisotropic Gaussian invariants with a random orientation
        Eigen::MatrixXd Q = rng.random_orthogonal(d);
        Eigen::VectorXd scales(d);
        scales << std::sqrt(3.0), 1.0, std::sqrt(0.5);
        Eigen::MatrixXd train =
            rng.gaussian_matrix(n, d) * scales.asDiagonal() * Q.transpose();
        MonitoringModel model = fit_monitor(train, 0.85, 0.05);
        total += score_cycle(model, train).abnormality_rate;
    }
    return total / n_seeds;
}

AdfCalibrationOutcome adf_calibration_battery(int n_seeds, int length) {
    AdfCalibrationOutcome out;
    int walk_rejected = 0;
    int noise_accepted = 0;
    for (int seed = 0; seed < n_seeds; ++seed) {
        Rng rng(static_cast<std::uint64_t>(seed));
        Eigen::VectorXd steps = rng.gaussian_vector(length);
        Eigen::VectorXd walk(length);
        double acc = 0.0;
        for (int t = 0; t < length; ++t) {
            acc += steps[t];
            walk[t] = acc;
        }
        if (adf_is_stationary(walk)) ++walk_rejected;
        if (adf_is_stationary(rng.gaussian_vector(length))) ++noise_accepted;
    }
    out.walk_rejection_rate = static_cast<double>(walk_rejected) / n_seeds;
    out.noise_acceptance_rate = static_cast<double>(noise_accepted) / n_seeds;
    return out;
}

} // namespace stagewise
