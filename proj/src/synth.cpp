#include "stagewise/synth.hpp"

#include <algorithm>
#include <cmath>

namespace stagewise {

void SynthSpec::validate() const {
    if (n_cycles < 1) throw UsageError("synth: n_cycles must be >= 1");
    if (samples_per_cycle < 2) throw UsageError("synth: samples_per_cycle must be >= 2");
    if (d_true < 0 || n_nonstationary < 0 || n_sources() < 1)
        throw UsageError("synth: need at least one source");
    if (!(noise_sigma >= 0.0)) throw UsageError("synth: noise_sigma must be >= 0");
    if (!(std::abs(ar_coeff) < 1.0)) throw UsageError("synth: |ar_coeff| must be < 1");
    int prev = 1;
    for (int c : change_cycles) {
        if (c <= prev || c >= n_cycles)
            throw UsageError("synth: change cycles must be strictly increasing inside "
                             "(1, n_cycles)");
        prev = c;
    }
    if (!segment_variances.empty() &&
        segment_variances.size() != static_cast<size_t>(n_segments()))
        throw UsageError("synth: variance schedule length != segment count");
    if (!segment_means.empty() && segment_means.size() != static_cast<size_t>(n_segments()))
        throw UsageError("synth: mean schedule length != segment count");
    for (double v : segment_variances)
        if (!(v > 0.0)) throw UsageError("synth: segment variances must be positive");
    if (mixing.size() > 0) {
        if (mixing.rows() != kNumChannels || mixing.cols() != n_sources())
            throw UsageError("synth: explicit mixing must be 3 x n_sources");
    }
}

Eigen::VectorXd ar1_series(Rng& rng, Eigen::Index n, double phi, Innovations law) {
    const double innov_sd = std::sqrt(1.0 - phi * phi);
    auto draw = [&]() {
        if (law == Innovations::kUniform) {
            // unit-variance uniform
            return rng.uniform(-std::sqrt(3.0), std::sqrt(3.0));
        }
        return rng.gaussian();
    };
    Eigen::VectorXd x(n);
    if (n == 0) return x;
    x[0] = draw();  // stationary marginal law has unit variance
    for (Eigen::Index t = 1; t < n; ++t) x[t] = phi * x[t - 1] + innov_sd * draw();
    return x;
}

std::pair<BatteryDataset, GroundTruth> generate(const SynthSpec& spec, std::uint64_t seed) {
    spec.validate();
    const int T = spec.n_sources();
    if (T > kNumChannels)
        throw UsageError("synth: dataset emission supports at most 3 sources, got " +
                         std::to_string(T));
    Rng rng(seed);

    Eigen::MatrixXd A;  // channels x sources
    if (spec.mixing.size() > 0) {
        A = spec.mixing;
    } else {
        A = rng.random_orthogonal(kNumChannels).leftCols(T);
    }

    std::vector<double> vars = spec.segment_variances;
    if (vars.empty()) {
        for (int s = 0; s < spec.n_segments(); ++s)
            vars.push_back(static_cast<double>((s + 1) * (s + 1)));  // 1, 4, 9, ...
    }
    std::vector<double> means = spec.segment_means;
    if (means.empty()) means.assign(static_cast<size_t>(spec.n_segments()), 0.0);

    BatteryDataset ds;
    ds.name = "synthetic";
    GroundTruth truth;
    truth.change_cycles = spec.change_cycles;
    truth.mixing = A;
    truth.d_true = spec.d_true;
    truth.stationary_subspace = A.leftCols(spec.d_true);

    const Eigen::Index L = spec.samples_per_cycle;
    int segment = 0;
    for (int c = 1; c <= spec.n_cycles; ++c) {
        if (segment < static_cast<int>(spec.change_cycles.size()) &&
            c > spec.change_cycles[static_cast<size_t>(segment)])
            ++segment;
        Eigen::MatrixXd S(L, T);
        for (int j = 0; j < T; ++j) {
            Eigen::VectorXd x = ar1_series(rng, L, spec.ar_coeff, spec.innovations);
            if (j < spec.d_true) {
                S.col(j) = x;
            } else {
                S.col(j) = (means[static_cast<size_t>(segment)] +
                            std::sqrt(vars[static_cast<size_t>(segment)]) * x.array())
                               .matrix();
            }
        }
        CycleRecord rec;
        rec.cycle_index = c;
        rec.time_s.resize(L);
        for (Eigen::Index k = 0; k < L; ++k) rec.time_s[k] = static_cast<double>(k);
        rec.channels = S * A.transpose();
        if (spec.noise_sigma > 0.0)
            rec.channels += spec.noise_sigma * rng.gaussian_matrix(L, kNumChannels);
        ds.cycles.push_back(std::move(rec));
    }
    ds.validate();
    return {std::move(ds), std::move(truth)};
}

double principal_angle_degrees(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows())
        throw DimensionError("principal_angle_degrees: row counts differ");
    if (a.cols() == 0 || b.cols() == 0)
        throw UsageError("principal_angle_degrees: empty subspace");
    Eigen::HouseholderQR<Eigen::MatrixXd> qa(a), qb(b);
    Eigen::MatrixXd Qa = qa.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
    Eigen::MatrixXd Qb = qb.householderQ() * Eigen::MatrixXd::Identity(b.rows(), b.cols());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Qa.transpose() * Qb);
    double smin = svd.singularValues().minCoeff();
    smin = std::clamp(smin, -1.0, 1.0);
    return std::acos(smin) * 180.0 / M_PI;
}

} // namespace stagewise
