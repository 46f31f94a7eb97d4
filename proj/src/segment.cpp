#include "stagewise/segment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stagewise {

void SegmenterConfig::validate() const {
    if (window < 3) throw UsageError("config: window must be >= 3");
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("config: alpha must lie in (0,1)");
    if (!(variance_target > 0.0 && variance_target <= 1.0))
        throw UsageError("config: variance_target must lie in (0,1]");
    if (consecutive_required < 1) throw UsageError("config: consecutive_required must be >= 1");
    if (max_lag < 1) throw UsageError("config: max_lag must be >= 1");
    if (max_r < 1) throw UsageError("config: max_r must be >= 1");
}

void Segmentation::check_partition(int n_cycles) const {
    if (stages.empty()) throw PipelineError("segmentation produced no stages");
    if (stages.front().start_cycle != 1)
        throw PipelineError("segmentation does not start at cycle 1");
    for (size_t i = 0; i < stages.size(); ++i) {
        if (stages[i].start_cycle > stages[i].end_cycle)
            throw PipelineError("empty stage range");
        if (i > 0 && stages[i].start_cycle != stages[i - 1].end_cycle + 1)
            throw PipelineError("stages not contiguous");
    }
    if (stages.back().end_cycle != n_cycles)
        throw PipelineError("segmentation does not end at cycle N");
}

EmbeddingParams select_window_params(const std::vector<CycleRecord>& window_cycles, int max_lag,
                                     int max_r) {
    if (window_cycles.empty())
        throw UsageError("select_window_params: empty window");
    Eigen::Index min_len = std::numeric_limits<Eigen::Index>::max();
    for (const auto& c : window_cycles) min_len = std::min(min_len, c.samples());
    // clamp so select_tau's length precondition always holds
    const int lag_bound = std::max(1, std::min<int>(max_lag, static_cast<int>(min_len / 2)));

    const int J = static_cast<int>(window_cycles.front().channels.cols());
    std::vector<EmbeddingParams> per_var;
    for (int j = 0; j < J; ++j) {
        // AMI curves averaged across the window's cycles, then the usual
        // first-local-minimum rule on the averaged curve
        std::vector<double> avg(static_cast<size_t>(lag_bound), 0.0);
        for (const auto& c : window_cycles)
            for (int lag = 1; lag <= lag_bound; ++lag)
                avg[static_cast<size_t>(lag - 1)] +=
                    average_mutual_information(c.channels.col(j), lag);
        for (double& v : avg) v /= static_cast<double>(window_cycles.size());

        int tau = 0;
        constexpr double inf = std::numeric_limits<double>::infinity();
        for (int i = 0; i < lag_bound && tau == 0; ++i) {
            double prev = (i > 0) ? avg[static_cast<size_t>(i - 1)] : inf;
            double next = (i + 1 < lag_bound) ? avg[static_cast<size_t>(i + 1)] : inf;
            if (avg[static_cast<size_t>(i)] < prev && avg[static_cast<size_t>(i)] <= next)
                tau = i + 1;
        }
        if (tau == 0) {
            int best = 0;
            for (int i = 1; i < lag_bound; ++i)
                if (avg[static_cast<size_t>(i)] < avg[static_cast<size_t>(best)]) best = i;
            tau = best + 1;
        }

        // FNN fractions averaged across cycles per candidate dimension
        int r = 0;
        const int r_feasible = std::max(
            1, std::min<int>(max_r, static_cast<int>((min_len - 2) / tau)));  // embed at m+1
        for (int m = 1; m <= r_feasible && r == 0; ++m) {
            double frac = 0.0;
            for (const auto& c : window_cycles) frac += fnn_fraction(c.channels.col(j), tau, m);
            frac /= static_cast<double>(window_cycles.size());
            if (frac <= 0.01) r = m;
        }
        if (r == 0) r = r_feasible;
        per_var.push_back({tau, r});
    }
    return merge_params(per_var);
}

StageModel::StageModel(const std::vector<CycleRecord>& window_cycles,
                       const SegmenterConfig& cfg) {
    params_ = select_window_params(window_cycles, cfg.max_lag, cfg.max_r);

    std::vector<Eigen::MatrixXd> embedded;
    embedded.reserve(window_cycles.size());
    for (const auto& c : window_cycles) {
        std::vector<EmbeddingParams> per_var(static_cast<size_t>(c.channels.cols()), params_);
        embedded.push_back(embed_multivariate(c, per_var).data);
    }
    embedded = truncate_to_min_length(embedded, &sync_rows_);

    auto [W, center] = pooled_whitener(embedded);
    center_ = center;
    basis_ = select_d(embedded, W, center_, cfg.ssa);
    if (basis_.d == 0)
        throw PipelineError("no stationary subspace found in training window");

    Eigen::Index total = sync_rows_ * static_cast<Eigen::Index>(embedded.size());
    Eigen::MatrixXd train(total, basis_.d);
    Eigen::Index at = 0;
    for (const auto& X : embedded) {
        train.middleRows(at, X.rows()) = project_invariants(basis_, X, center_);
        at += X.rows();
    }
    monitor_ = fit_monitor(train, cfg.variance_target, cfg.alpha);
}

CycleScore StageModel::score_full(const CycleRecord& cycle) const {
    std::vector<EmbeddingParams> per_var(static_cast<size_t>(cycle.channels.cols()), params_);
    EmbeddedCycle e = embed_multivariate(cycle, per_var);
    Eigen::MatrixXd inv = project_invariants(basis_, e.data, center_);
    return score_cycle(monitor_, inv, cycle.cycle_index);
}

double StageModel::score(const CycleRecord& cycle) const {
    return score_full(cycle).abnormality_rate;
}

StreamDecision SwitchDetector::feed(int cycle_index, double ar) {
    if (last_cycle_ >= 0 && cycle_index != last_cycle_ + 1)
        throw UsageError("SwitchDetector: cycles must be fed in adjacent order");
    last_cycle_ = cycle_index;
    if (ar > alpha_) {
        if (run_len_ == 0) run_start_ = cycle_index;
        ++run_len_;
        if (run_len_ >= required_) return StreamDecision::kSwitch;
        return StreamDecision::kPending;
    }
    run_len_ = 0;
    run_start_ = -1;
    return StreamDecision::kContinue;
}

Segmentation divide_stages(const BatteryDataset& dataset, const SegmenterConfig& config) {
    config.validate();
    dataset.validate();
    const int N = dataset.n_cycles();
    if (N < config.window)
        throw UsageError("divide_stages: dataset has fewer cycles than the training window");

    Segmentation seg;
    seg.dataset_name = dataset.name;
    seg.config = config;
    seg.notes = {
        "embedding parameters re-selected at every stage restart",
        "stationary source count re-selected at every stage restart",
        "T2 limit uses R(N-1)(N+1)/(N(N-R)) * F(R, N-R) (corrected coefficient)",
    };

    int start = 0;  // 0-based origin of the current stage
    while (true) {
        const int stage_id = static_cast<int>(seg.stages.size()) + 1;
        std::vector<CycleRecord> window(dataset.cycles.begin() + start,
                                        dataset.cycles.begin() + start + config.window);
        StageModel model(window, config);

        for (const auto& c : window)
            seg.trace.push_back({c.cycle_index, stage_id, model.score(c),
                                 model.monitor().t2_limit, true});

        SwitchDetector detector(config.alpha, config.consecutive_required);
        int switch_at = -1;  // 0-based
        for (int c = start + config.window; c < N; ++c) {
            double ar = model.score(dataset.cycles[static_cast<size_t>(c)]);
            seg.trace.push_back({c + 1, stage_id, ar, model.monitor().t2_limit, false});
            if (detector.feed(c + 1, ar) == StreamDecision::kSwitch) {
                switch_at = detector.switch_cycle() - 1;
                break;
            }
        }

        StageRange range;
        range.start_cycle = start + 1;
        range.tau = model.params().tau;
        range.r = model.params().r;
        range.d = model.basis().d;
        range.sync_rows = static_cast<int>(model.sync_rows());
        range.n_components = model.monitor().n_components;
        range.objective = model.basis().objective_value;
        range.t2_limit = model.monitor().t2_limit;
        range.converged = model.basis().converged;

        if (switch_at < 0) {
            range.end_cycle = N;
            seg.stages.push_back(range);
            break;
        }
        range.end_cycle = switch_at;  // switch cycle starts the new stage
        seg.stages.push_back(range);
        start = switch_at;
        if (N - start < config.window) {
            // tail too short to refit: absorb into the stage just closed
            seg.stages.back().end_cycle = N;
            seg.stages.back().short_tail = true;
            break;
        }
    }

    seg.check_partition(N);
    return seg;
}

} // namespace stagewise
