#pragma once

#include <string>
#include <vector>

#include "stagewise/dataset.hpp"
#include "stagewise/embedding.hpp"
#include "stagewise/monitor.hpp"
#include "stagewise/ssa.hpp"

namespace stagewise {

struct SegmenterConfig {
    int window = 15;               // training cycles per stage fit
    double alpha = 0.05;           // significance for both the limit and AR rule
    double variance_target = 0.85; // PCA cumulative explained variance
    int consecutive_required = 2;  // exceedances in a row that declare a switch
    int max_lag = 50;              // AMI search bound (clamped to data length)
    int max_r = 10;                // FNN search bound
    SsaConfig ssa;

    void validate() const;
};

// One stage of the final partition, with the model metadata that produced it.
struct StageRange {
    int start_cycle = 0;  // 1-based absolute, inclusive
    int end_cycle = 0;
    int tau = 0;
    int r = 0;
    int d = 0;
    int sync_rows = 0;        // synchronized training length M
    int n_components = 0;     // retained PCs
    double objective = 0.0;   // final SSA objective
    double t2_limit = 0.0;
    bool converged = false;
    bool short_tail = false;  // trailing cycles merged in because < window remained
};

// One scoring event: a cycle evaluated against some stage's model.
struct ScoreEvent {
    int cycle_index = 0;  // 1-based absolute
    int stage_id = 0;     // 1-based stage whose model scored it
    double ar = 0.0;
    double t2_limit = 0.0;
    bool training = false;  // cycle was part of that stage's training window
};

struct Segmentation {
    std::string dataset_name;
    std::vector<StageRange> stages;
    std::vector<ScoreEvent> trace;
    SegmenterConfig config;
    // Decisions that deviate from or reconstruct under-specified behavior,
    // recorded with the output.
    std::vector<std::string> notes;

    void check_partition(int n_cycles) const;  // stages cover 1..N disjointly
};

// Fitted per-stage model: embedding params, stationary basis, monitor.
class StageModel {
public:
    StageModel(const std::vector<CycleRecord>& window_cycles, const SegmenterConfig& cfg);

    double score(const CycleRecord& cycle) const;  // abnormality rate
    CycleScore score_full(const CycleRecord& cycle) const;

    EmbeddingParams params() const { return params_; }
    const StationaryBasis& basis() const { return basis_; }
    const MonitoringModel& monitor() const { return monitor_; }
    Eigen::Index sync_rows() const { return sync_rows_; }
    const Eigen::VectorXd& center() const { return center_; }

private:
    EmbeddingParams params_;
    Eigen::VectorXd center_;
    StationaryBasis basis_;
    MonitoringModel monitor_;
    Eigen::Index sync_rows_ = 0;
};

// Streaming switch decision over successive cycles of one stage.
enum class StreamDecision { kContinue, kPending, kSwitch };

class SwitchDetector {
public:
    SwitchDetector(double alpha, int consecutive_required)
        : alpha_(alpha), required_(consecutive_required) {}

    // Feed the next cycle's abnormality rate; returns the decision. When the
    // decision is kSwitch, switch_cycle() is the first cycle of the run of
    // exceedances (the cycle that begins the new stage).
    StreamDecision feed(int cycle_index, double ar);
    int switch_cycle() const { return run_start_; }

private:
    double alpha_;
    int required_;
    int run_len_ = 0;
    int run_start_ = -1;
    int last_cycle_ = -1;
};

// Steps the full recursive division: fit on the first `window` cycles of the
// current origin, score forward, split at the first `consecutive_required`
// run of AR > alpha, restart from the switch cycle.
Segmentation divide_stages(const BatteryDataset& dataset, const SegmenterConfig& config);

// Window-level embedding-parameter selection (averaged across cycles).
EmbeddingParams select_window_params(const std::vector<CycleRecord>& window_cycles,
                                     int max_lag, int max_r);

} // namespace stagewise
