#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "stagewise/errors.hpp"

namespace stagewise {

// Channel order is fixed everywhere downstream.
inline constexpr int kNumChannels = 3;
inline const char* kChannelNames[kNumChannels] = {"voltage_v", "current_a", "temperature_c"};

// One discharge cycle: strictly increasing time plus aligned sensor traces.
struct CycleRecord {
    int cycle_index = 0;                 // 1-based
    Eigen::VectorXd time_s;              // length K_c, strictly increasing
    Eigen::MatrixXd channels;            // K_c x 3: voltage, current, temperature

    Eigen::Index samples() const { return time_s.size(); }
};

// Whole battery history: cycles sorted by index, contiguous 1..N.
struct BatteryDataset {
    std::string name;
    double rated_capacity_ah = 2.0;
    std::vector<CycleRecord> cycles;

    int n_cycles() const { return static_cast<int>(cycles.size()); }
    const CycleRecord& cycle(int index_1based) const;  // bounds-checked

    // Enforces every invariant; throws IntegrityError on violation.
    void validate() const;
};

// Reads the canonical CSV (header: cycle,time_s,voltage_v,current_a,temperature_c).
// Rows are grouped by cycle index preserving file order inside each cycle;
// cycle blocks are sorted by index and must come out contiguous 1..N.
BatteryDataset load_dataset(const std::string& path);

// Writes the same schema with round-trip-exact numeric formatting.
void save_dataset(const BatteryDataset& ds, const std::string& path);

// Keeps the first M rows of every matrix, M = minimum row count.
// Used to synchronize embedded cycles to a common length.
std::vector<Eigen::MatrixXd> truncate_to_min_length(const std::vector<Eigen::MatrixXd>& mats,
                                                    Eigen::Index* out_min_rows = nullptr);

} // namespace stagewise
