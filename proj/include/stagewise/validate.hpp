#pragma once

#include <cstdint>
#include <vector>

#include "stagewise/errors.hpp"

namespace stagewise {

// Seeded batteries that check the pipeline against generator ground truth.
// Each battery's generator settings are fixed here so results are
// reproducible run to run.

struct RecoveryOutcome {
    std::vector<double> angles_deg;  // one per seed
    double runtime_seconds = 0.0;
    int n_within(double tol_deg) const;
    double median() const;
    double max() const;
};

// Stationary-subspace recovery on 2..6-dimensional mixtures with 1..3
// stationary AR(1) sources; non-stationary sources step their variance 4x
// (and shift mean) between the two epoch halves. Returns the largest
// principal angle between recovered and true subspace per seed.
RecoveryOutcome recovery_battery(int n_seeds = 50);

struct BoundaryOutcome {
    int n_seeds = 0;
    int n_hit = 0;          // change runs: exactly 2 stages, boundary within +-2
    int n_false_split = 0;  // stationary runs that produced > 1 stage
    std::vector<int> boundary_errors;  // signed error per change run (99 = miss)
};

// Change-point accuracy: 80 cycles, single regime change after cycle 40
// (variance jump 9x), plus purely stationary control runs.
BoundaryOutcome boundary_battery(int n_seeds = 50);

// Mean training-set abnormality rate over seeds: monitor fitted on Gaussian
// invariants and scored on its own training data.
double training_abnormality_battery(int n_seeds = 50);

struct AdfCalibrationOutcome {
    double walk_rejection_rate = 0.0;   // random walks falsely declared stationary
    double noise_acceptance_rate = 0.0; // white noise correctly declared stationary
};

AdfCalibrationOutcome adf_calibration_battery(int n_seeds = 100, int length = 500);

} // namespace stagewise
