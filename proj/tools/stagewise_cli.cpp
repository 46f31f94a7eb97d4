#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "stagewise/dataset.hpp"
#include "stagewise/segment.hpp"
#include "stagewise/serialize.hpp"
#include "stagewise/synth.hpp"
#include "stagewise/validate.hpp"
#include "stagewise/version.hpp"

namespace {

using nlohmann::json;

int log_level() {
    const char* env = std::getenv("STAGEWISE_LOG");
    if (!env) return 1;  // warnings
    std::string v(env);
    if (v == "debug") return 3;
    if (v == "info") return 2;
    if (v == "error") return 0;
    return 1;
}

void log_info(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[stagewise] " << msg << "\n";
}

std::string format_ranges(const stagewise::Segmentation& seg) {
    std::ostringstream out;
    for (size_t i = 0; i < seg.stages.size(); ++i) {
        if (i) out << ",";
        out << seg.stages[i].start_cycle << "-" << seg.stages[i].end_cycle;
    }
    return out.str();
}

int cmd_analyze(const std::string& input, const std::string& output_dir,
                stagewise::SegmenterConfig cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    log_info("loading " + input);
    stagewise::BatteryDataset ds = stagewise::load_dataset(input);
    log_info("segmenting " + std::to_string(ds.n_cycles()) + " cycles");
    stagewise::Segmentation seg = stagewise::divide_stages(ds, cfg);

    std::filesystem::create_directories(output_dir);
    const std::string seg_path = output_dir + "/segmentation.json";
    const std::string scores_path = output_dir + "/scores.csv";
    const std::string manifest_path = output_dir + "/manifest.json";

    stagewise::write_text_file(
        seg_path, stagewise::dump_json(stagewise::segmentation_to_json(seg, ds.n_cycles())));
    stagewise::write_text_file(scores_path, stagewise::scores_to_csv(seg));

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json manifest;
    manifest["tool"] = stagewise::kToolName;
    manifest["version"] = stagewise::kVersion;
    manifest["input"] = input;
    manifest["output_dir"] = output_dir;
    manifest["seed"] = cfg.ssa.seed;
    manifest["config"] = stagewise::config_to_json(cfg);
    manifest["wall_clock_seconds"] = wall;
    manifest["artifacts"] = {{"segmentation.json", stagewise::hash_file(seg_path)},
                             {"scores.csv", stagewise::hash_file(scores_path)}};
    stagewise::write_text_file(manifest_path, stagewise::dump_json(manifest));

    std::cout << "name\tstages\tranges\n";
    std::cout << seg.dataset_name << "\t" << seg.stages.size() << "\t" << format_ranges(seg)
              << "\n";
    return 0;
}

int cmd_synth(const stagewise::SynthSpec& spec, std::uint64_t seed, const std::string& out_csv,
              const std::string& out_truth) {
    auto [ds, truth] = stagewise::generate(spec, seed);
    stagewise::save_dataset(ds, out_csv);
    stagewise::write_text_file(out_truth,
                               stagewise::dump_json(stagewise::truth_to_json(truth)));
    std::cout << "wrote " << out_csv << " (" << ds.n_cycles() << " cycles) and " << out_truth
              << "\n";
    return 0;
}

int cmd_validate(int seeds, double angle_tol) {
    bool ok = true;

    log_info("subspace recovery battery");
    stagewise::RecoveryOutcome rec = stagewise::recovery_battery(seeds);
    const int hit = rec.n_within(angle_tol);
    const bool rec_ok = hit >= (seeds * 9 + 9) / 10 && rec.runtime_seconds < 60.0;
    ok = ok && rec_ok;
    std::cout << "recovery: " << hit << "/" << seeds << " seeds within " << angle_tol
              << " deg (median " << rec.median() << ", max " << rec.max() << "), "
              << rec.runtime_seconds << " s -> " << (rec_ok ? "pass" : "FAIL") << "\n";

    log_info("change-point battery");
    stagewise::BoundaryOutcome bnd = stagewise::boundary_battery(seeds);
    double mae = 0.0;
    int misses = 0;
    for (int e : bnd.boundary_errors) {
        if (e == 99) {
            ++misses;
        } else {
            mae += std::abs(e);
        }
    }
    mae = bnd.boundary_errors.empty() || misses == static_cast<int>(bnd.boundary_errors.size())
              ? 0.0
              : mae / (static_cast<double>(bnd.boundary_errors.size()) - misses);
    const bool bnd_ok =
        bnd.n_hit >= (seeds * 9 + 9) / 10 && bnd.n_false_split * 10 <= seeds;
    ok = ok && bnd_ok;
    std::cout << "boundary: " << bnd.n_hit << "/" << seeds
              << " runs hit within +-2 cycles (MAE " << mae << ", misses " << misses << "); "
              << bnd.n_false_split << "/" << seeds << " stationary runs split -> "
              << (bnd_ok ? "pass" : "FAIL") << "\n";

    log_info("training abnormality battery");
    const double ar = stagewise::training_abnormality_battery(seeds);
    const bool ar_ok = ar >= 0.03 && ar <= 0.07;
    ok = ok && ar_ok;
    std::cout << "training abnormality rate: " << ar << " (want 0.05 +- 0.02) -> "
              << (ar_ok ? "pass" : "FAIL") << "\n";

    log_info("unit-root calibration battery");
    stagewise::AdfCalibrationOutcome adf = stagewise::adf_calibration_battery();
    const bool adf_ok =
        adf.walk_rejection_rate <= 0.10 && adf.noise_acceptance_rate >= 0.95;
    ok = ok && adf_ok;
    std::cout << "unit-root test: walk rejection " << adf.walk_rejection_rate
              << " (want <= 0.10), noise acceptance " << adf.noise_acceptance_rate
              << " (want >= 0.95) -> " << (adf_ok ? "pass" : "FAIL") << "\n";

    std::cout << (ok ? "all validation suites passed" : "validation FAILED") << "\n";
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Degradation-stage segmentation of battery cycling data"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Segment a cycling CSV into stages");
    std::string input, output_dir = ".";
    stagewise::SegmenterConfig cfg;
    std::uint64_t seed = 42;
    int restarts = 5;
    analyze->add_option("--input", input, "input CSV")->required();
    analyze->add_option("--output-dir", output_dir, "output directory");
    analyze->add_option("--window", cfg.window, "training cycles per stage");
    analyze->add_option("--alpha", cfg.alpha, "significance level");
    analyze->add_option("--variance", cfg.variance_target, "PCA cumulative variance target");
    analyze->add_option("--consecutive", cfg.consecutive_required,
                        "consecutive exceedances that declare a switch");
    analyze->add_option("--max-lag", cfg.max_lag, "AMI lag search bound");
    analyze->add_option("--max-r", cfg.max_r, "FNN dimension search bound");
    analyze->add_option("--seed", seed, "seed for optimizer restarts");
    analyze->add_option("--restarts", restarts, "random restarts per optimization");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate ground-truth synthetic data");
    stagewise::SynthSpec spec;
    std::uint64_t synth_seed = 1;
    std::string out_csv = "synthetic.csv", out_truth = "truth.json";
    bool uniform = false;
    synth->add_option("--cycles", spec.n_cycles, "number of cycles");
    synth->add_option("--samples", spec.samples_per_cycle, "samples per cycle");
    synth->add_option("--stationary", spec.d_true, "stationary source count");
    synth->add_option("--nonstationary", spec.n_nonstationary, "non-stationary source count");
    synth->add_option("--change", spec.change_cycles,
                      "last cycle(s) of each segment before a regime change");
    synth->add_option("--noise", spec.noise_sigma, "sensor noise sigma");
    synth->add_option("--phi", spec.ar_coeff, "AR(1) coefficient");
    synth->add_flag("--uniform", uniform, "uniform innovations instead of Gaussian");
    synth->add_option("--variance-schedule", spec.segment_variances,
                      "per-segment variance for non-stationary sources");
    synth->add_option("--mean-schedule", spec.segment_means,
                      "per-segment mean for non-stationary sources");
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--output", out_csv, "output CSV path");
    synth->add_option("--truth", out_truth, "ground-truth JSON path");

    // validate
    auto* validate = app.add_subcommand("validate", "Run the synthetic validation batteries");
    int seeds = 50;
    double angle_tol = 5.0;
    validate->add_option("--seeds", seeds, "seeds per battery");
    validate->add_option("--angle-tol", angle_tol, "recovery angle tolerance (degrees)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            cfg.ssa.seed = seed;
            cfg.ssa.n_restarts = restarts;
            return cmd_analyze(input, output_dir, cfg);
        }
        if (synth->parsed()) {
            spec.innovations =
                uniform ? stagewise::Innovations::kUniform : stagewise::Innovations::kGaussian;
            return cmd_synth(spec, synth_seed, out_csv, out_truth);
        }
        if (validate->parsed()) {
            if (seeds < 1) throw stagewise::UsageError("--seeds must be >= 1");
            return cmd_validate(seeds, angle_tol);
        }
    } catch (const stagewise::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
