#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ftdoa/array_sim.hpp"
#include "ftdoa/hankel.hpp"
#include "ftdoa/svt.hpp"

namespace ftdoa {

/// Monte Carlo scenario sweep. Defaults reproduce the reference setup: a
/// 100-element half-wavelength array, six unit sources at
/// {0, 5, 10, 15, 20, 30} degrees, 24 dB SNR, 5 failed elements, 20 trials.
struct ExperimentConfig {
    ArrayConfig array;
    std::vector<double> doas_deg{0.0, 5.0, 10.0, 15.0, 20.0, 30.0};
    std::vector<double> snr_db_list{24.0};
    std::vector<std::size_t> failure_counts{5};
    FailureModel failure_model;
    std::size_t trials = 20;
    std::uint64_t seed = 1;
    // Unset window means floor(M/3) clamped into the valid range.
    std::optional<std::size_t> pencil_window;
    SvtParams svt;
    double detect_epsilon = 1e-2;
    bool force_completion = false;
    // Worker threads for trials; 0 picks the hardware concurrency.
    std::size_t threads = 1;

    void validate() const;
    PencilParams pencil() const;
};

struct TrialRecord {
    std::size_t trial = 0;
    double snr_db = 0.0;
    std::size_t n_failed = 0;
    bool ok = false;
    std::string error;         // stage-tagged message when !ok
    double rmse_deg = 0.0;     // NaN when !ok
    std::vector<double> per_angle_est;
    // Plain TLS-MP on the same snapshot before failures were injected.
    double baseline_rmse_deg = 0.0;
    bool detection_exact = false;
    std::size_t detected_failed = 0;
    int svt_iterations = 0;
    double svt_residual = 0.0;
    double detect_time_s = 0.0;
    double complete_time_s = 0.0;
    double estimate_time_s = 0.0;
    double wall_time_s = 0.0;
};

/// RMSE in degrees after sorting both lists and pairing by rank.
double rmse(std::vector<double> truth_deg, std::vector<double> est_deg);

/// Seed for one random stream of one trial. Every (master, trial, stream)
/// triple maps through SplitMix64 to an independent 64-bit seed; SNR points
/// and failure counts share the streams so sweeps are matched.
std::uint64_t trial_seed(std::uint64_t master, std::size_t trial, std::uint64_t stream);

/// One record per (snr, n_failed, trial), ordered by SNR index, failure-count
/// index, then trial. Estimator errors become records with ok = false.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg);

struct AggregateRow {
    double snr_db = 0.0;
    std::size_t n_failed = 0;
    std::size_t working = 0;
    std::size_t trials = 0;
    std::size_t failed_trials = 0;
    double mean_rmse = 0.0;
    double std_rmse = 0.0;
    double mean_baseline_rmse = 0.0;
    double detection_exact_rate = 0.0;
    double mean_svt_iterations = 0.0;
    double mean_wall_time_s = 0.0;
};

/// Groups records by (snr_db, n_failed) in first-seen order. Means and the
/// sample standard deviation skip failed trials.
std::vector<AggregateRow> aggregate(std::span<const TrialRecord> records, std::size_t num_elements);

struct ReportPaths {
    std::filesystem::path trials;
    std::filesystem::path aggregate;
    std::filesystem::path rmse_vs_snr;
    std::filesystem::path rmse_vs_working;
};

/// Writes trials.csv, aggregate.csv, plot_rmse_vs_snr.csv and
/// plot_rmse_vs_working.csv into `dir`, creating it if needed.
ReportPaths emit_report(std::span<const TrialRecord> records, const std::filesystem::path& dir,
                        std::size_t num_elements);

/// Reads an experiment config from a JSON document; unknown keys are errors.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(const std::string& json_text);

}  // namespace ftdoa
