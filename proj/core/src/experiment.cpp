#include "ftdoa/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include "ftdoa/error.hpp"
#include "ftdoa/pencil.hpp"

namespace ftdoa {

namespace {

// Independent random streams of one trial.
enum Stream : std::uint64_t {
    kPrevSources = 0,
    kCurrSources = 1,
    kPrevNoise = 2,
    kCurrNoise = 3,
    kFailurePlacement = 4,
};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Job {
    std::size_t snr_index;
    std::size_t failure_index;
    std::size_t trial;
};

TrialRecord run_trial(const ExperimentConfig& cfg, const PencilParams& pencil, double snr_db,
                      std::size_t n_failed, std::size_t trial) {
    TrialRecord rec;
    rec.trial = trial;
    rec.snr_db = snr_db;
    rec.n_failed = n_failed;
    rec.rmse_deg = std::numeric_limits<double>::quiet_NaN();
    rec.baseline_rmse_deg = std::numeric_limits<double>::quiet_NaN();

    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = cfg.doas_deg.size();
    const SourceSet prev_src = gen_sources(n, trial_seed(cfg.seed, trial, kPrevSources), cfg.doas_deg);
    const SourceSet curr_src = gen_sources(n, trial_seed(cfg.seed, trial, kCurrSources), cfg.doas_deg);
    const Snapshot prev = snapshot(cfg.array, prev_src, snr_db, trial_seed(cfg.seed, trial, kPrevNoise), -1);
    const Snapshot clean = snapshot(cfg.array, curr_src, snr_db, trial_seed(cfg.seed, trial, kCurrNoise), 0);

    FailureSpec spec;
    spec.model = cfg.failure_model;
    // Same stream for every failure count: smaller failure sets nest inside
    // larger ones within a trial.
    spec.failed_indices = random_failure_indices(cfg.array.num_elements, n_failed,
                                                 trial_seed(cfg.seed, trial, kFailurePlacement));
    const Snapshot curr = inject_failures(clean, prev, spec);

    try {
        rec.baseline_rmse_deg = rmse(cfg.doas_deg, tls_mp(clean, pencil, cfg.array).angles_deg);
    } catch (const Error&) {
        // Baseline failures leave NaN; the main estimate decides `ok`.
    }

    try {
        FaultTolerantOptions options;
        options.svt = cfg.svt;
        options.detect_epsilon = cfg.detect_epsilon;
        options.force_completion = cfg.force_completion;
        const DoaEstimate est = fault_tolerant_estimate(prev, curr, pencil, cfg.array, options);
        rec.per_angle_est = est.angles_deg;
        rec.rmse_deg = rmse(cfg.doas_deg, est.angles_deg);
        rec.detection_exact = est.failed_elements == spec.failed_indices;
        rec.detected_failed = est.failed_elements.size();
        if (est.completion) {
            rec.svt_iterations = est.completion->iterations;
            rec.svt_residual = est.completion->final_residual;
        }
        rec.detect_time_s = est.timings.detect_s;
        rec.complete_time_s = est.timings.complete_s;
        rec.estimate_time_s = est.timings.estimate_s;
        rec.ok = true;
    } catch (const Error& e) {
        rec.error = e.what();
    }
    rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

}  // namespace

void ExperimentConfig::validate() const {
    array.validate();
    if (doas_deg.empty()) {
        throw Error(ErrorKind::Parameter, "experiment needs at least one source angle");
    }
    std::set<double> distinct(doas_deg.begin(), doas_deg.end());
    if (distinct.size() != doas_deg.size()) {
        throw Error(ErrorKind::Parameter, "source angles must be distinct");
    }
    for (double deg : doas_deg) {
        if (!(deg > -90.0 && deg < 90.0)) {
            throw Error(ErrorKind::Domain, "source angles must lie in (-90, 90) degrees");
        }
    }
    if (snr_db_list.empty() || failure_counts.empty()) {
        throw Error(ErrorKind::Parameter, "SNR and failure-count sweeps must be nonempty");
    }
    for (double snr : snr_db_list) {
        if (std::isnan(snr) || snr == -std::numeric_limits<double>::infinity()) {
            throw Error(ErrorKind::Parameter, "SNR values must be finite or +inf");
        }
    }
    for (std::size_t k : failure_counts) {
        if (k >= array.num_elements) {
            throw Error(ErrorKind::Parameter, "failure count must leave at least one working element");
        }
    }
    if (trials < 1) {
        throw Error(ErrorKind::Parameter, "trials must be at least 1");
    }
    if (!(detect_epsilon > 0.0)) {
        throw Error(ErrorKind::Parameter, "detection threshold must be positive");
    }
    svt.validate();
    pencil().validate(array.num_elements);
}

PencilParams ExperimentConfig::pencil() const {
    PencilParams p = PencilParams::defaults(array.num_elements, doas_deg.size());
    if (pencil_window) {
        p.window = *pencil_window;
    }
    return p;
}

double rmse(std::vector<double> truth_deg, std::vector<double> est_deg) {
    if (truth_deg.size() != est_deg.size()) {
        throw Error(ErrorKind::Pairing, "truth and estimate lists differ in length");
    }
    if (truth_deg.empty()) {
        throw Error(ErrorKind::Pairing, "cannot score an empty estimate");
    }
    std::sort(truth_deg.begin(), truth_deg.end());
    std::sort(est_deg.begin(), est_deg.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < truth_deg.size(); ++i) {
        const double d = truth_deg[i] - est_deg[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(truth_deg.size()));
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial, std::uint64_t stream) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ static_cast<std::uint64_t>(trial));
    return splitmix64(h ^ (stream * 0xd1342543de82ef95ULL));
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const PencilParams pencil = cfg.pencil();

    std::vector<Job> jobs;
    for (std::size_t s = 0; s < cfg.snr_db_list.size(); ++s) {
        for (std::size_t f = 0; f < cfg.failure_counts.size(); ++f) {
            for (std::size_t t = 0; t < cfg.trials; ++t) {
                jobs.push_back({s, f, t});
            }
        }
    }

    std::vector<TrialRecord> records(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            const Job& job = jobs[i];
            records[i] = run_trial(cfg, pencil, cfg.snr_db_list[job.snr_index],
                                   cfg.failure_counts[job.failure_index], job.trial);
        }
    };

    std::size_t threads = cfg.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : cfg.threads;
    threads = std::min(threads, jobs.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
    }
    return records;
}

std::vector<AggregateRow> aggregate(std::span<const TrialRecord> records, std::size_t num_elements) {
    std::vector<AggregateRow> rows;
    std::vector<std::vector<const TrialRecord*>> groups;
    for (const TrialRecord& rec : records) {
        auto it = std::find_if(rows.begin(), rows.end(), [&](const AggregateRow& r) {
            return r.snr_db == rec.snr_db && r.n_failed == rec.n_failed;
        });
        if (it == rows.end()) {
            AggregateRow row;
            row.snr_db = rec.snr_db;
            row.n_failed = rec.n_failed;
            row.working = num_elements >= rec.n_failed ? num_elements - rec.n_failed : 0;
            rows.push_back(row);
            groups.emplace_back();
            it = rows.end() - 1;
        }
        groups[static_cast<std::size_t>(it - rows.begin())].push_back(&rec);
    }

    for (std::size_t g = 0; g < rows.size(); ++g) {
        AggregateRow& row = rows[g];
        const auto& members = groups[g];
        row.trials = members.size();
        double sum = 0.0, sum_baseline = 0.0, sum_iters = 0.0, sum_time = 0.0;
        std::size_t exact = 0, ok = 0, baseline_ok = 0;
        for (const TrialRecord* rec : members) {
            sum_time += rec->wall_time_s;
            if (!std::isnan(rec->baseline_rmse_deg)) {
                sum_baseline += rec->baseline_rmse_deg;
                ++baseline_ok;
            }
            if (!rec->ok) {
                continue;
            }
            ++ok;
            sum += rec->rmse_deg;
            sum_iters += rec->svt_iterations;
            exact += rec->detection_exact ? 1 : 0;
        }
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.failed_trials = row.trials - ok;
        row.mean_rmse = ok > 0 ? sum / static_cast<double>(ok) : nan;
        row.mean_baseline_rmse = baseline_ok > 0 ? sum_baseline / static_cast<double>(baseline_ok) : nan;
        row.mean_svt_iterations = ok > 0 ? sum_iters / static_cast<double>(ok) : nan;
        row.detection_exact_rate = ok > 0 ? static_cast<double>(exact) / static_cast<double>(ok) : nan;
        row.mean_wall_time_s = sum_time / static_cast<double>(row.trials);
        double ss = 0.0;
        for (const TrialRecord* rec : members) {
            if (rec->ok) {
                ss += (rec->rmse_deg - row.mean_rmse) * (rec->rmse_deg - row.mean_rmse);
            }
        }
        row.std_rmse = ok > 1 ? std::sqrt(ss / static_cast<double>(ok - 1)) : (ok == 1 ? 0.0 : nan);
    }
    return rows;
}

}  // namespace ftdoa
