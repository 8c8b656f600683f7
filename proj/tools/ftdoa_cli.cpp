// ftdoa: command-line front end for simulation, detection, completion,
// estimation and Monte Carlo experiments on a uniform linear array.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ftdoa/ftdoa.hpp"

namespace {

using namespace ftdoa;

struct ArrayOpts {
    std::size_t elements = 100;
    double spacing = 0.5;
    double wavelength = 1.0;

    ArrayConfig config(std::size_t elements_override = 0) const {
        return ArrayConfig{elements_override ? elements_override : elements, spacing, wavelength};
    }
};

void add_geometry(CLI::App* cmd, ArrayOpts& opts, bool with_elements) {
    if (with_elements) {
        cmd->add_option("-M,--elements", opts.elements, "Number of array elements")->capture_default_str();
    }
    cmd->add_option("--spacing", opts.spacing, "Element spacing (same unit as wavelength)")
        ->capture_default_str();
    cmd->add_option("--wavelength", opts.wavelength, "Wavelength")->capture_default_str();
}

struct SvtOpts {
    std::optional<double> tau;
    std::optional<double> delta;
    double epsilon = 1e-2;
    int k_max = 50;

    SvtParams params() const { return SvtParams{tau, delta, epsilon, k_max}; }
};

void add_svt(CLI::App* cmd, SvtOpts& opts) {
    cmd->add_option("--tau", opts.tau, "SVT threshold (default 5*sqrt(n1*n2))");
    cmd->add_option("--delta", opts.delta, "SVT step size (default 1.2*n1*n2/|observed|)");
    cmd->add_option("--svt-epsilon", opts.epsilon, "SVT relative residual tolerance")->capture_default_str();
    cmd->add_option("--k-max", opts.k_max, "SVT iteration cap")->capture_default_str();
}

double parse_snr(const std::string& text) {
    if (text == "inf" || text == "+inf" || text == "infinity") {
        return kNoiseless;
    }
    try {
        return std::stod(text);
    } catch (const std::exception&) {
        throw Error(ErrorKind::Parameter, "bad SNR '" + text + "'");
    }
}

FailureModel parse_model(const std::string& tag, const std::vector<double>& constant) {
    FailureModel model;
    if (tag == "stuck-at-zero") {
        model.kind = FailureKind::StuckAtZero;
    } else if (tag == "stuck-at-previous") {
        model.kind = FailureKind::StuckAtPrevious;
    } else if (tag == "stuck-at-constant") {
        model.kind = FailureKind::StuckAtConstant;
        if (constant.size() == 2) {
            model.constant = {constant[0], constant[1]};
        }
    } else {
        throw Error(ErrorKind::Parameter, "unknown failure model '" + tag + "'");
    }
    return model;
}

std::vector<std::size_t> zero_based(const std::vector<std::size_t>& one_based, std::size_t m) {
    std::vector<std::size_t> out;
    for (std::size_t idx : one_based) {
        if (idx < 1 || idx > m) {
            throw Error(ErrorKind::Domain, "element index " + std::to_string(idx) + " outside 1.." +
                                               std::to_string(m));
        }
        out.push_back(idx - 1);
    }
    return out;
}

PencilParams pencil_for(std::size_t m, std::size_t sources, std::optional<std::size_t> window) {
    PencilParams p = PencilParams::defaults(m, sources);
    if (window) {
        p.window = *window;
    }
    return p;
}

void print_estimate(std::ostream& out, const DoaEstimate& est) {
    out << "source,angle_deg,pole_re,pole_im\n" << std::setprecision(17);
    for (std::size_t i = 0; i < est.angles_deg.size(); ++i) {
        out << i + 1 << ',' << est.angles_deg[i] << ',' << est.poles.poles[i].real() << ','
            << est.poles.poles[i].imag() << '\n';
    }
}

template <typename Fn>
int run_stage(const char* stage, Fn&& fn) {
    try {
        fn();
        return 0;
    } catch (const Error& e) {
        const Error tagged = e.with_stage(stage);
        std::cerr << "ftdoa: error " << tagged.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ftdoa: error [" << stage << "] " << e.what() << '\n';
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fault-tolerant direction-of-arrival estimation on a uniform linear array"};
    app.require_subcommand(1);

    // simulate
    ArrayOpts sim_array;
    std::vector<double> sim_doas{0, 5, 10, 15, 20, 30};
    std::string sim_snr = "24";
    std::uint64_t sim_seed = 1;
    std::vector<std::size_t> sim_failed;
    std::string sim_model = "stuck-at-zero";
    std::vector<double> sim_constant;
    std::string sim_out, sim_prev_out;
    auto* simulate = app.add_subcommand("simulate", "Write a simulated snapshot CSV");
    add_geometry(simulate, sim_array, true);
    simulate->add_option("--doas", sim_doas, "Source angles in degrees")->delimiter(',')->capture_default_str();
    simulate->add_option("--snr", sim_snr, "Per-element SNR in dB, or 'inf'")->capture_default_str();
    simulate->add_option("--seed", sim_seed, "Random seed")->capture_default_str();
    simulate->add_option("--failed", sim_failed, "1-based failed element indices")->delimiter(',');
    simulate->add_option("--model", sim_model, "stuck-at-zero | stuck-at-previous | stuck-at-constant")
        ->capture_default_str();
    simulate->add_option("--constant", sim_constant, "re,im for stuck-at-constant")->delimiter(',')->expected(2);
    simulate->add_option("-o,--output", sim_out, "Snapshot CSV at time t")->required();
    simulate->add_option("--previous", sim_prev_out, "Also write the fully working snapshot at t-1");

    // detect
    std::string det_prev, det_curr, det_out;
    double det_eps = kDefaultDetectEpsilon;
    auto* detect_cmd = app.add_subcommand("detect", "Print the 1-based working element indices");
    detect_cmd->add_option("previous", det_prev, "Snapshot CSV at t-1")->required();
    detect_cmd->add_option("current", det_curr, "Snapshot CSV at t")->required();
    detect_cmd->add_option("--epsilon", det_eps, "Detection threshold")->capture_default_str();
    detect_cmd->add_option("-o,--output", det_out, "Write the index list here instead of stdout");

    // complete
    std::string comp_in, comp_out, comp_trace;
    std::vector<std::size_t> comp_failed;
    std::optional<std::size_t> comp_window;
    SvtOpts comp_svt;
    auto* complete = app.add_subcommand("complete", "Recover failed elements of a snapshot");
    complete->add_option("snapshot", comp_in, "Snapshot CSV")->required();
    complete->add_option("--failed", comp_failed, "1-based failed element indices")->delimiter(',')->required();
    complete->add_option("-L,--window", comp_window, "Hankel window (default floor(M/3))");
    add_svt(complete, comp_svt);
    complete->add_option("--trace", comp_trace, "Write the per-iteration residual trace CSV");
    complete->add_option("-o,--output", comp_out, "Completed snapshot CSV")->required();

    // estimate
    ArrayOpts est_array;
    std::string est_in, est_prev, est_out;
    std::size_t est_sources = 0;
    std::optional<std::size_t> est_window;
    double est_eps = kDefaultDetectEpsilon;
    bool est_force = false;
    SvtOpts est_svt;
    auto* estimate = app.add_subcommand("estimate", "Estimate source angles from a snapshot CSV");
    estimate->add_option("snapshot", est_in, "Snapshot CSV")->required();
    estimate->add_option("-N,--sources", est_sources, "Number of sources")->required();
    estimate->add_option("-L,--window", est_window, "Pencil window (default floor(M/3))");
    add_geometry(estimate, est_array, false);
    estimate->add_option("--previous", est_prev,
                         "Snapshot CSV at t-1; enables failure detection and completion");
    estimate->add_option("--epsilon", est_eps, "Detection threshold")->capture_default_str();
    estimate->add_flag("--force-completion", est_force, "Run completion even with no detected failures");
    add_svt(estimate, est_svt);
    estimate->add_option("-o,--output", est_out, "Write the angle CSV here instead of stdout");

    // experiment
    std::string exp_config, exp_dir = "report";
    std::optional<std::size_t> exp_threads;
    auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo sweep from a JSON config");
    experiment->add_option("config", exp_config, "Experiment config (JSON)")->required();
    experiment->add_option("-o,--out-dir", exp_dir, "Report directory")->capture_default_str();
    experiment->add_option("--threads", exp_threads, "Override worker thread count");

    CLI11_PARSE(app, argc, argv);

    if (*simulate) {
        return run_stage("simulate", [&] {
            const ArrayConfig cfg = sim_array.config();
            const double snr = parse_snr(sim_snr);
            const SourceSet prev_src = gen_sources(sim_doas.size(), trial_seed(sim_seed, 0, 0), sim_doas);
            const SourceSet curr_src = gen_sources(sim_doas.size(), trial_seed(sim_seed, 0, 1), sim_doas);
            const Snapshot prev = snapshot(cfg, prev_src, snr, trial_seed(sim_seed, 0, 2), -1);
            Snapshot curr = snapshot(cfg, curr_src, snr, trial_seed(sim_seed, 0, 3), 0);
            FailureSpec spec{zero_based(sim_failed, cfg.num_elements), parse_model(sim_model, sim_constant)};
            curr = inject_failures(curr, prev, spec);
            write_snapshot_csv(sim_out, curr);
            if (!sim_prev_out.empty()) {
                write_snapshot_csv(sim_prev_out, prev);
            }
        });
    }
    if (*detect_cmd) {
        return run_stage("detect", [&] {
            const LocationSet loc = detect(read_snapshot_csv(det_prev), read_snapshot_csv(det_curr), det_eps);
            if (det_out.empty()) {
                std::cout << loc.to_csv_line() << '\n';
            } else {
                std::ofstream out(det_out);
                if (!(out << loc.to_csv_line() << '\n')) {
                    throw Error(ErrorKind::Io, "cannot write " + det_out);
                }
            }
        });
    }
    if (*complete) {
        return run_stage("complete", [&] {
            const Snapshot x = read_snapshot_csv(comp_in);
            const LocationSet loc = LocationSet::without(x.size(), zero_based(comp_failed, x.size()));
            const std::size_t window = comp_window.value_or(PencilParams::defaults(x.size(), 1).window);
            SvtResult diag;
            const Snapshot done = complete_snapshot(x, loc, window, comp_svt.params(), &diag);
            write_snapshot_csv(comp_out, done);
            if (!comp_trace.empty()) {
                write_svt_trace(comp_trace, diag);
            }
            std::cerr << "svt: " << diag.iterations << " iterations, residual " << diag.final_residual
                      << (diag.converged ? " (converged)" : " (iteration cap reached)") << '\n';
        });
    }
    if (*estimate) {
        return run_stage("estimate", [&] {
            const Snapshot x = read_snapshot_csv(est_in);
            const ArrayConfig cfg = est_array.config(x.size());
            const PencilParams pencil = pencil_for(x.size(), est_sources, est_window);
            DoaEstimate est;
            if (est_prev.empty()) {
                est = tls_mp(x, pencil, cfg);
            } else {
                FaultTolerantOptions options{est_svt.params(), est_eps, est_force};
                est = fault_tolerant_estimate(read_snapshot_csv(est_prev), x, pencil, cfg, options);
                std::cerr << "failed elements detected: " << est.failed_elements.size() << '\n';
            }
            if (est_out.empty()) {
                print_estimate(std::cout, est);
            } else {
                std::ofstream out(est_out);
                print_estimate(out, est);
                if (!out) {
                    throw Error(ErrorKind::Io, "cannot write " + est_out);
                }
            }
        });
    }
    if (*experiment) {
        return run_stage("experiment", [&] {
            ExperimentConfig cfg = load_experiment_config(exp_config);
            if (exp_threads) {
                cfg.threads = *exp_threads;
            }
            const std::vector<TrialRecord> records = run_experiment(cfg);
            const ReportPaths paths = emit_report(records, exp_dir, cfg.array.num_elements);
            for (const AggregateRow& row : aggregate(records, cfg.array.num_elements)) {
                std::cout << "snr_db=" << row.snr_db << " working=" << row.working
                          << " mean_rmse_deg=" << row.mean_rmse << " baseline_rmse_deg=" << row.mean_baseline_rmse
                          << " failed_trials=" << row.failed_trials << '\n';
            }
            std::cout << "wrote " << paths.trials.string() << ", " << paths.aggregate.string() << ", "
                      << paths.rmse_vs_snr.string() << ", " << paths.rmse_vs_working.string() << '\n';
        });
    }
    return EXIT_SUCCESS;
}
