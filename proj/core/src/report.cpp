#include <fstream>
#include <iomanip>
#include <sstream>

#include "ftdoa/error.hpp"
#include "ftdoa/experiment.hpp"

namespace ftdoa {

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    }
    out << std::setprecision(17);
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw Error(ErrorKind::Io, "write failed for " + path.string());
    }
}

std::string quoted(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

std::string joined(const std::vector<double>& values) {
    std::ostringstream out;
    out << std::setprecision(17);
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << (i ? ";" : "") << values[i];
    }
    return out.str();
}

}  // namespace

ReportPaths emit_report(std::span<const TrialRecord> records, const std::filesystem::path& dir,
                        std::size_t num_elements) {
    if (records.empty()) {
        throw Error(ErrorKind::Parameter, "no trial records to report");
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
    }

    ReportPaths paths{dir / "trials.csv", dir / "aggregate.csv", dir / "plot_rmse_vs_snr.csv",
                      dir / "plot_rmse_vs_working.csv"};

    {
        auto out = open_csv(paths.trials);
        out << "snr_db,n_failed,trial,ok,rmse_deg,baseline_rmse_deg,detection_exact,detected_failed,"
               "svt_iterations,svt_residual,detect_time_s,complete_time_s,estimate_time_s,wall_time_s,"
               "estimates_deg,error\n";
        for (const TrialRecord& r : records) {
            out << r.snr_db << ',' << r.n_failed << ',' << r.trial << ',' << (r.ok ? 1 : 0) << ','
                << r.rmse_deg << ',' << r.baseline_rmse_deg << ',' << (r.detection_exact ? 1 : 0) << ','
                << r.detected_failed << ',' << r.svt_iterations << ',' << r.svt_residual << ','
                << r.detect_time_s << ',' << r.complete_time_s << ',' << r.estimate_time_s << ','
                << r.wall_time_s << ',' << joined(r.per_angle_est) << ',' << quoted(r.error) << '\n';
        }
        finish(out, paths.trials);
    }

    const std::vector<AggregateRow> rows = aggregate(records, num_elements);
    {
        auto out = open_csv(paths.aggregate);
        out << "snr_db,n_failed,working,trials,failed_trials,mean_rmse_deg,std_rmse_deg,"
               "mean_baseline_rmse_deg,detection_exact_rate,mean_svt_iterations,mean_wall_time_s\n";
        for (const AggregateRow& r : rows) {
            out << r.snr_db << ',' << r.n_failed << ',' << r.working << ',' << r.trials << ','
                << r.failed_trials << ',' << r.mean_rmse << ',' << r.std_rmse << ',' << r.mean_baseline_rmse
                << ',' << r.detection_exact_rate << ',' << r.mean_svt_iterations << ',' << r.mean_wall_time_s
                << '\n';
        }
        finish(out, paths.aggregate);
    }
    {
        // RMSE against SNR, one curve per failure count, with the
        // full-array baseline alongside.
        auto out = open_csv(paths.rmse_vs_snr);
        out << "snr_db,n_failed,mean_rmse_deg,mean_baseline_rmse_deg\n";
        for (const AggregateRow& r : rows) {
            out << r.snr_db << ',' << r.n_failed << ',' << r.mean_rmse << ',' << r.mean_baseline_rmse << '\n';
        }
        finish(out, paths.rmse_vs_snr);
    }
    {
        auto out = open_csv(paths.rmse_vs_working);
        out << "snr_db,working_elements,mean_rmse_deg\n";
        for (const AggregateRow& r : rows) {
            out << r.snr_db << ',' << r.working << ',' << r.mean_rmse << '\n';
        }
        finish(out, paths.rmse_vs_working);
    }
    return paths;
}

}  // namespace ftdoa
