#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ftdoa/error.hpp"
#include "ftdoa/experiment.hpp"

namespace ftdoa {

namespace {

using nlohmann::json;

const std::set<std::string> kTopKeys{
    "num_elements", "spacing",  "wavelength",     "doas_deg", "snr_db",  "failure_counts",
    "failure_model", "failure_constant", "trials", "seed", "pencil_window", "svt",
    "detect_epsilon", "force_completion", "threads"};
const std::set<std::string> kSvtKeys{"tau", "delta", "epsilon", "k_max"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw Error(ErrorKind::Parameter, "unknown config key '" + where + key + "'");
        }
    }
}

double snr_value(const json& v) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "+inf" || s == "infinity") {
            return kNoiseless;
        }
        throw Error(ErrorKind::Parameter, "snr_db entries must be numbers or \"inf\"");
    }
    return v.get<double>();
}

FailureModel failure_model(const std::string& tag, const json& root) {
    FailureModel model;
    if (tag == "stuck-at-zero") {
        model.kind = FailureKind::StuckAtZero;
    } else if (tag == "stuck-at-previous") {
        model.kind = FailureKind::StuckAtPrevious;
    } else if (tag == "stuck-at-constant") {
        model.kind = FailureKind::StuckAtConstant;
        if (root.contains("failure_constant")) {
            const auto c = root.at("failure_constant").get<std::vector<double>>();
            if (c.size() != 2) {
                throw Error(ErrorKind::Parameter, "failure_constant must be [re, im]");
            }
            model.constant = {c[0], c[1]};
        }
    } else {
        throw Error(ErrorKind::Parameter, "unknown failure_model '" + tag + "'");
    }
    return model;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::InvalidInput, std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw Error(ErrorKind::InvalidInput, "config must be a JSON object");
    }
    reject_unknown(root, kTopKeys, "");

    ExperimentConfig cfg;
    try {
        if (root.contains("num_elements")) cfg.array.num_elements = root.at("num_elements").get<std::size_t>();
        if (root.contains("spacing")) cfg.array.spacing = root.at("spacing").get<double>();
        if (root.contains("wavelength")) cfg.array.wavelength = root.at("wavelength").get<double>();
        if (root.contains("doas_deg")) cfg.doas_deg = root.at("doas_deg").get<std::vector<double>>();
        if (root.contains("snr_db")) {
            const json& v = root.at("snr_db");
            cfg.snr_db_list.clear();
            if (v.is_array()) {
                for (const json& item : v) cfg.snr_db_list.push_back(snr_value(item));
            } else {
                cfg.snr_db_list.push_back(snr_value(v));
            }
        }
        if (root.contains("failure_counts")) {
            cfg.failure_counts = root.at("failure_counts").get<std::vector<std::size_t>>();
        }
        if (root.contains("failure_model")) {
            cfg.failure_model = failure_model(root.at("failure_model").get<std::string>(), root);
        } else if (root.contains("failure_constant")) {
            throw Error(ErrorKind::Parameter, "failure_constant needs failure_model \"stuck-at-constant\"");
        }
        if (root.contains("trials")) cfg.trials = root.at("trials").get<std::size_t>();
        if (root.contains("seed")) cfg.seed = root.at("seed").get<std::uint64_t>();
        if (root.contains("pencil_window")) cfg.pencil_window = root.at("pencil_window").get<std::size_t>();
        if (root.contains("detect_epsilon")) cfg.detect_epsilon = root.at("detect_epsilon").get<double>();
        if (root.contains("force_completion")) cfg.force_completion = root.at("force_completion").get<bool>();
        if (root.contains("threads")) cfg.threads = root.at("threads").get<std::size_t>();
        if (root.contains("svt")) {
            const json& svt = root.at("svt");
            if (!svt.is_object()) {
                throw Error(ErrorKind::Parameter, "svt must be an object");
            }
            reject_unknown(svt, kSvtKeys, "svt.");
            if (svt.contains("tau")) cfg.svt.tau = svt.at("tau").get<double>();
            if (svt.contains("delta")) cfg.svt.delta = svt.at("delta").get<double>();
            if (svt.contains("epsilon")) cfg.svt.epsilon = svt.at("epsilon").get<double>();
            if (svt.contains("k_max")) cfg.svt.k_max = svt.at("k_max").get<int>();
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parameter, std::string("bad config value: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open config " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_experiment_config(text.str());
}

}  // namespace ftdoa
