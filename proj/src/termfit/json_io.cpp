#include "termfit/json_io.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace termfit {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

/// Applies `handler(key, value)` to every member of block `name`, erroring
/// on keys the handler does not recognize.
void apply_block(const json& root, const std::string& name,
                 const std::function<bool(const std::string&, const json&)>& handler) {
    if (!root.contains(name)) return;
    const json& block = root.at(name);
    if (!block.is_object()) {
        throw std::runtime_error("config block '" + name + "' must be an object");
    }
    for (const auto& [key, value] : block.items()) {
        if (!handler(key, value)) {
            throw std::runtime_error("config block '" + name + "': unknown key '" + key + "'");
        }
    }
}

}  // namespace

FitConfig load_fit_config(const std::string& path) {
    FitConfig config;
    const json root = read_json_file(path);
    if (!root.is_object()) throw std::runtime_error(path + ": config must be a JSON object");
    for (const auto& [key, value] : root.items()) {
        (void)value;
        if (key != "ga" && key != "aco" && key != "pso" && key != "sa" &&
            key != "bfgs" && key != "data") {
            throw std::runtime_error(path + ": unknown config block '" + key + "'");
        }
    }

    apply_block(root, "ga", [&](const std::string& key, const json& v) {
        if (key == "population") config.ga.population = v.get<std::size_t>();
        else if (key == "elite_fraction") config.ga.elite_fraction = v.get<double>();
        else if (key == "mutation_rate") config.ga.mutation_rate = v.get<double>();
        else if (key == "fitness_sd_stop") config.ga.fitness_sd_stop = v.get<double>();
        else if (key == "max_iterations") config.ga.max_iterations = v.get<std::size_t>();
        else return false;
        return true;
    });
    apply_block(root, "aco", [&](const std::string& key, const json& v) {
        if (key == "ants") config.aco.ants = v.get<std::size_t>();
        else if (key == "archive") config.aco.archive = v.get<std::size_t>();
        else if (key == "xi") config.aco.xi = v.get<double>();
        else if (key == "nu") config.aco.nu = v.get<double>();
        else if (key == "max_iterations") config.aco.max_iterations = v.get<std::size_t>();
        else return false;
        return true;
    });
    apply_block(root, "pso", [&](const std::string& key, const json& v) {
        if (key == "swarm") config.pso.swarm = v.get<std::size_t>();
        else if (key == "inertia") config.pso.inertia = v.get<double>();
        else if (key == "use_inertia_schedule") config.pso.use_inertia_schedule = v.get<bool>();
        else if (key == "w_max") config.pso.w_max = v.get<double>();
        else if (key == "w_min") config.pso.w_min = v.get<double>();
        else if (key == "cognitive") config.pso.cognitive = v.get<double>();
        else if (key == "social") config.pso.social = v.get<double>();
        else if (key == "swap_cognitive_social") config.pso.swap_cognitive_social = v.get<bool>();
        else if (key == "vmax_fraction") config.pso.vmax_fraction = v.get<double>();
        else if (key == "max_iterations") config.pso.max_iterations = v.get<std::size_t>();
        else if (key == "stall_iterations") config.pso.stall_iterations = v.get<std::size_t>();
        else return false;
        return true;
    });
    apply_block(root, "sa", [&](const std::string& key, const json& v) {
        if (key == "chain_length") config.sa.chain_length = v.get<std::size_t>();
        else if (key == "cooling") config.sa.cooling = v.get<double>();
        else if (key == "initial_acceptance") config.sa.initial_acceptance = v.get<double>();
        else if (key == "blank_iterations") config.sa.blank_iterations = v.get<std::size_t>();
        else if (key == "max_iterations") config.sa.max_iterations = v.get<std::size_t>();
        else if (key == "t_min") config.sa.t_min = v.get<double>();
        else return false;
        return true;
    });
    apply_block(root, "bfgs", [&](const std::string& key, const json& v) {
        if (key == "mu0") config.bfgs.mu0 = v.get<double>();
        else if (key == "mu_factor") config.bfgs.mu_factor = v.get<double>();
        else if (key == "stages") config.bfgs.stages = v.get<std::size_t>();
        else if (key == "stage_move_tol") config.bfgs.stage_move_tol = v.get<double>();
        else if (key == "tol") config.bfgs.inner.gradient_tol = v.get<double>();
        else if (key == "max_iters") config.bfgs.inner.max_iterations = v.get<std::size_t>();
        else return false;
        return true;
    });
    apply_block(root, "data", [&](const std::string& key, const json& v) {
        if (key == "face") config.data.face = v.get<double>();
        else if (key == "quote_basis") config.data.quote_basis = v.get<double>();
        else if (key == "day_basis") config.data.day_basis = v.get<double>();
        else if (key == "weight_cap") config.data.weight_cap = v.get<double>();
        else return false;
        return true;
    });
    return config;
}

namespace {

json params_to_json_object(const CurveParams& params) {
    json j;
    j["model"] = model_name(params.kind);
    j["beta0"] = params.beta0;
    j["beta1"] = params.beta1;
    j["beta2"] = params.beta2;
    j["lambda1"] = params.lambda1;
    if (params.kind == ModelKind::Svensson) {
        j["beta3"] = params.beta3.value_or(0.0);
        j["lambda2"] = params.lambda2.value_or(0.0);
    }
    return j;
}

}  // namespace

std::string params_to_json(const CurveParams& params) {
    return params_to_json_object(params).dump(2) + "\n";
}

CurveParams params_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("invalid parameter JSON: ") + e.what());
    }
    CurveParams params;
    params.kind = model_from_name(j.at("model").get<std::string>());
    params.beta0 = j.at("beta0").get<double>();
    params.beta1 = j.at("beta1").get<double>();
    params.beta2 = j.at("beta2").get<double>();
    params.lambda1 = j.at("lambda1").get<double>();
    if (params.kind == ModelKind::Svensson) {
        params.beta3 = j.at("beta3").get<double>();
        params.lambda2 = j.at("lambda2").get<double>();
    }
    return params;
}

CurveParams load_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return params_from_json_text(text.str());
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void save_params_file(const std::string& path, const CurveParams& params) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << params_to_json(params);
}

std::string report_to_json(const MultistartReport& report) {
    json j;
    j["optimizer"] = report.optimizer_name;
    j["master_seed"] = report.master_seed;
    j["n_starts"] = report.n_starts;
    j["mean_objective"] = report.mean_value;
    j["min_objective"] = report.min_value;
    j["coefficient_of_variation_percent"] = report.cv_percent;
    if (report.goodness_best) j["goodness_of_fit_percent"] = *report.goodness_best;
    j["failures"] = report.failure_count;
    j["total_seconds"] = report.total_seconds;
    if (!report.runs.empty()) j["config"] = report.runs.front().config_summary;
    json runs = json::array();
    for (std::size_t i = 0; i < report.runs.size(); ++i) {
        const OptimizerRun& run = report.runs[i];
        json r;
        r["index"] = i;
        r["seed"] = run.seed;
        if (run.failed) {
            r["failed"] = true;
            r["reason"] = run.failure_reason;
        } else {
            r["objective"] = run.best_value;
            r["iterations"] = run.iterations_used;
            r["theta"] = run.best_theta;
            if (run.best_params) r["params"] = params_to_json_object(*run.best_params);
        }
        r["wall_seconds"] = run.wall_seconds;
        runs.push_back(std::move(r));
    }
    j["runs"] = std::move(runs);
    return j.dump(2) + "\n";
}

std::string exclusions_to_jsonl(const std::vector<Exclusion>& exclusions) {
    std::string out;
    for (const auto& e : exclusions) {
        json j;
        j["instrument_id"] = e.instrument_id;
        j["reason"] = e.reason;
        out += j.dump();
        out += "\n";
    }
    return out;
}

}  // namespace termfit
