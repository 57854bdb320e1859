#include "termfit/cli_app.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "termfit/local_search.hpp"
#include "termfit/metaheuristics.hpp"

namespace termfit {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOptimizerFailure = 1;
constexpr int kExitInputError = 2;

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_rate(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string format_tenor(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

void write_curve_csv(const std::string& path, const CurveParams& params,
                     const std::vector<double>& tenors) {
    std::string content = "tenor_years,spot_rate,forward_rate\n";
    for (double t : tenors) {
        content += format_tenor(t);
        content += ',';
        content += format_rate(spot_rate(params, t));
        content += ',';
        content += format_rate(forward_rate(params, t));
        content += '\n';
    }
    write_text_file(path, content);
}

OptimizerFn make_optimizer(const std::string& name, const FitConfig& config) {
    if (name == "ga") {
        return [cfg = config.ga](const ObjectiveProblem& p, RngStream& rng) {
            return ga_run(cfg, p, rng);
        };
    }
    if (name == "aco") {
        return [cfg = config.aco](const ObjectiveProblem& p, RngStream& rng) {
            return aco_run(cfg, p, rng);
        };
    }
    if (name == "pso") {
        return [cfg = config.pso](const ObjectiveProblem& p, RngStream& rng) {
            return pso_run(cfg, p, rng);
        };
    }
    if (name == "sa") {
        return [cfg = config.sa](const ObjectiveProblem& p, RngStream& rng) {
            return sa_run(cfg, p, rng);
        };
    }
    if (name == "bfgs") {
        return [cfg = config.bfgs](const ObjectiveProblem& p, RngStream& rng) {
            return constrained_minimize(p, sample_feasible(p.constraints, rng), cfg);
        };
    }
    throw std::runtime_error("unknown optimizer '" + name +
                             "' (expected ga, aco, pso, sa or bfgs)");
}

bool uses_min_statistic(const std::string& name) { return name == "bfgs"; }

}  // namespace

int cmd_fit(const FitRequest& request) {
    namespace fs = std::filesystem;

    FitConfig config;
    std::vector<OfferRecord> offers;
    std::vector<ClosedOperation> operations;
    IngestResult ingest;
    try {
        if (request.config_path) config = load_fit_config(*request.config_path);
        if (request.weight_cap) config.data.weight_cap = request.weight_cap;
        for (const auto& name : request.optimizers) {
            make_optimizer(name, config);  // fail fast on unknown names
        }
        if (request.n_starts < 1) throw std::runtime_error("--starts must be at least 1");

        std::vector<std::string> warnings;
        operations = parse_closed_operations(request.operations_path,
                                             request.valuation_date, &warnings);
        offers = parse_offers(request.offers_path);
        ingest = build_observations(dedupe_last(operations), offers,
                                    request.valuation_date, config.data);
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
        for (const auto& w : ingest.warnings) std::cerr << "warning: " << w << "\n";

        fs::create_directories(request.out_dir);
        write_text_file((fs::path(request.out_dir) / "exclusions.jsonl").string(),
                        exclusions_to_jsonl(ingest.exclusions));

        const std::size_t needed = model_dimension(request.model) + 1;
        if (ingest.observations.size() < needed) {
            throw std::runtime_error(
                "need at least " + std::to_string(needed) + " usable observations, have " +
                std::to_string(ingest.observations.size()) + " (see exclusions.jsonl)");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    ObjectiveSpec spec;
    spec.model = request.model;
    spec.observations = ingest.observations;
    const ObjectiveProblem problem = make_curve_problem(spec);

    struct Failure {
        std::string optimizer;
        std::string reason;
    };
    std::vector<MultistartReport> reports;
    std::vector<Failure> failures;
    for (const auto& name : request.optimizers) {
        try {
            MultistartReport report =
                multistart(name, make_optimizer(name, config), problem,
                           request.n_starts, request.master_seed, request.threads);
            write_text_file(
                (std::filesystem::path(request.out_dir) / ("report_" + name + ".json"))
                    .string(),
                report_to_json(report));
            reports.push_back(std::move(report));
        } catch (const std::exception& e) {
            std::cerr << "error: optimizer " << name << " failed: " << e.what() << "\n";
            failures.push_back({name, e.what()});
        }
    }

    {
        std::string content;
        for (const auto& f : failures) {
            content += "{\"optimizer\":\"" + f.optimizer + "\",\"reason\":\"" + f.reason +
                       "\"}\n";
        }
        write_text_file(
            (std::filesystem::path(request.out_dir) / "failures.jsonl").string(), content);
    }
    if (reports.empty()) {
        std::cerr << "error: every requested optimizer failed\n";
        return kExitOptimizerFailure;
    }

    // Comparison table, ordered by each method's comparison statistic: the
    // multistart mean for the stochastic searches, the minimum for the
    // deterministic barrier baseline.
    struct Row {
        std::string optimizer;
        std::string statistic;
        double objective;
        double cv;
        std::optional<double> goodness;
        double avg_seconds;
    };
    std::vector<Row> rows;
    for (const auto& report : reports) {
        Row row;
        row.optimizer = report.optimizer_name;
        row.statistic = uses_min_statistic(report.optimizer_name) ? "min" : "mean";
        row.objective = uses_min_statistic(report.optimizer_name) ? report.min_value
                                                                  : report.mean_value;
        row.cv = report.cv_percent;
        row.goodness = report.goodness_best;
        row.avg_seconds = report.total_seconds / static_cast<double>(report.n_starts);
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.objective != b.objective) return a.objective < b.objective;
        return a.optimizer < b.optimizer;
    });
    {
        std::string content =
            "optimizer,statistic,objective_value,coefficient_of_variation_percent,"
            "goodness_of_fit_percent,average_seconds\n";
        for (const auto& row : rows) {
            content += row.optimizer + ',' + row.statistic + ',' +
                       format_full(row.objective) + ',' + format_full(row.cv) + ',' +
                       (row.goodness ? format_full(*row.goodness) : std::string()) + ',' +
                       format_full(row.avg_seconds) + '\n';
        }
        write_text_file(
            (std::filesystem::path(request.out_dir) / "comparison.csv").string(), content);
    }

    const MultistartReport* best_report = &reports.front();
    for (const auto& report : reports) {
        if (report.best_run().best_value < best_report->best_run().best_value) {
            best_report = &report;
        }
    }
    const OptimizerRun& best = best_report->best_run();
    save_params_file(
        (std::filesystem::path(request.out_dir) / "best_params.json").string(),
        *best.best_params);
    {
        std::vector<double> tenors;
        for (int k = 1; k <= 400; ++k) tenors.push_back(0.05 * k);
        write_curve_csv(
            (std::filesystem::path(request.out_dir) / "curve_samples.csv").string(),
            *best.best_params, tenors);
    }

    for (const auto& row : rows) {
        std::cout << row.optimizer << ": " << row.statistic << "=" << row.objective
                  << " cv=" << row.cv << "%";
        if (row.goodness) std::cout << " fit=" << *row.goodness << "%";
        std::cout << " avg_time=" << row.avg_seconds << "s\n";
    }
    std::cout << "best: " << best_report->optimizer_name
              << " objective=" << best.best_value << " -> " << request.out_dir << "\n";

    return failures.empty() ? kExitOk : kExitOptimizerFailure;
}

int cmd_price(const std::string& params_path, const std::string& bonds_path,
              const Date& valuation_date, const std::string& out_path) {
    try {
        const CurveParams params = load_params_file(params_path);
        std::vector<std::string> warnings;
        const auto operations =
            parse_closed_operations(bonds_path, valuation_date, &warnings);
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

        std::string content = "instrument_id,dirty_price\n";
        for (const auto& op : operations) {
            BondSpec bond;
            bond.id = op.instrument_id;
            bond.issue_date = op.issue_date;
            bond.maturity_date = op.maturity_date;
            bond.next_coupon_date = op.next_coupon_date;
            bond.periodicity = op.periodicity;
            bond.coupon_rate = op.periodicity == 0 ? 0.0 : op.net_rate;
            bond.currency = op.currency;
            if (days_between(valuation_date, bond.maturity_date) <= 0) {
                std::cerr << "warning: skipping matured instrument " << bond.id << "\n";
                continue;
            }
            const auto schedule = build_schedule(bond, valuation_date);
            content += bond.id + ',' + format_rate(price(schedule, params)) + '\n';
        }
        write_text_file(out_path, content);
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

int cmd_curve(const std::string& params_path, const std::string& grid_spec,
              const std::string& out_path) {
    try {
        const CurveParams params = load_params_file(params_path);
        double start = 0.0, stop = 0.0, step = 0.0;
        char tail = '\0';
        if (std::sscanf(grid_spec.c_str(), "%lf:%lf:%lf%c", &start, &stop, &step, &tail) != 3 ||
            !(step > 0.0) || stop < start || start < 0.0) {
            throw std::runtime_error("invalid grid '" + grid_spec +
                                     "', expected start:stop:step with step > 0");
        }
        std::vector<double> tenors;
        const auto count = static_cast<long>((stop - start) / step + 1e-9);
        for (long k = 0; k <= count; ++k) {
            tenors.push_back(start + step * static_cast<double>(k));
        }
        write_curve_csv(out_path, params, tenors);
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Term-structure estimation from bond order books"};
    app.require_subcommand(1);

    FitRequest request;
    std::string model_name_arg = "ns";
    std::string valuation_arg;
    std::string config_arg;
    double weight_cap_arg = 0.0;
    auto* fit = app.add_subcommand("fit", "Fit a curve model with one or more optimizers");
    fit->add_option("--model", model_name_arg, "Curve model: ns or svensson")
        ->check(CLI::IsMember({"ns", "svensson"}));
    request.optimizers = {"ga", "aco", "pso", "sa", "bfgs"};
    fit->add_option("--optimizer", request.optimizers,
                    "Comma-separated subset of ga,aco,pso,sa,bfgs")
        ->delimiter(',');
    fit->add_option("--starts", request.n_starts, "Multistart size");
    fit->add_option("--seed", request.master_seed, "Master seed");
    fit->add_option("--valuation-date", valuation_arg, "Valuation date YYYY-MM-DD")
        ->required();
    fit->add_option("--operations", request.operations_path,
                    "Closed-operations CSV path")
        ->required();
    fit->add_option("--offers", request.offers_path, "Offers CSV path")->required();
    auto* config_opt = fit->add_option("--config", config_arg, "JSON config path");
    fit->add_option("--out", request.out_dir, "Output directory")->required();
    auto* cap_opt = fit->add_option("--weight-cap", weight_cap_arg,
                                    "Exclude observations whose weight share exceeds this");
    fit->add_option("--threads", request.threads, "Worker threads for the multistart");

    std::string price_params, price_bonds, price_valuation, price_out;
    auto* price_cmd = app.add_subcommand("price", "Price bonds off fitted parameters");
    price_cmd->add_option("--params", price_params, "Fitted parameter JSON")->required();
    price_cmd->add_option("--bonds", price_bonds, "Closed-operations CSV with the bonds")
        ->required();
    price_cmd->add_option("--valuation-date", price_valuation, "Valuation date YYYY-MM-DD")
        ->required();
    price_cmd->add_option("--out", price_out, "Output CSV path")->required();

    std::string curve_params, curve_grid = "0.05:20:0.05", curve_out;
    auto* curve_cmd = app.add_subcommand("curve", "Sample spot/forward rates on a grid");
    curve_cmd->add_option("--params", curve_params, "Fitted parameter JSON")->required();
    curve_cmd->add_option("--grid", curve_grid, "Tenor grid start:stop:step");
    curve_cmd->add_option("--out", curve_out, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (fit->parsed()) {
            request.model = model_from_name(model_name_arg);
            request.valuation_date = parse_date(valuation_arg);
            if (*config_opt) request.config_path = config_arg;
            if (*cap_opt) request.weight_cap = weight_cap_arg;
            return cmd_fit(request);
        }
        if (price_cmd->parsed()) {
            return cmd_price(price_params, price_bonds, parse_date(price_valuation),
                             price_out);
        }
        if (curve_cmd->parsed()) {
            return cmd_curve(curve_params, curve_grid, curve_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}

}  // namespace termfit
