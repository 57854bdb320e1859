#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "termfit/json_io.hpp"

namespace termfit {

/// Everything `termfit fit` needs, assembled from flags and config file.
struct FitRequest {
    ModelKind model = ModelKind::NelsonSiegel;
    std::vector<std::string> optimizers;  // subset of ga, aco, pso, sa, bfgs
    std::size_t n_starts = 1;
    std::uint64_t master_seed = 0;
    Date valuation_date{};
    std::string operations_path;
    std::string offers_path;
    std::optional<std::string> config_path;
    std::string out_dir;
    std::optional<double> weight_cap;  // overrides the config's value
    unsigned threads = 1;
};

/// Runs the full estimation pipeline and writes, under out_dir:
/// report_<optimizer>.json per optimizer, comparison.csv (rows ordered by
/// each optimizer's comparison statistic: multistart mean for the
/// metaheuristics, minimum for bfgs), best_params.json,
/// curve_samples.csv, and exclusions.jsonl. Returns the process exit code
/// (0 ok, 1 optimizer failure, 2 input error).
int cmd_fit(const FitRequest& request);

/// Prices the bonds of a closed-operations file off fitted parameters and
/// writes instrument_id,dirty_price rows; matured bonds are skipped with a
/// warning on stderr.
int cmd_price(const std::string& params_path, const std::string& bonds_path,
              const Date& valuation_date, const std::string& out_path);

/// Samples spot and forward rates over a tenor grid "start:stop:step".
int cmd_curve(const std::string& params_path, const std::string& grid_spec,
              const std::string& out_path);

/// Argument parsing + dispatch for the `termfit` binary.
int run_cli(int argc, const char* const* argv);

}  // namespace termfit
