#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "termfit/curve_models.hpp"
#include "termfit/objective.hpp"
#include "termfit/rng.hpp"

namespace termfit {

/// What every optimizer minimizes: a deterministic objective over a flat
/// parameter vector plus the feasible region. `gradient` may be empty for
/// optimizers that do not need it; `goodness` (percent) is reported when
/// available.
struct ObjectiveProblem {
    std::function<double(const std::vector<double>&)> evaluate;
    std::function<std::vector<double>(const std::vector<double>&)> gradient;
    std::function<double(const std::vector<double>&)> goodness;
    ConstraintSystem constraints;
    std::optional<ModelKind> model;

    std::size_t dimension() const { return constraints.dimension(); }
};

/// Binds the weighted least-squares criterion over `spec` (which the
/// returned problem keeps a copy of) to the model's constraint system.
ObjectiveProblem make_curve_problem(const ObjectiveSpec& spec);

/// Outcome of a single optimizer execution.
struct OptimizerRun {
    std::string optimizer_name;
    std::string config_summary;
    std::uint64_t seed = 0;
    std::vector<double> best_theta;
    std::optional<CurveParams> best_params;  // set when the problem has a model
    double best_value = std::numeric_limits<double>::infinity();
    std::size_t iterations_used = 0;
    std::vector<double> trace;  // best value per iteration, optional
    double wall_seconds = 0.0;
    bool failed = false;
    std::string failure_reason;
};

/// Aggregate of n independent seeded runs.
struct MultistartReport {
    std::string optimizer_name;
    std::uint64_t master_seed = 0;
    std::size_t n_starts = 0;
    std::vector<OptimizerRun> runs;  // indexed by run number
    double mean_value = 0.0;
    double min_value = 0.0;
    double cv_percent = 0.0;
    std::optional<double> goodness_best;
    double total_seconds = 0.0;
    std::size_t failure_count = 0;

    const OptimizerRun& best_run() const;
};

/// Uniform draw over the box, rejection-sampled until the linear
/// inequalities hold; always strictly feasible. Throws after 10,000
/// consecutive rejections (degenerate systems only).
std::vector<double> sample_feasible(const ConstraintSystem& cs, RngStream& rng);

/// 100 * sample standard deviation (n-1 denominator) / |mean|.
double coefficient_of_variation(const std::vector<double>& values);

using OptimizerFn =
    std::function<OptimizerRun(const ObjectiveProblem&, RngStream&)>;

/// Runs `optimizer` n_starts times, run i seeded with
/// split_seed(master_seed, i), and aggregates. Runs may execute on
/// `threads` workers; aggregation is by run index, so the report does not
/// depend on scheduling. A run that throws is recorded as failed and
/// excluded from the statistics; all runs failing is an error.
MultistartReport multistart(const std::string& optimizer_name,
                            const OptimizerFn& optimizer,
                            const ObjectiveProblem& problem,
                            std::size_t n_starts, std::uint64_t master_seed,
                            unsigned threads = 1);

}  // namespace termfit
