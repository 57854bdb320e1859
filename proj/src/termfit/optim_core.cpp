#include "termfit/optim_core.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <thread>

namespace termfit {

ObjectiveProblem make_curve_problem(const ObjectiveSpec& spec) {
    auto shared = std::make_shared<ObjectiveSpec>(spec);
    ObjectiveProblem problem;
    problem.model = shared->model;
    problem.constraints = constraint_system(shared->model);
    const ModelKind kind = shared->model;
    problem.evaluate = [shared, kind](const std::vector<double>& theta) {
        return weighted_sse(CurveParams::from_vector(kind, theta), *shared);
    };
    problem.gradient = [shared, kind](const std::vector<double>& theta) {
        return weighted_sse_gradient(CurveParams::from_vector(kind, theta), *shared);
    };
    problem.goodness = [shared, kind](const std::vector<double>& theta) {
        return goodness_of_fit(CurveParams::from_vector(kind, theta), *shared);
    };
    return problem;
}

const OptimizerRun& MultistartReport::best_run() const {
    const OptimizerRun* best = nullptr;
    for (const auto& run : runs) {
        if (run.failed) continue;
        if (!best || run.best_value < best->best_value) best = &run;
    }
    if (!best) throw std::logic_error("multistart report has no successful run");
    return *best;
}

std::vector<double> sample_feasible(const ConstraintSystem& cs, RngStream& rng) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<double> theta(cs.dimension());
        for (std::size_t i = 0; i < theta.size(); ++i) {
            theta[i] = rng.uniform_in(cs.bounds[i].lo, cs.bounds[i].hi);
        }
        bool ok = true;
        for (std::size_t i = 0; i < theta.size() && ok; ++i) {
            ok = theta[i] > cs.bounds[i].lo && theta[i] < cs.bounds[i].hi;
        }
        for (const auto& li : cs.linear) {
            if (!ok) break;
            ok = li.slack(theta) > 0.0;
        }
        if (ok) return theta;
    }
    throw std::runtime_error("could not sample a feasible point in 10000 attempts");
}

double coefficient_of_variation(const std::vector<double>& values) {
    if (values.empty()) {
        throw std::invalid_argument("coefficient of variation of an empty sample");
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    if (mean == 0.0) {
        throw std::domain_error("coefficient of variation is undefined for zero mean");
    }
    if (values.size() == 1) return 0.0;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return 100.0 * sd / std::abs(mean);
}

MultistartReport multistart(const std::string& optimizer_name,
                            const OptimizerFn& optimizer,
                            const ObjectiveProblem& problem,
                            std::size_t n_starts, std::uint64_t master_seed,
                            unsigned threads) {
    if (n_starts == 0) throw std::invalid_argument("multistart needs n_starts >= 1");
    const auto t0 = std::chrono::steady_clock::now();

    MultistartReport report;
    report.optimizer_name = optimizer_name;
    report.master_seed = master_seed;
    report.n_starts = n_starts;
    report.runs.resize(n_starts);

    auto execute = [&](std::size_t i) {
        const std::uint64_t seed = split_seed(master_seed, i);
        RngStream rng(seed);
        const auto run_start = std::chrono::steady_clock::now();
        try {
            report.runs[i] = optimizer(problem, rng);
        } catch (const std::exception& e) {
            report.runs[i].failed = true;
            report.runs[i].failure_reason = e.what();
        }
        report.runs[i].optimizer_name = optimizer_name;
        report.runs[i].seed = seed;
        report.runs[i].wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - run_start)
                .count();
    };

    if (threads <= 1 || n_starts == 1) {
        for (std::size_t i = 0; i < n_starts; ++i) execute(i);
    } else {
        const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(n_starts));
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < n_starts; i += workers) execute(i);
            });
        }
        for (auto& t : pool) t.join();
    }

    std::vector<double> values;
    for (const auto& run : report.runs) {
        if (run.failed) {
            ++report.failure_count;
        } else {
            values.push_back(run.best_value);
        }
    }
    if (values.empty()) {
        throw std::runtime_error("all " + std::to_string(n_starts) + " runs of " +
                                 optimizer_name + " failed");
    }
    double mean = 0.0, minv = values.front();
    for (double v : values) {
        mean += v;
        minv = std::min(minv, v);
    }
    report.mean_value = mean / static_cast<double>(values.size());
    report.min_value = minv;
    report.cv_percent = report.mean_value == 0.0 ? 0.0 : coefficient_of_variation(values);
    if (problem.goodness) {
        report.goodness_best = problem.goodness(report.best_run().best_theta);
    }
    report.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace termfit
