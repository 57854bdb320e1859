#include "termfit/metaheuristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace termfit {

namespace {

constexpr double kEdge = 1e-9;  // inner margin as a fraction of each bound width

double clamp_inside(double value, const Interval& bound) {
    const double eps = kEdge * bound.width();
    return std::clamp(value, bound.lo + eps, bound.hi - eps);
}

bool linear_ok(const std::vector<double>& theta, const ConstraintSystem& cs) {
    for (const auto& li : cs.linear) {
        if (!(li.slack(theta) > 0.0)) return false;
    }
    return true;
}

}  // namespace

std::vector<double> force_feasible(std::vector<double> theta,
                                   const ConstraintSystem& cs) {
    theta = cs.clip_to_bounds(theta, kEdge);
    for (const auto& li : cs.linear) {
        if (li.slack(theta) > 0.0) continue;
        std::size_t j = li.coeffs.size();
        for (std::size_t i = 0; i < li.coeffs.size(); ++i) {
            if (li.coeffs[i] != 0.0) j = i;
        }
        if (j == li.coeffs.size()) continue;  // vacuous constraint
        double rest = 0.0;
        for (std::size_t i = 0; i < li.coeffs.size(); ++i) {
            if (i != j) rest += li.coeffs[i] * theta[i];
        }
        const double eps = kEdge * cs.bounds[j].width();
        theta[j] = clamp_inside((li.constant + eps - rest) / li.coeffs[j], cs.bounds[j]);
    }
    if (cs.is_strictly_feasible(theta)) return theta;
    for (int k = 1; k <= 60; ++k) {
        const double s = 1.0 - std::ldexp(1.0, -k);
        std::vector<double> blended(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i) {
            blended[i] = theta[i] + s * (cs.witness[i] - theta[i]);
        }
        if (cs.is_strictly_feasible(blended)) return blended;
    }
    return cs.witness;
}

// ---------------------------------------------------------------------------
// Genetic algorithm

double ga_pairing_probability(std::size_t rank, std::size_t population) {
    const std::size_t half = population / 2;
    if (rank < 1 || rank > half) {
        throw std::invalid_argument("pairing rank must lie in [1, population/2]");
    }
    const double total = static_cast<double>(half) * (half + 1) / 2.0;
    return static_cast<double>(half - rank + 1) / total;
}

std::size_t ga_draw_parent_rank(std::size_t pool, RngStream& rng) {
    const double total = static_cast<double>(pool) * (pool + 1) / 2.0;
    const double r = rng.uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 1; i <= pool; ++i) {
        acc += static_cast<double>(pool - i + 1);
        if (r < acc) return i;
    }
    return pool;
}

std::pair<std::vector<double>, std::vector<double>> ga_crossover(
    const std::vector<double>& mother, const std::vector<double>& father,
    const ConstraintSystem& cs, RngStream& rng) {
    const std::size_t p = mother.size();
    if (father.size() != p || cs.dimension() != p) {
        throw std::invalid_argument("crossover parents must share the problem dimension");
    }
    const std::size_t kb = static_cast<std::size_t>(rng.uniform() * static_cast<double>(p));
    const bool swap_left = kb == p - 1;

    std::vector<double> child1, child2;
    for (int attempt = 0; attempt < 20; ++attempt) {
        const double alpha = rng.uniform();
        child1 = mother;
        child2 = father;
        if (swap_left) {
            for (std::size_t j = 0; j < kb; ++j) {
                child1[j] = father[j];
                child2[j] = mother[j];
            }
        } else {
            for (std::size_t j = kb + 1; j < p; ++j) {
                child1[j] = father[j];
                child2[j] = mother[j];
            }
        }
        const double gap = mother[kb] - father[kb];
        child1[kb] = mother[kb] - alpha * gap;
        child2[kb] = father[kb] + alpha * gap;
        child1 = cs.clip_to_bounds(std::move(child1), kEdge);
        child2 = cs.clip_to_bounds(std::move(child2), kEdge);
        if (linear_ok(child1, cs) && linear_ok(child2, cs)) break;
    }
    if (!linear_ok(child1, cs)) child1 = force_feasible(std::move(child1), cs);
    if (!linear_ok(child2, cs)) child2 = force_feasible(std::move(child2), cs);
    return {std::move(child1), std::move(child2)};
}

OptimizerRun ga_run(const GaConfig& config, const ObjectiveProblem& problem,
                    RngStream& rng) {
    const std::size_t M = config.population;
    if (M < 4 || M % 2 != 0) {
        throw std::invalid_argument("population must be even and at least 4");
    }
    const std::size_t p = problem.dimension();
    const ConstraintSystem& cs = problem.constraints;
    const std::size_t elite = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(config.elite_fraction * M)));

    struct Individual {
        std::vector<double> theta;
        double cost;
    };
    std::vector<Individual> pop(M);
    for (auto& ind : pop) {
        ind.theta = sample_feasible(cs, rng);
        ind.cost = problem.evaluate(ind.theta);
    }

    OptimizerRun run;
    run.optimizer_name = "ga";
    {
        std::ostringstream cfg;
        cfg << "population=" << M << " elite_fraction=" << config.elite_fraction
            << " mutation_rate=" << config.mutation_rate
            << " fitness_sd_stop=" << config.fitness_sd_stop
            << " max_iterations=" << config.max_iterations;
        run.config_summary = cfg.str();
    }

    const auto by_cost = [](const Individual& a, const Individual& b) {
        return a.cost < b.cost;
    };
    std::vector<double> best_theta;
    double best_cost = std::numeric_limits<double>::infinity();

    std::size_t generation = 0;
    while (generation < config.max_iterations) {
        ++generation;
        std::stable_sort(pop.begin(), pop.end(), by_cost);
        if (pop.front().cost < best_cost) {
            best_cost = pop.front().cost;
            best_theta = pop.front().theta;
        }
        run.trace.push_back(best_cost);

        if (config.fitness_sd_stop > 0.0) {
            // Fitness for the stop rule is the inverse cost; the floor only
            // guards the division at an exact zero.
            double mean = 0.0;
            for (const auto& ind : pop) mean += 1.0 / std::max(ind.cost, 1e-300);
            mean /= static_cast<double>(M);
            double ss = 0.0;
            for (const auto& ind : pop) {
                const double d = 1.0 / std::max(ind.cost, 1e-300) - mean;
                ss += d * d;
            }
            const double sd = std::sqrt(ss / static_cast<double>(M));
            if (sd < config.fitness_sd_stop) break;
        }
        if (generation == config.max_iterations) break;

        // The bottom part of the ranking is replaced by children of
        // rank-weighted pairs drawn from the elite.
        std::vector<Individual> next(pop.begin(),
                                     pop.begin() + static_cast<std::ptrdiff_t>(elite));
        while (next.size() < M) {
            const auto& mother = pop[ga_draw_parent_rank(elite, rng) - 1].theta;
            const auto& father = pop[ga_draw_parent_rank(elite, rng) - 1].theta;
            auto [c1, c2] = ga_crossover(mother, father, cs, rng);
            next.push_back({std::move(c1), 0.0});
            next.back().cost = problem.evaluate(next.back().theta);
            if (next.size() < M) {
                next.push_back({std::move(c2), 0.0});
                next.back().cost = problem.evaluate(next.back().theta);
            }
        }
        pop = std::move(next);

        // Mutation replaces a fixed number of genes with fresh uniform
        // draws, never touching the current best individual.
        std::size_t best_idx = 0;
        for (std::size_t i = 1; i < M; ++i) {
            if (pop[i].cost < pop[best_idx].cost) best_idx = i;
        }
        const auto mutations = std::max<std::size_t>(
            1, static_cast<std::size_t>(
                   std::llround(config.mutation_rate * static_cast<double>((M - 1) * p))));
        std::vector<bool> dirty(M, false);
        for (std::size_t m = 0; m < mutations; ++m) {
            std::size_t row = rng.uniform_index(M - 1);
            if (row >= best_idx) ++row;
            const std::size_t col = rng.uniform_index(p);
            pop[row].theta[col] = rng.uniform_in(cs.bounds[col].lo, cs.bounds[col].hi);
            if (!linear_ok(pop[row].theta, cs)) {
                for (int attempt = 0; attempt < 20 && !linear_ok(pop[row].theta, cs);
                     ++attempt) {
                    pop[row].theta[col] =
                        rng.uniform_in(cs.bounds[col].lo, cs.bounds[col].hi);
                }
                if (!linear_ok(pop[row].theta, cs)) {
                    pop[row].theta = force_feasible(std::move(pop[row].theta), cs);
                }
            }
            dirty[row] = true;
        }
        for (std::size_t i = 0; i < M; ++i) {
            if (dirty[i]) pop[i].cost = problem.evaluate(pop[i].theta);
        }
    }

    std::stable_sort(pop.begin(), pop.end(), by_cost);
    if (pop.front().cost < best_cost) {
        best_cost = pop.front().cost;
        best_theta = pop.front().theta;
    }
    run.best_theta = best_theta;
    run.best_value = best_cost;
    run.iterations_used = generation;
    if (problem.model) {
        run.best_params = CurveParams::from_vector(*problem.model, best_theta);
    }
    return run;
}

// ---------------------------------------------------------------------------
// Ant colony optimization (continuous, archive based)

double aco_kernel_weight(std::size_t rank, std::size_t archive_size, double nu) {
    if (rank < 1 || rank > archive_size) {
        throw std::invalid_argument("kernel rank must lie in [1, archive size]");
    }
    const double q = static_cast<double>(archive_size);
    const double l = static_cast<double>(rank);
    const double spread = nu * q;
    return std::exp(-(l - 1.0) * (l - 1.0) / (2.0 * spread * spread)) /
           (spread * std::sqrt(2.0 * std::numbers::pi));
}

double aco_sigma(const std::vector<double>& dimension_values, std::size_t index,
                 double xi, double floor_value) {
    const std::size_t q = dimension_values.size();
    if (q < 2) throw std::invalid_argument("sigma needs an archive of at least 2");
    if (index < 1 || index > q) {
        throw std::invalid_argument("sigma index must lie in [1, archive size]");
    }
    const double center = dimension_values[index - 1];
    double sum = 0.0;
    for (double v : dimension_values) sum += std::abs(v - center);
    const double sigma = xi * sum / static_cast<double>(q - 1);
    return std::max(sigma, floor_value);
}

OptimizerRun aco_run(const AcoConfig& config, const ObjectiveProblem& problem,
                     RngStream& rng) {
    if (config.archive < 2) throw std::invalid_argument("archive size must be at least 2");
    const std::size_t q = config.archive;
    const std::size_t p = problem.dimension();
    const ConstraintSystem& cs = problem.constraints;

    struct Solution {
        std::vector<double> theta;
        double cost;
    };
    const auto by_cost = [](const Solution& a, const Solution& b) {
        return a.cost < b.cost;
    };

    std::vector<Solution> archive(q);
    for (auto& s : archive) {
        s.theta = sample_feasible(cs, rng);
        s.cost = problem.evaluate(s.theta);
    }
    std::stable_sort(archive.begin(), archive.end(), by_cost);

    std::vector<double> cumulative(q);
    {
        double acc = 0.0;
        for (std::size_t l = 1; l <= q; ++l) {
            acc += aco_kernel_weight(l, q, config.nu);
            cumulative[l - 1] = acc;
        }
        for (double& c : cumulative) c /= acc;
    }
    const auto pick_kernel = [&]() {
        const double r = rng.uniform();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
        const auto idx = static_cast<std::size_t>(it - cumulative.begin());
        return std::min(idx, q - 1);  // 0-based
    };

    std::vector<double> floors(p);
    for (std::size_t i = 0; i < p; ++i) floors[i] = 1e-9 * cs.bounds[i].width();

    const auto draw_coordinate = [&](std::size_t dim) {
        const std::size_t l = pick_kernel();
        std::vector<double> column(q);
        for (std::size_t h = 0; h < q; ++h) column[h] = archive[h].theta[dim];
        const double sigma = aco_sigma(column, l + 1, config.xi, floors[dim]);
        const double mu = archive[l].theta[dim];
        for (int attempt = 0; attempt < 100; ++attempt) {
            const double v = mu + sigma * rng.normal();
            if (v > cs.bounds[dim].lo && v < cs.bounds[dim].hi) return v;
        }
        return clamp_inside(mu, cs.bounds[dim]);
    };

    OptimizerRun run;
    run.optimizer_name = "aco";
    {
        std::ostringstream cfg;
        cfg << "ants=" << config.ants << " archive=" << q << " xi=" << config.xi
            << " nu=" << config.nu << " max_iterations=" << config.max_iterations;
        run.config_summary = cfg.str();
    }

    std::size_t iteration = 0;
    for (; iteration < config.max_iterations; ++iteration) {
        std::vector<Solution> ants(config.ants);
        for (auto& ant : ants) {
            ant.theta.resize(p);
            for (std::size_t i = 0; i < p; ++i) ant.theta[i] = draw_coordinate(i);
            if (!linear_ok(ant.theta, cs)) {
                // The level constraint involves the second coordinate; give
                // it fresh kernel draws before forcing.
                for (int attempt = 0; p >= 2 && attempt < 20 && !linear_ok(ant.theta, cs);
                     ++attempt) {
                    ant.theta[1] = draw_coordinate(1);
                }
                if (!linear_ok(ant.theta, cs)) {
                    ant.theta = force_feasible(std::move(ant.theta), cs);
                }
            }
            ant.cost = problem.evaluate(ant.theta);
        }
        archive.insert(archive.end(), std::make_move_iterator(ants.begin()),
                       std::make_move_iterator(ants.end()));
        std::stable_sort(archive.begin(), archive.end(), by_cost);
        archive.resize(q);
        run.trace.push_back(archive.front().cost);
    }

    run.best_theta = archive.front().theta;
    run.best_value = archive.front().cost;
    run.iterations_used = iteration;
    if (problem.model) {
        run.best_params = CurveParams::from_vector(*problem.model, run.best_theta);
    }
    return run;
}

// ---------------------------------------------------------------------------
// Particle swarm optimization

std::vector<double> pso_velocity(const std::vector<double>& position,
                                 const std::vector<double>& velocity,
                                 const std::vector<double>& personal_best,
                                 const std::vector<double>& global_best,
                                 const PsoConfig& config,
                                 const std::vector<double>& vmax, std::size_t t,
                                 RngStream& rng) {
    const std::size_t p = position.size();
    double w = config.inertia;
    if (config.use_inertia_schedule) {
        const double horizon = static_cast<double>(std::max<std::size_t>(1, config.max_iterations));
        w = config.w_max - (config.w_max - config.w_min) * static_cast<double>(t) / horizon;
    }
    std::vector<double> next(p);
    for (std::size_t j = 0; j < p; ++j) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        const double toward_personal = personal_best[j] - position[j];
        const double toward_global = global_best[j] - position[j];
        double v = w * velocity[j];
        if (config.swap_cognitive_social) {
            v += config.cognitive * r1 * toward_global + config.social * r2 * toward_personal;
        } else {
            v += config.cognitive * r1 * toward_personal + config.social * r2 * toward_global;
        }
        next[j] = std::clamp(v, -vmax[j], vmax[j]);
    }
    return next;
}

OptimizerRun pso_run(const PsoConfig& config, const ObjectiveProblem& problem,
                     RngStream& rng) {
    const std::size_t M = config.swarm;
    if (M < 1) throw std::invalid_argument("swarm size must be at least 1");
    const std::size_t p = problem.dimension();
    const ConstraintSystem& cs = problem.constraints;

    std::vector<double> vmax(p);
    for (std::size_t i = 0; i < p; ++i) vmax[i] = config.vmax_fraction * cs.bounds[i].width();

    std::vector<std::vector<double>> x(M), v(M, std::vector<double>(p, 0.0));
    std::vector<std::vector<double>> pbest(M);
    std::vector<double> pbest_cost(M);
    for (std::size_t m = 0; m < M; ++m) {
        x[m] = sample_feasible(cs, rng);
        pbest[m] = x[m];
        pbest_cost[m] = problem.evaluate(x[m]);
    }
    std::size_t gbest = 0;
    for (std::size_t m = 1; m < M; ++m) {
        if (pbest_cost[m] < pbest_cost[gbest]) gbest = m;
    }

    OptimizerRun run;
    run.optimizer_name = "pso";
    {
        std::ostringstream cfg;
        cfg << "swarm=" << M;
        if (config.use_inertia_schedule) {
            cfg << " w_max=" << config.w_max << " w_min=" << config.w_min;
        } else {
            cfg << " inertia=" << config.inertia;
        }
        cfg << " cognitive=" << config.cognitive << " social=" << config.social
            << " vmax_fraction=" << config.vmax_fraction
            << " max_iterations=" << config.max_iterations
            << " stall_iterations=" << config.stall_iterations;
        run.config_summary = cfg.str();
    }

    std::size_t iteration = 0;
    std::size_t stalled = 0;
    for (; iteration < config.max_iterations; ++iteration) {
        const std::vector<double> global_ref = pbest[gbest];
        bool any_personal_improved = false;
        for (std::size_t m = 0; m < M; ++m) {
            std::vector<double> candidate;
            std::vector<double> vel;
            bool ok = false;
            for (int attempt = 0; attempt < 10 && !ok; ++attempt) {
                vel = pso_velocity(x[m], v[m], pbest[m], global_ref, config, vmax,
                                   iteration, rng);
                candidate.resize(p);
                for (std::size_t j = 0; j < p; ++j) candidate[j] = x[m][j] + vel[j];
                candidate = cs.clip_to_bounds(std::move(candidate), kEdge);
                ok = linear_ok(candidate, cs);
            }
            if (!ok) candidate = force_feasible(std::move(candidate), cs);
            // The stored velocity is the realized displacement, so a clip at
            // a wall removes the outward component instead of accumulating it.
            for (std::size_t j = 0; j < p; ++j) v[m][j] = candidate[j] - x[m][j];
            x[m] = std::move(candidate);
            const double cost = problem.evaluate(x[m]);
            if (cost < pbest_cost[m]) {
                pbest_cost[m] = cost;
                pbest[m] = x[m];
                any_personal_improved = true;
            }
        }
        for (std::size_t m = 0; m < M; ++m) {
            if (pbest_cost[m] < pbest_cost[gbest]) gbest = m;
        }
        run.trace.push_back(pbest_cost[gbest]);
        stalled = any_personal_improved ? 0 : stalled + 1;
        if (config.stall_iterations > 0 && stalled >= config.stall_iterations) {
            ++iteration;
            break;
        }
    }

    run.best_theta = pbest[gbest];
    run.best_value = pbest_cost[gbest];
    run.iterations_used = iteration;
    if (problem.model) {
        run.best_params = CurveParams::from_vector(*problem.model, run.best_theta);
    }
    return run;
}

// ---------------------------------------------------------------------------
// Simulated annealing (very fast reannealing move kernel)

std::vector<double> sa_neighbor(const std::vector<double>& theta, double temperature,
                                const ConstraintSystem& cs, RngStream& rng) {
    if (!(temperature > 0.0)) {
        throw std::domain_error("neighbor generation needs a positive temperature");
    }
    const std::size_t p = theta.size();
    const auto draw_coordinate = [&](std::size_t i) {
        const double u = rng.uniform();
        const double span = std::abs(2.0 * u - 1.0);
        const double magnitude =
            temperature * std::expm1(span * std::log1p(1.0 / temperature));
        const double lambda = (u < 0.5 ? -1.0 : 1.0) * magnitude;
        return clamp_inside(theta[i] + lambda * cs.bounds[i].width(), cs.bounds[i]);
    };
    std::vector<double> next(p);
    for (std::size_t i = 0; i < p; ++i) next[i] = draw_coordinate(i);
    if (!linear_ok(next, cs)) {
        for (int attempt = 0; p >= 2 && attempt < 20 && !linear_ok(next, cs); ++attempt) {
            next[1] = draw_coordinate(1);
        }
        if (!linear_ok(next, cs)) next = force_feasible(std::move(next), cs);
    }
    return next;
}

double sa_temperature_from_walk(std::size_t decreases, std::size_t increases,
                                double mean_increase, double initial_acceptance,
                                std::vector<std::string>* warnings) {
    const auto warn = [&](const std::string& msg) {
        if (warnings) warnings->push_back(msg);
    };
    if (!(initial_acceptance > 0.5 && initial_acceptance < 1.0)) {
        throw std::invalid_argument("initial acceptance must lie in (0.5, 1)");
    }
    if (increases == 0) {
        warn("walk produced no objective increases; starting temperature set to 1");
        return 1.0;
    }
    if (!(mean_increase > 0.0)) {
        warn("walk produced a zero mean increase; starting temperature set to 1");
        return 1.0;
    }
    const double m1 = static_cast<double>(decreases);
    const double m2 = static_cast<double>(increases);
    const double denom = m2 * initial_acceptance - m1 * (1.0 - initial_acceptance);
    if (!(denom > 0.0)) {
        warn("walk statistics leave the acceptance equation unsolvable; "
             "falling back to mean increase / ln(1/acceptance)");
        return mean_increase / std::log(1.0 / initial_acceptance);
    }
    return mean_increase / std::log(m2 / denom);
}

SaTemperatureEstimate sa_initial_temperature(const ObjectiveProblem& problem,
                                             double initial_acceptance,
                                             std::size_t blank_iterations,
                                             RngStream& rng) {
    if (blank_iterations < 1) {
        throw std::invalid_argument("temperature estimation needs at least one iteration");
    }
    SaTemperatureEstimate est;
    std::vector<double> theta = sample_feasible(problem.constraints, rng);
    double value = problem.evaluate(theta);
    double increase_sum = 0.0;
    for (std::size_t i = 0; i < blank_iterations; ++i) {
        // Reference temperature 1 and unconditional acceptance: a plain
        // random walk probing the move kernel's landscape.
        std::vector<double> next = sa_neighbor(theta, 1.0, problem.constraints, rng);
        const double next_value = problem.evaluate(next);
        const double delta = next_value - value;
        if (delta > 0.0) {
            ++est.increases;
            increase_sum += delta;
        } else {
            ++est.decreases;
        }
        theta = std::move(next);
        value = next_value;
    }
    est.mean_increase = est.increases ? increase_sum / static_cast<double>(est.increases) : 0.0;
    est.t0 = sa_temperature_from_walk(est.decreases, est.increases, est.mean_increase,
                                      initial_acceptance, &est.warnings);
    est.walk_end = std::move(theta);
    return est;
}

bool metropolis_accept(double delta_f, double temperature, RngStream& rng) {
    if (!(temperature > 0.0)) {
        throw std::domain_error("acceptance needs a positive temperature");
    }
    if (delta_f <= 0.0) return true;  // improvements cost no draw
    return rng.uniform() < std::exp(-delta_f / temperature);
}

OptimizerRun sa_run(const SaConfig& config, const ObjectiveProblem& problem,
                    RngStream& rng) {
    if (!(config.cooling > 0.0 && config.cooling < 1.0)) {
        throw std::invalid_argument("cooling factor must lie in (0, 1)");
    }
    const ConstraintSystem& cs = problem.constraints;

    const SaTemperatureEstimate est = sa_initial_temperature(
        problem, config.initial_acceptance, config.blank_iterations, rng);

    std::vector<double> theta = est.walk_end;
    double value = problem.evaluate(theta);
    std::vector<double> best_theta = theta;
    double best_value = value;

    OptimizerRun run;
    run.optimizer_name = "sa";
    {
        std::ostringstream cfg;
        cfg << "chain_length=" << config.chain_length << " cooling=" << config.cooling
            << " initial_acceptance=" << config.initial_acceptance
            << " blank_iterations=" << config.blank_iterations
            << " max_iterations=" << config.max_iterations << " t_min=" << config.t_min
            << " t0=" << est.t0;
        run.config_summary = cfg.str();
    }

    double temperature = est.t0;
    std::size_t proposals = 0;
    while (temperature >= config.t_min && proposals < config.max_iterations) {
        bool chain_accepted = false;
        // The neighbor generator works on the dimensionless annealing
        // progress T/T0, the same scale the T0 estimate was calibrated at
        // (its blank walk runs the generator at exactly 1, the box scale).
        // Metropolis sees the raw temperature on the objective's own energy
        // scale, so acceptance stays alive as the moves localize.
        const double generator_scale = temperature / est.t0;
        for (std::size_t step = 0;
             step < config.chain_length && proposals < config.max_iterations; ++step) {
            ++proposals;
            std::vector<double> candidate = sa_neighbor(theta, generator_scale, cs, rng);
            const double candidate_value = problem.evaluate(candidate);
            const double delta = candidate_value - value;
            if (metropolis_accept(delta, temperature, rng)) {
                theta = std::move(candidate);
                value = candidate_value;
                chain_accepted = true;
                if (value < best_value) {
                    best_value = value;
                    best_theta = theta;
                }
            }
        }
        run.trace.push_back(best_value);
        // A chain in which every proposal was rejected means the walk is
        // frozen at this scale; further cooling cannot revive it.
        if (!chain_accepted) break;
        temperature *= config.cooling;
    }

    run.best_theta = best_theta;
    run.best_value = best_value;
    run.iterations_used = proposals;
    if (problem.model) {
        run.best_params = CurveParams::from_vector(*problem.model, best_theta);
    }
    return run;
}

}  // namespace termfit
