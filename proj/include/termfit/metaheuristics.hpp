#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "termfit/optim_core.hpp"
#include "termfit/rng.hpp"

namespace termfit {

struct GaConfig {
    std::size_t population = 100;   // must be even, >= 4
    double elite_fraction = 0.5;    // share kept unchanged each generation
    double mutation_rate = 0.01;    // share of non-best genes replaced
    double fitness_sd_stop = 0.5;   // stop when sd of 1/cost falls below; <= 0 disables
    std::size_t max_iterations = 10000;
};

/// Probability that the parent of a new pair is the rank-i individual
/// (1-based, i <= population/2): (M/2 - i + 1) / sum_{m=1}^{M/2} m.
double ga_pairing_probability(std::size_t rank, std::size_t population);

/// Draws a 1-based rank in [1, pool] with weight pool - rank + 1, the
/// parent-selection rule behind ga_pairing_probability.
std::size_t ga_draw_parent_rank(std::size_t pool, RngStream& rng);

/// Single-point blend crossover: picks k = floor(u*p) + 1, blends gene k of
/// both children with a shared alpha ~ U(0,1), and swaps the side right of
/// k (left of k when k = p). Children are clipped into the box; alpha is
/// redrawn (at most 20 times) while either child breaks a linear
/// constraint, after which the deterministic repair runs.
std::pair<std::vector<double>, std::vector<double>> ga_crossover(
    const std::vector<double>& mother, const std::vector<double>& father,
    const ConstraintSystem& cs, RngStream& rng);

OptimizerRun ga_run(const GaConfig& config, const ObjectiveProblem& problem,
                    RngStream& rng);

struct AcoConfig {
    std::size_t ants = 2;
    std::size_t archive = 50;  // q, >= 2
    double xi = 0.4;           // locality of the search
    double nu = 1.1;           // convergence speed
    std::size_t max_iterations = 20000;
};

/// Gaussian rank weight of archive member l (1-based):
/// exp(-(l-1)^2 / (2 nu^2 q^2)) / (nu q sqrt(2 pi)).
double aco_kernel_weight(std::size_t rank, std::size_t archive_size, double nu);

/// Kernel deviation for one dimension: xi * mean absolute distance from the
/// chosen member's value (1-based index) to the rest of the archive,
/// floored at floor_value.
double aco_sigma(const std::vector<double>& dimension_values, std::size_t index,
                 double xi, double floor_value);

OptimizerRun aco_run(const AcoConfig& config, const ObjectiveProblem& problem,
                     RngStream& rng);

struct PsoConfig {
    std::size_t swarm = 47;
    double inertia = -0.1832;          // constant w when the schedule is off
    bool use_inertia_schedule = false; // w(t) = w_max - (w_max - w_min) t / T_max
    double w_max = 0.9;
    double w_min = 0.4;
    double cognitive = 0.5287;  // weight on the pull toward the personal best
    double social = 3.1913;     // weight on the pull toward the global best
    /// Flips the pairing so the cognitive coefficient multiplies the
    /// global-best term and the social one the personal-best term.
    bool swap_cognitive_social = false;
    double vmax_fraction = 0.5;  // velocity bound as a share of each bound width
    std::size_t max_iterations = 2000;  // T_max
    /// Stop after this many consecutive iterations in which no personal
    /// best improved; 0 disables the stall stop (T_max alone applies).
    std::size_t stall_iterations = 1;
};

/// One velocity update with fresh r1, r2 ~ U(0,1) per dimension, each
/// component clamped to [-vmax_j, vmax_j]. `t` drives the inertia schedule
/// when enabled.
std::vector<double> pso_velocity(const std::vector<double>& position,
                                 const std::vector<double>& velocity,
                                 const std::vector<double>& personal_best,
                                 const std::vector<double>& global_best,
                                 const PsoConfig& config,
                                 const std::vector<double>& vmax, std::size_t t,
                                 RngStream& rng);

OptimizerRun pso_run(const PsoConfig& config, const ObjectiveProblem& problem,
                     RngStream& rng);

struct SaConfig {
    std::size_t chain_length = 100;     // moves per temperature
    double cooling = 0.95;              // T <- cooling * T
    double initial_acceptance = 0.95;   // chi0, in (0.5, 1)
    std::size_t blank_iterations = 1000;  // walk length for the T0 estimate
    std::size_t max_iterations = 200000;  // total proposals
    double t_min = 1e-10;               // stop once T falls below
};

/// Draws a neighbor: per coordinate, lambda = sgn(u - 0.5) * T *
/// ((1 + 1/T)^|2u-1| - 1) scaled by the bound width, clipped into the box;
/// a broken linear constraint redraws the participating coordinate (at
/// most 20 times) before the deterministic repair.
std::vector<double> sa_neighbor(const std::vector<double>& theta, double temperature,
                                const ConstraintSystem& cs, RngStream& rng);

/// Temperature at which the walk statistics would be accepted with
/// probability chi0: mean_increase / ln(m2 / (m2 chi0 - m1 (1 - chi0))).
/// Degenerate inputs fall back (with a note in `warnings`): no increases or
/// zero mean increase give 1, a nonpositive denominator argument gives
/// mean_increase / ln(1/chi0).
double sa_temperature_from_walk(std::size_t decreases, std::size_t increases,
                                double mean_increase, double initial_acceptance,
                                std::vector<std::string>* warnings = nullptr);

struct SaTemperatureEstimate {
    double t0 = 1.0;
    std::size_t decreases = 0;   // proposals that did not raise the objective
    std::size_t increases = 0;   // proposals that raised it
    double mean_increase = 0.0;  // average positive jump
    std::vector<double> walk_end;
    std::vector<std::string> warnings;
};

/// Runs the accept-everything random walk (neighbor generator at reference
/// temperature 1) and derives the starting temperature from its statistics.
SaTemperatureEstimate sa_initial_temperature(const ObjectiveProblem& problem,
                                             double initial_acceptance,
                                             std::size_t blank_iterations,
                                             RngStream& rng);

/// Accepts improvements outright (no draw consumed); a worsening move is
/// accepted with probability exp(-delta_f / temperature) using one draw.
bool metropolis_accept(double delta_f, double temperature, RngStream& rng);

OptimizerRun sa_run(const SaConfig& config, const ObjectiveProblem& problem,
                    RngStream& rng);

/// Restores strict feasibility after a box clip: a violated linear
/// constraint moves its highest-index participating coordinate to the
/// smallest conforming value, then falls back to blending toward the
/// interior witness. Used by every move operator above.
std::vector<double> force_feasible(std::vector<double> theta,
                                   const ConstraintSystem& cs);

}  // namespace termfit
