#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "termfit/optim_core.hpp"

namespace termfit {

/// Dense square matrix, row major, just big enough for the 4x4 and 6x6
/// inverse-Hessian approximations used here.
struct Matrix {
    std::size_t n = 0;
    std::vector<double> a;

    Matrix() = default;
    explicit Matrix(std::size_t size) : n(size), a(size * size, 0.0) {}
    static Matrix identity(std::size_t size);

    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    std::vector<double> multiply(const std::vector<double>& x) const;
};

/// Rank-two quasi-Newton update of the inverse Hessian:
/// H' = (I - z y'/(y'z)) H (I - y z'/(y'z)) + z z'/(y'z), where z is the
/// last step and y the gradient change. Returns H unchanged when the
/// curvature y'z <= 1e-10 |y||z| (the guard that keeps H positive
/// definite).
Matrix bfgs_update(const Matrix& h, const std::vector<double>& z,
                   const std::vector<double>& y);

using SmoothFn = std::function<double(const std::vector<double>&)>;
using GradientFn = std::function<std::vector<double>(const std::vector<double>&)>;

struct BfgsOptions {
    double gradient_tol = 1e-8;
    std::size_t max_iterations = 500;
};

struct BfgsResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t iterations = 0;
};

/// Quasi-Newton descent with Armijo backtracking (c = 1e-4, halving).
/// Points where f returns a non-finite value act as walls: the step is
/// shortened until it lands back in the domain. Throws when the start
/// itself is outside the domain.
BfgsResult bfgs_minimize(const SmoothFn& f, const GradientFn& grad,
                         std::vector<double> start, const BfgsOptions& options = {});

/// The objective penalized to stay strictly inside the linear constraints.
/// The barrier term is anchored: its gradient vanishes at `anchor`, so the
/// penalty deflects only movement toward the boundary.
struct BarrierProblem {
    SmoothFn f;
    GradientFn grad;
    std::vector<LinearInequality> inequalities;
    double mu = 1.0;
    std::vector<double> anchor;
};

/// f(theta) - mu * sum_j [L_j(anchor) ln L_j(theta) - u_j' theta] with
/// L_j(theta) the j-th constraint slack; +infinity outside the domain.
double barrier_value(const BarrierProblem& bp, const std::vector<double>& theta);
std::vector<double> barrier_gradient(const BarrierProblem& bp,
                                     const std::vector<double>& theta);

struct BarrierOptions {
    double mu0 = 1.0;
    double mu_factor = 0.1;
    std::size_t stages = 10;
    double stage_move_tol = 1e-10;  // outer stop on successive solutions
    BfgsOptions inner;
};

/// The deterministic baseline: from a strictly feasible start, repeatedly
/// minimize the barrier-penalized objective with BFGS, re-anchoring at each
/// stage while mu decays geometrically. Reports the raw objective value.
OptimizerRun constrained_minimize(const ObjectiveProblem& problem,
                                  std::vector<double> start,
                                  const BarrierOptions& options = {});

}  // namespace termfit
