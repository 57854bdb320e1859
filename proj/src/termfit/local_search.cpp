#include "termfit/local_search.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace termfit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

Matrix Matrix::identity(std::size_t size) {
    Matrix m(size);
    for (std::size_t i = 0; i < size; ++i) m.at(i, i) = 1.0;
    return m;
}

std::vector<double> Matrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += at(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Matrix bfgs_update(const Matrix& h, const std::vector<double>& z,
                   const std::vector<double>& y) {
    const std::size_t n = h.n;
    if (z.size() != n || y.size() != n) {
        throw std::invalid_argument("update vectors must match the matrix dimension");
    }
    const double yz = dot(y, z);
    if (yz <= 1e-10 * norm(y) * norm(z)) {
        return h;  // curvature too weak to keep H positive definite
    }
    // A = I - z y'/(y'z); H' = A H A' + z z'/(y'z)
    Matrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a.at(i, j) = (i == j ? 1.0 : 0.0) - z[i] * y[j] / yz;
        }
    }
    Matrix ah(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += a.at(i, k) * h.at(k, j);
            ah.at(i, j) = s;
        }
    }
    Matrix result(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += ah.at(i, k) * a.at(j, k);
            result.at(i, j) = s + z[i] * z[j] / yz;
        }
    }
    return result;
}

BfgsResult bfgs_minimize(const SmoothFn& f, const GradientFn& grad,
                         std::vector<double> start, const BfgsOptions& options) {
    const std::size_t n = start.size();
    double value = f(start);
    if (!std::isfinite(value)) {
        throw std::invalid_argument("descent must start inside the objective's domain");
    }
    std::vector<double> g = grad(start);
    Matrix h = Matrix::identity(n);

    BfgsResult result;
    result.x = std::move(start);
    result.value = value;

    for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
        if (norm(g) < options.gradient_tol) break;
        result.iterations = iter + 1;

        std::vector<double> direction = h.multiply(g);
        for (double& d : direction) d = -d;
        double slope = dot(g, direction);
        if (!(slope < 0.0)) {
            // H lost its way (numerically); restart from steepest descent.
            h = Matrix::identity(n);
            for (std::size_t i = 0; i < n; ++i) direction[i] = -g[i];
            slope = dot(g, direction);
            if (!(slope < 0.0)) break;  // gradient is numerically zero
        }

        // Armijo backtracking; non-finite values reject the step outright.
        constexpr double c = 1e-4;
        double alpha = 1.0;
        std::vector<double> candidate(n);
        double candidate_value = kInf;
        bool accepted = false;
        while (alpha > 1e-20) {
            for (std::size_t i = 0; i < n; ++i) {
                candidate[i] = result.x[i] + alpha * direction[i];
            }
            candidate_value = f(candidate);
            if (std::isfinite(candidate_value) &&
                candidate_value <= result.value + c * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;

        std::vector<double> step(n), gradient_change(n);
        for (std::size_t i = 0; i < n; ++i) step[i] = candidate[i] - result.x[i];
        if (norm(step) < 1e-12) {
            result.x = std::move(candidate);
            result.value = candidate_value;
            break;
        }
        std::vector<double> g_next = grad(candidate);
        for (std::size_t i = 0; i < n; ++i) gradient_change[i] = g_next[i] - g[i];
        h = bfgs_update(h, step, gradient_change);

        result.x = std::move(candidate);
        result.value = candidate_value;
        g = std::move(g_next);
    }
    return result;
}

double barrier_value(const BarrierProblem& bp, const std::vector<double>& theta) {
    double penalty = 0.0;
    for (const auto& li : bp.inequalities) {
        const double slack = li.slack(theta);
        if (!(slack > 0.0)) return kInf;
        double ut = 0.0;
        for (std::size_t i = 0; i < li.coeffs.size(); ++i) ut += li.coeffs[i] * theta[i];
        penalty += li.slack(bp.anchor) * std::log(slack) - ut;
    }
    return bp.f(theta) - bp.mu * penalty;
}

std::vector<double> barrier_gradient(const BarrierProblem& bp,
                                     const std::vector<double>& theta) {
    std::vector<double> g = bp.grad(theta);
    for (const auto& li : bp.inequalities) {
        const double slack = li.slack(theta);
        if (!(slack > 0.0)) {
            throw std::domain_error("barrier gradient requested outside the domain");
        }
        // d/dtheta [L(anchor) ln L(theta) - u'theta] = (L(anchor)/L(theta) - 1) u
        const double scale = -bp.mu * (li.slack(bp.anchor) / slack - 1.0);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += scale * li.coeffs[i];
    }
    return g;
}

OptimizerRun constrained_minimize(const ObjectiveProblem& problem,
                                  std::vector<double> start,
                                  const BarrierOptions& options) {
    const ConstraintSystem& cs = problem.constraints;
    if (!cs.is_strictly_feasible(start)) {
        throw std::invalid_argument("barrier requires a strictly interior starting point");
    }
    if (!problem.gradient) {
        throw std::invalid_argument("the barrier baseline needs an analytic gradient");
    }

    BarrierProblem bp;
    bp.f = problem.evaluate;
    bp.grad = problem.gradient;
    bp.inequalities = cs.all_inequalities();
    bp.mu = options.mu0;

    OptimizerRun run;
    run.optimizer_name = "bfgs";
    {
        std::ostringstream cfg;
        cfg << "mu0=" << options.mu0 << " mu_factor=" << options.mu_factor
            << " stages=" << options.stages << " gradient_tol=" << options.inner.gradient_tol
            << " max_inner_iterations=" << options.inner.max_iterations;
        run.config_summary = cfg.str();
    }

    std::vector<double> current = std::move(start);
    std::size_t total_inner = 0;
    for (std::size_t stage = 0; stage < options.stages; ++stage) {
        bp.anchor = current;
        const auto value_fn = [&bp](const std::vector<double>& theta) {
            return barrier_value(bp, theta);
        };
        const auto grad_fn = [&bp](const std::vector<double>& theta) {
            return barrier_gradient(bp, theta);
        };
        BfgsResult inner = bfgs_minimize(value_fn, grad_fn, current, options.inner);
        total_inner += inner.iterations;
        double move = 0.0;
        for (std::size_t i = 0; i < current.size(); ++i) {
            move += (inner.x[i] - current[i]) * (inner.x[i] - current[i]);
        }
        current = std::move(inner.x);
        run.trace.push_back(problem.evaluate(current));
        if (std::sqrt(move) < options.stage_move_tol) break;
        bp.mu *= options.mu_factor;
    }

    run.best_theta = current;
    run.best_value = problem.evaluate(current);
    run.iterations_used = total_inner;
    if (problem.model) {
        run.best_params = CurveParams::from_vector(*problem.model, run.best_theta);
    }
    return run;
}

}  // namespace termfit
