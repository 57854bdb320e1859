#include "termfit/curve_models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace termfit {

namespace {

// Short human-readable number for constraint labels ("0.25", not "0.250000").
std::string label_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

}  // namespace

std::size_t model_dimension(ModelKind kind) {
    return kind == ModelKind::NelsonSiegel ? 4 : 6;
}

std::string model_name(ModelKind kind) {
    return kind == ModelKind::NelsonSiegel ? "ns" : "svensson";
}

ModelKind model_from_name(const std::string& name) {
    if (name == "ns" || name == "nelson-siegel") return ModelKind::NelsonSiegel;
    if (name == "svensson" || name == "sv") return ModelKind::Svensson;
    throw std::invalid_argument("unknown model '" + name + "' (expected ns or svensson)");
}

std::vector<double> CurveParams::to_vector() const {
    std::vector<double> theta{beta0, beta1, beta2, lambda1};
    if (kind == ModelKind::Svensson) {
        theta.push_back(beta3.value_or(0.0));
        theta.push_back(lambda2.value_or(1.0));
    }
    return theta;
}

CurveParams CurveParams::from_vector(ModelKind kind, const std::vector<double>& theta) {
    if (theta.size() != model_dimension(kind)) {
        throw std::invalid_argument("parameter vector has wrong dimension");
    }
    CurveParams p;
    p.kind = kind;
    p.beta0 = theta[0];
    p.beta1 = theta[1];
    p.beta2 = theta[2];
    p.lambda1 = theta[3];
    if (kind == ModelKind::Svensson) {
        p.beta3 = theta[4];
        p.lambda2 = theta[5];
    }
    return p;
}

double decay_mean(double x) {
    // Below the cutoff the direct quotient loses precision; three series
    // terms already bound the error by ~x^3/24 < 1e-25.
    if (std::abs(x) < 1e-8) {
        return 1.0 - x / 2.0 + x * x / 6.0;
    }
    return -std::expm1(-x) / x;
}

namespace {

// decay_mean and e^-x from a single expm1; the pricing loops live on this.
inline void decay_parts(double x, double& mean, double& decay) {
    if (std::abs(x) < 1e-8) {
        mean = 1.0 - x / 2.0 + x * x / 6.0;
        decay = 1.0 - x + x * x / 2.0;
        return;
    }
    const double em = std::expm1(-x);  // e^-x - 1
    mean = -em / x;
    decay = 1.0 + em;
}

}  // namespace

double decay_mean_derivative(double x) {
    if (std::abs(x) < 1e-8) {
        return -0.5 + x / 3.0;
    }
    const double u = -std::expm1(-x);  // 1 - e^-x
    return (x * (1.0 - u) - u) / (x * x);
}

double discrete_forward(double delta_t, double t, double delta_s, double s) {
    if (!(s > 0.0) || !(s < t)) {
        throw std::domain_error("discrete_forward requires 0 < s < t");
    }
    return (t * delta_t - s * delta_s) / (t - s);
}

namespace {

void check_horizon(double t) {
    if (t < 0.0 || !std::isfinite(t)) {
        throw std::domain_error("rate horizon must be a finite t >= 0");
    }
}

}  // namespace

double forward_rate(const CurveParams& params, double t) {
    check_horizon(t);
    const double x1 = params.lambda1 * t;
    const double e1 = std::exp(-x1);
    double f = params.beta0 + params.beta1 * e1 + params.beta2 * x1 * e1;
    if (params.kind == ModelKind::Svensson) {
        const double x2 = params.lambda2.value_or(0.0) * t;
        f += params.beta3.value_or(0.0) * x2 * std::exp(-x2);
    }
    return f;
}

double spot_rate(const CurveParams& params, double t) {
    check_horizon(t);
    const double x1 = params.lambda1 * t;
    double a1, e1;
    decay_parts(x1, a1, e1);
    double r = params.beta0 + params.beta1 * a1 + params.beta2 * (a1 - e1);
    if (params.kind == ModelKind::Svensson) {
        const double x2 = params.lambda2.value_or(0.0) * t;
        double a2, e2;
        decay_parts(x2, a2, e2);
        r += params.beta3.value_or(0.0) * (a2 - e2);
    }
    return r;
}

std::vector<double> spot_rate_gradient(const CurveParams& params, double t) {
    check_horizon(t);
    const double x1 = params.lambda1 * t;
    double a1, e1;
    decay_parts(x1, a1, e1);
    const double da1 = decay_mean_derivative(x1);

    std::vector<double> g(model_dimension(params.kind), 0.0);
    g[0] = 1.0;
    g[1] = a1;
    g[2] = a1 - e1;
    // Chain rule through x1 = lambda1 * t.
    g[3] = (params.beta1 * da1 + params.beta2 * (da1 + e1)) * t;
    if (params.kind == ModelKind::Svensson) {
        const double x2 = params.lambda2.value_or(0.0) * t;
        double a2, e2;
        decay_parts(x2, a2, e2);
        g[4] = a2 - e2;
        g[5] = params.beta3.value_or(0.0) * (decay_mean_derivative(x2) + e2) * t;
    }
    return g;
}

double LinearInequality::slack(const std::vector<double>& theta) const {
    double s = -constant;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        s += coeffs[i] * theta[i];
    }
    return s;
}

std::vector<LinearInequality> ConstraintSystem::all_inequalities() const {
    std::vector<LinearInequality> out;
    const std::size_t p = dimension();
    for (std::size_t i = 0; i < p; ++i) {
        LinearInequality lower;
        lower.coeffs.assign(p, 0.0);
        lower.coeffs[i] = 1.0;
        lower.constant = bounds[i].lo;
        lower.label = bound_labels[i] + " > " + label_number(bounds[i].lo);
        out.push_back(std::move(lower));

        LinearInequality upper;
        upper.coeffs.assign(p, 0.0);
        upper.coeffs[i] = -1.0;
        upper.constant = -bounds[i].hi;
        upper.label = bound_labels[i] + " < " + label_number(bounds[i].hi);
        out.push_back(std::move(upper));
    }
    out.insert(out.end(), linear.begin(), linear.end());
    return out;
}

bool ConstraintSystem::is_strictly_feasible(const std::vector<double>& theta) const {
    if (theta.size() != dimension()) {
        throw std::invalid_argument("parameter vector has wrong dimension for constraint system");
    }
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (!(theta[i] > bounds[i].lo) || !(theta[i] < bounds[i].hi)) return false;
    }
    for (const auto& li : linear) {
        if (!(li.slack(theta) > 0.0)) return false;
    }
    return true;
}

std::vector<std::string> ConstraintSystem::violations(const std::vector<double>& theta) const {
    if (theta.size() != dimension()) {
        throw std::invalid_argument("parameter vector has wrong dimension for constraint system");
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (!(theta[i] > bounds[i].lo)) {
            out.push_back(bound_labels[i] + " > " + label_number(bounds[i].lo));
        }
        if (!(theta[i] < bounds[i].hi)) {
            out.push_back(bound_labels[i] + " < " + label_number(bounds[i].hi));
        }
    }
    for (const auto& li : linear) {
        if (!(li.slack(theta) > 0.0)) out.push_back(li.label);
    }
    return out;
}

std::vector<double> ConstraintSystem::clip_to_bounds(std::vector<double> theta,
                                                     double eps_fraction) const {
    if (theta.size() != dimension()) {
        throw std::invalid_argument("parameter vector has wrong dimension for constraint system");
    }
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        const double eps = eps_fraction * bounds[i].width();
        theta[i] = std::clamp(theta[i], bounds[i].lo + eps, bounds[i].hi - eps);
    }
    return theta;
}

ConstraintSystem constraint_system(ModelKind kind) {
    ConstraintSystem cs;
    cs.kind = kind;
    const double lam_lo = 1.0 / 300.0;
    const double lam_hi = 12.0;
    if (kind == ModelKind::NelsonSiegel) {
        cs.bounds = {{0.0, 0.25}, {-0.20, 0.20}, {0.0, 0.25}, {lam_lo, lam_hi}};
        cs.bound_labels = {"beta0", "beta1", "beta2", "lambda1"};
        cs.witness = {0.10, -0.05, 0.05, 1.0};
    } else {
        cs.bounds = {{0.0, 0.25}, {-0.20, 0.0}, {0.0, 0.25},
                     {lam_lo, lam_hi}, {0.0, 0.25}, {lam_lo, lam_hi}};
        cs.bound_labels = {"beta0", "beta1", "beta2", "lambda1", "beta3", "lambda2"};
        cs.witness = {0.10, -0.05, 0.05, 1.0, 0.05, 2.0};
    }
    LinearInequality level;
    level.coeffs.assign(cs.dimension(), 0.0);
    level.coeffs[0] = 1.0;
    level.coeffs[1] = 1.0;
    level.constant = 0.0;
    level.label = "beta0 + beta1 > 0";
    cs.linear.push_back(std::move(level));
    return cs;
}

bool is_feasible(const CurveParams& params, const ConstraintSystem& cs,
                 std::vector<std::string>* violation_list) {
    if (params.kind != cs.kind) {
        throw std::invalid_argument("model kind does not match constraint system");
    }
    const auto theta = params.to_vector();
    auto v = cs.violations(theta);
    const bool ok = v.empty();
    if (violation_list) *violation_list = std::move(v);
    return ok;
}

}  // namespace termfit
