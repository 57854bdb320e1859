#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace termfit {

enum class ModelKind { NelsonSiegel, Svensson };

/// Number of free parameters: 4 for Nelson-Siegel, 6 for Svensson.
std::size_t model_dimension(ModelKind kind);
std::string model_name(ModelKind kind);
ModelKind model_from_name(const std::string& name);

/// Parameters of a parsimonious yield-curve model. Rates are decimal
/// fractions per annum under continuous compounding, times in years.
struct CurveParams {
    ModelKind kind = ModelKind::NelsonSiegel;
    double beta0 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double lambda1 = 1.0;
    std::optional<double> beta3;
    std::optional<double> lambda2;

    /// Flat-vector layout (beta0, beta1, beta2, lambda1[, beta3, lambda2]).
    std::vector<double> to_vector() const;
    static CurveParams from_vector(ModelKind kind, const std::vector<double>& theta);
};

/// (1 - e^-x)/x extended continuously with value 1 at x = 0.
double decay_mean(double x);
/// d/dx of decay_mean, extended with value -1/2 at x = 0.
double decay_mean_derivative(double x);

/// Discrete forward rate implied by two spot rates: (t*dt - s*ds)/(t - s).
/// Requires 0 < s < t.
double discrete_forward(double delta_t, double t, double delta_s, double s);

/// Instantaneous forward rate at horizon t >= 0 (analytic limit at t = 0).
double forward_rate(const CurveParams& params, double t);

/// Spot (zero-coupon) rate at horizon t >= 0; the integral mean of the
/// forward curve, with the analytic limit beta0 + beta1 at t = 0.
double spot_rate(const CurveParams& params, double t);

/// Gradient of spot_rate with respect to the flat parameter vector.
std::vector<double> spot_rate_gradient(const CurveParams& params, double t);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

/// One linear constraint coeffs'theta - constant >= 0 (strict in feasibility
/// checks).
struct LinearInequality {
    std::vector<double> coeffs;
    double constant = 0.0;
    std::string label;

    double slack(const std::vector<double>& theta) const;
};

/// Box bounds plus extra linear inequalities defining the open feasible
/// region for a model's parameters.
struct ConstraintSystem {
    ModelKind kind = ModelKind::NelsonSiegel;
    std::vector<Interval> bounds;
    std::vector<std::string> bound_labels;
    std::vector<LinearInequality> linear;
    /// A strictly interior point, kept as proof the region is nonempty and
    /// as a repair anchor for optimizers.
    std::vector<double> witness;

    std::size_t dimension() const { return bounds.size(); }

    /// Every constraint as a linear inequality: each bound contributes its
    /// two faces, then the genuine linear ones follow.
    std::vector<LinearInequality> all_inequalities() const;

    bool is_strictly_feasible(const std::vector<double>& theta) const;
    std::vector<std::string> violations(const std::vector<double>& theta) const;

    /// Clamps theta into the box shrunk inward by eps_fraction of each
    /// width, keeping barrier arguments strictly interior.
    std::vector<double> clip_to_bounds(std::vector<double> theta,
                                       double eps_fraction = 1e-9) const;
};

/// The feasibility system used when fitting: betas in (0, 0.25) (beta1 in
/// (-0.20, 0.20) for Nelson-Siegel, (-0.20, 0) for Svensson), decays in
/// (1/300, 12), and beta0 + beta1 > 0.
ConstraintSystem constraint_system(ModelKind kind);

/// Strict feasibility of params against cs; throws on model mismatch.
bool is_feasible(const CurveParams& params, const ConstraintSystem& cs,
                 std::vector<std::string>* violation_list = nullptr);

}  // namespace termfit
