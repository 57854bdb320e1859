#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "termfit/data_ingest.hpp"
#include "termfit/local_search.hpp"
#include "termfit/objective.hpp"

namespace termfit {

/// A fully synthetic estimation data set priced from known parameters, so
/// tests can check that optimizers recover what generated the data.
struct SyntheticInstance {
    CurveParams true_params;
    Date valuation_date{};
    ObjectiveSpec spec;
    std::uint64_t seed = 0;
    double noise = 0.0;
};

/// Builds the 25-bond instance (tenors 0.25 to 15 years, zero-coupon below
/// one year, semiannual coupons above): observed dirty prices are exact
/// model prices plus noise * standard normal, spreads are drawn
/// U(0.001, 0.02) and staleness uniformly from {0,...,5}. Deterministic
/// given (true_params, seed, noise).
SyntheticInstance generate_instance(const CurveParams& true_params,
                                    std::uint64_t seed, double noise);

/// Serializes the instance through the ingestion file schemas so the full
/// pipeline can be driven end to end from files.
void instance_to_csv(const SyntheticInstance& instance,
                     const std::string& operations_path,
                     const std::string& offers_path);

/// Naive per-flow present value: spot rates assembled inline from the raw
/// closed forms, no shared helpers with the library implementation.
double oracle_price(const CashFlowSchedule& schedule, const CurveParams& params);

/// Naive double loop over bonds and flows computing the weighted
/// least-squares criterion through oracle_price only.
double oracle_wsse(const CurveParams& params, const ObjectiveSpec& spec);

/// Adaptive Simpson quadrature to `tol` absolute error.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol);

/// True when the matrix admits a Cholesky factorization, i.e. is symmetric
/// positive definite up to the given symmetry tolerance.
bool is_symmetric_positive_definite(const Matrix& m, double symmetry_tol = 1e-12);

}  // namespace termfit
