#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "termfit/bond_pricing.hpp"
#include "termfit/curve_models.hpp"

namespace termfit {

/// One quoted offer on an instrument's order book.
struct Offer {
    enum class Side { Buy, Sell };
    Side side = Side::Buy;
    double yield = 0.0;   // decimal per annum
    double facial = 0.0;  // currency amount, > 0
};

/// Raised when a spread cannot be formed because one side of the book is
/// empty; callers must exclude the observation.
class SpreadUnavailable : public std::runtime_error {
public:
    explicit SpreadUnavailable(const std::string& what) : std::runtime_error(what) {}
};

/// Absolute gap between the facial-amount-weighted mean sell yield and the
/// weighted mean buy yield. Throws SpreadUnavailable when either side is
/// missing. A zero return (identical weighted quotes) is the caller's
/// degenerate case to floor.
double bid_ask_spread(const std::vector<Offer>& offers);

/// 1 / (spread * (1 + staleness)); the weight each pricing residual gets.
double observation_weight(double spread, int staleness_days);

/// A bond with its observed dirty price and the liquidity/staleness data
/// that weights its residual.
struct BondObservation {
    BondSpec bond;
    CashFlowSchedule schedule;
    double observed_dirty_price = 0.0;
    int staleness_days = 0;  // days since the instrument last traded
    double spread = 0.0;     // > 0
};

/// The estimation data set for one valuation date and one model choice.
struct ObjectiveSpec {
    ModelKind model = ModelKind::NelsonSiegel;
    std::vector<BondObservation> observations;
};

/// The fitting criterion: sum over bonds of squared pricing error divided
/// by spread * (1 + staleness). Evaluable at any parameters; feasibility is
/// the optimizer's concern.
double weighted_sse(const CurveParams& params, const ObjectiveSpec& spec);

/// Analytic gradient of weighted_sse with respect to the flat parameter
/// vector (chain rule through the discounted flows).
std::vector<double> weighted_sse_gradient(const CurveParams& params,
                                          const ObjectiveSpec& spec);

/// Mean absolute relative pricing error across observations, in percent.
double goodness_of_fit(const CurveParams& params, const ObjectiveSpec& spec);

}  // namespace termfit
