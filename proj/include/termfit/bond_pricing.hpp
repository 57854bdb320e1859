#pragma once

#include <optional>
#include <string>
#include <vector>

#include "termfit/curve_models.hpp"
#include "termfit/dates.hpp"

namespace termfit {

/// A fixed-coupon or zero-coupon bond. periodicity is payments per year
/// (0 means zero-coupon); coupon_rate is the annual net rate as a decimal.
struct BondSpec {
    std::string id;
    Date issue_date{};
    Date maturity_date{};
    /// When known from the data it overrides the generated first coupon date.
    std::optional<Date> next_coupon_date;
    double coupon_rate = 0.0;
    int periodicity = 0;
    double face = 100.0;
    std::string currency = "BOB";
};

/// Throws std::invalid_argument when a BondSpec breaks its invariants
/// (ordering of dates, periodicity in {0,1,2,4,12}, face > 0, coupon vs
/// periodicity coherence).
void validate(const BondSpec& bond);

struct CashFlow {
    double time = 0.0;    // years from the valuation date
    double amount = 0.0;  // currency units
};

/// Remaining cash flows, times strictly increasing; the last flow carries
/// the face amount.
struct CashFlowSchedule {
    std::vector<CashFlow> flows;
};

/// Remaining flows of `bond` seen from `valuation_date`, coupon dates
/// generated backward from maturity at 12/periodicity month steps; times
/// are day counts divided by `day_basis`. Throws on matured instruments.
CashFlowSchedule build_schedule(const BondSpec& bond, const Date& valuation_date,
                                double day_basis = 365.0);

/// Present value: sum of amount * exp(-spot_rate(t) * t) over the flows.
double price(const CashFlowSchedule& schedule, const CurveParams& params);

/// Gradient of price with respect to the flat parameter vector.
std::vector<double> price_gradient(const CashFlowSchedule& schedule,
                                   const CurveParams& params);

/// Coupon interest accumulated since the last coupon date (0 for
/// zero-coupon bonds): face * coupon_rate * days / day_basis.
double accrued_interest(const BondSpec& bond, const Date& valuation_date,
                        double day_basis = 365.0);

}  // namespace termfit
