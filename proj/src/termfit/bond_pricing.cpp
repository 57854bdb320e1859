#include "termfit/bond_pricing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace termfit {

void validate(const BondSpec& bond) {
    if (!(days_between(bond.issue_date, bond.maturity_date) > 0)) {
        throw std::invalid_argument("bond " + bond.id + ": maturity must be after issue");
    }
    switch (bond.periodicity) {
        case 0: case 1: case 2: case 4: case 12: break;
        default:
            throw std::invalid_argument("bond " + bond.id + ": periodicity must be one of 0,1,2,4,12");
    }
    if (!(bond.face > 0.0)) {
        throw std::invalid_argument("bond " + bond.id + ": face must be positive");
    }
    if (bond.coupon_rate < 0.0) {
        throw std::invalid_argument("bond " + bond.id + ": coupon rate must be nonnegative");
    }
    if (bond.periodicity == 0 && bond.coupon_rate != 0.0) {
        throw std::invalid_argument("bond " + bond.id + ": zero-coupon bond cannot carry a coupon rate");
    }
}

namespace {

// Remaining coupon dates strictly after the valuation date, ascending,
// stepped backward from maturity. The maturity date itself is included
// (it carries the final coupon).
std::vector<Date> remaining_coupon_dates(const BondSpec& bond, const Date& valuation_date) {
    const int step = 12 / bond.periodicity;
    std::vector<Date> dates;
    Date d = bond.maturity_date;
    while (days_between(valuation_date, d) > 0) {
        dates.push_back(d);
        d = add_months(d, -step);
    }
    std::reverse(dates.begin(), dates.end());
    return dates;
}

// Applies the quoted next-coupon date to the generated schedule when it is
// usable: strictly after valuation and earlier than the second remaining
// coupon (the maturity flow is never moved).
void apply_next_coupon_override(const BondSpec& bond, const Date& valuation_date,
                                std::vector<Date>& dates) {
    if (!bond.next_coupon_date || dates.size() < 2) return;
    const Date ncd = *bond.next_coupon_date;
    if (days_between(valuation_date, ncd) <= 0) return;
    if (days_between(ncd, dates[1]) <= 0) return;
    dates[0] = ncd;
}

}  // namespace

CashFlowSchedule build_schedule(const BondSpec& bond, const Date& valuation_date,
                                double day_basis) {
    validate(bond);
    if (days_between(valuation_date, bond.maturity_date) <= 0) {
        throw std::invalid_argument("matured instrument " + bond.id +
                                    " (maturity " + format_date(bond.maturity_date) + ")");
    }
    CashFlowSchedule schedule;
    const auto time_of = [&](const Date& d) {
        return static_cast<double>(days_between(valuation_date, d)) / day_basis;
    };
    if (bond.periodicity == 0) {
        schedule.flows.push_back({time_of(bond.maturity_date), bond.face});
        return schedule;
    }
    auto dates = remaining_coupon_dates(bond, valuation_date);
    apply_next_coupon_override(bond, valuation_date, dates);
    const double coupon = bond.face * bond.coupon_rate / bond.periodicity;
    for (const Date& d : dates) {
        schedule.flows.push_back({time_of(d), coupon});
    }
    schedule.flows.back().amount += bond.face;
    return schedule;
}

double price(const CashFlowSchedule& schedule, const CurveParams& params) {
    if (schedule.flows.empty()) {
        throw std::invalid_argument("cannot price an empty cash-flow schedule");
    }
    double pv = 0.0;
    for (const CashFlow& cf : schedule.flows) {
        pv += cf.amount * std::exp(-spot_rate(params, cf.time) * cf.time);
    }
    return pv;
}

std::vector<double> price_gradient(const CashFlowSchedule& schedule,
                                   const CurveParams& params) {
    if (schedule.flows.empty()) {
        throw std::invalid_argument("cannot price an empty cash-flow schedule");
    }
    std::vector<double> grad(model_dimension(params.kind), 0.0);
    for (const CashFlow& cf : schedule.flows) {
        const double delta = spot_rate(params, cf.time);
        const double disc = cf.amount * std::exp(-delta * cf.time) * (-cf.time);
        const auto dspot = spot_rate_gradient(params, cf.time);
        for (std::size_t i = 0; i < grad.size(); ++i) {
            grad[i] += disc * dspot[i];
        }
    }
    return grad;
}

double accrued_interest(const BondSpec& bond, const Date& valuation_date,
                        double day_basis) {
    validate(bond);
    if (bond.periodicity == 0 || bond.coupon_rate == 0.0) return 0.0;
    auto dates = remaining_coupon_dates(bond, valuation_date);
    apply_next_coupon_override(bond, valuation_date, dates);
    const int step = 12 / bond.periodicity;
    // The accrual period opens at the coupon date preceding the next one,
    // but never before issue (a first coupon accrues from issue).
    Date last_coupon = dates.empty() ? bond.maturity_date : add_months(dates.front(), -step);
    if (days_between(bond.issue_date, last_coupon) < 0) {
        last_coupon = bond.issue_date;
    }
    const long days = std::max(0L, days_between(last_coupon, valuation_date));
    return bond.face * bond.coupon_rate * static_cast<double>(days) / day_basis;
}

}  // namespace termfit
