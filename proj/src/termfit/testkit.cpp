#include "termfit/testkit.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "termfit/rng.hpp"

namespace termfit {

namespace {

const double kTenors[] = {0.25, 0.35, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0,
                          3.5,  4.0,  4.5, 5.0,  5.5, 6.0, 6.5, 7.0, 8.0,
                          9.0,  10.0, 11.0, 12.0, 13.0, 14.0, 15.0};

Date shift_days(const Date& d, long days) {
    using std::chrono::sys_days;
    return Date{sys_days{d} + std::chrono::days{days}};
}

}  // namespace

SyntheticInstance generate_instance(const CurveParams& true_params,
                                    std::uint64_t seed, double noise) {
    const ConstraintSystem cs = constraint_system(true_params.kind);
    if (!is_feasible(true_params, cs)) {
        throw std::invalid_argument("instance generation needs feasible true parameters");
    }
    SyntheticInstance instance;
    instance.true_params = true_params;
    instance.valuation_date = parse_date("2015-03-17");
    instance.seed = seed;
    instance.noise = noise;
    instance.spec.model = true_params.kind;

    RngStream rng(seed);
    int counter = 0;
    for (double tenor : kTenors) {
        BondObservation obs;
        BondSpec& bond = obs.bond;
        char id[16];
        std::snprintf(id, sizeof(id), "SYN%02d", ++counter);
        bond.id = id;
        bond.issue_date = parse_date("2014-01-02");
        bond.maturity_date =
            shift_days(instance.valuation_date, std::lround(tenor * 365.0));
        bond.face = 100.0;
        bond.currency = "BOB";
        if (tenor < 1.0) {
            bond.periodicity = 0;
            bond.coupon_rate = 0.0;
        } else {
            bond.periodicity = 2;
            bond.coupon_rate = std::round(rng.uniform_in(0.02, 0.10) * 1e4) / 1e4;
        }
        obs.schedule = build_schedule(bond, instance.valuation_date);
        obs.spread = rng.uniform_in(0.001, 0.02);
        obs.staleness_days = static_cast<int>(rng.uniform_index(6));
        const double z = rng.normal();
        obs.observed_dirty_price = price(obs.schedule, true_params) + noise * z;
        instance.spec.observations.push_back(std::move(obs));
    }
    return instance;
}

void instance_to_csv(const SyntheticInstance& instance,
                     const std::string& operations_path,
                     const std::string& offers_path) {
    std::vector<ClosedOperation> ops;
    std::vector<OfferRecord> offers;
    for (const auto& obs : instance.spec.observations) {
        ClosedOperation op;
        op.instrument_id = obs.bond.id;
        op.issuer = "TGN";
        op.classification = "treasury";
        op.isin = "BO" + obs.bond.id;
        op.currency = obs.bond.currency;
        op.issue_date = obs.bond.issue_date;
        op.maturity_date = obs.bond.maturity_date;
        op.next_coupon_date = obs.bond.next_coupon_date;
        op.periodicity = obs.bond.periodicity;
        op.net_rate = obs.bond.coupon_rate;
        op.rate_type = obs.bond.periodicity == 0 ? "zero" : "fixed";
        op.operation_type = "secondary";
        op.operation_date = shift_days(instance.valuation_date, -obs.staleness_days);
        const double tenor = obs.schedule.flows.back().time;
        op.nominal_yield = spot_rate(instance.true_params, tenor);
        op.clean_price = obs.observed_dirty_price -
                         accrued_interest(obs.bond, instance.valuation_date);
        op.transaction_value = obs.bond.face;
        ops.push_back(std::move(op));

        // Symmetric offers around the nominal yield reproduce the spread
        // exactly: one buy at y - H/2, one sell at y + H/2.
        offers.push_back({obs.bond.id, Offer::Side::Buy,
                          op.nominal_yield - obs.spread / 2.0, 1000.0});
        offers.push_back({obs.bond.id, Offer::Side::Sell,
                          op.nominal_yield + obs.spread / 2.0, 1000.0});
    }
    write_closed_operations(operations_path, ops);
    write_offers(offers_path, offers);
}

double oracle_price(const CashFlowSchedule& schedule, const CurveParams& params) {
    double pv = 0.0;
    for (const CashFlow& cf : schedule.flows) {
        const double t = cf.time;
        const double x1 = params.lambda1 * t;
        const double b1 = (1.0 - std::exp(-x1)) / x1;
        double delta = params.beta0 + params.beta1 * b1 +
                       params.beta2 * (b1 - std::exp(-x1));
        if (params.kind == ModelKind::Svensson) {
            const double x2 = params.lambda2.value_or(0.0) * t;
            const double b2 = (1.0 - std::exp(-x2)) / x2;
            delta += params.beta3.value_or(0.0) * (b2 - std::exp(-x2));
        }
        pv += cf.amount * std::exp(-delta * t);
    }
    return pv;
}

double oracle_wsse(const CurveParams& params, const ObjectiveSpec& spec) {
    double total = 0.0;
    for (const BondObservation& obs : spec.observations) {
        const double model_price = oracle_price(obs.schedule, params);
        const double residual = obs.observed_dirty_price - model_price;
        const double weight = 1.0 / (obs.spread * (1.0 + obs.staleness_days));
        total += residual * residual * weight;
    }
    return total;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa,
                double b, double fb, double m, double fm, double whole,
                double tol, int depth) {
    const double lm = (a + m) / 2.0, rm = (m + b) / 2.0;
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
    if (!(b > a)) throw std::invalid_argument("integration needs b > a");
    const double m = (a + b) / 2.0;
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = simpson(a, fa, b, fb, fm);
    return adaptive(f, a, fa, b, fb, m, fm, whole, tol, 50);
}

bool is_symmetric_positive_definite(const Matrix& m, double symmetry_tol) {
    const std::size_t n = m.n;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(m.at(i, j) - m.at(j, i)) > symmetry_tol) return false;
        }
    }
    // Cholesky succeeds exactly for positive definite matrices.
    Matrix l(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = m.at(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
            if (i == j) {
                if (!(s > 0.0)) return false;
                l.at(i, i) = std::sqrt(s);
            } else {
                l.at(i, j) = s / l.at(j, j);
            }
        }
    }
    return true;
}

}  // namespace termfit
