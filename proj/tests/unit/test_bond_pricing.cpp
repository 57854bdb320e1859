#include "termfit/bond_pricing.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "termfit/testkit.hpp"

using namespace termfit;

namespace {

BondSpec semiannual(const char* issue, const char* maturity, double rate) {
    BondSpec b;
    b.id = "B";
    b.issue_date = parse_date(issue);
    b.maturity_date = parse_date(maturity);
    b.coupon_rate = rate;
    b.periodicity = 2;
    return b;
}

BondSpec zero(const char* issue, const char* maturity) {
    BondSpec b;
    b.id = "Z";
    b.issue_date = parse_date(issue);
    b.maturity_date = parse_date(maturity);
    b.coupon_rate = 0.0;
    b.periodicity = 0;
    return b;
}

CurveParams flat_curve(double r) {
    CurveParams p;
    p.kind = ModelKind::NelsonSiegel;
    p.beta0 = r;
    p.beta1 = 0.0;
    p.beta2 = 0.0;
    p.lambda1 = 1.0;
    return p;
}

}  // namespace

TEST_CASE("validate enforces bond invariants") {
    auto ok = semiannual("2014-01-15", "2019-01-15", 0.045);
    CHECK_NOTHROW(validate(ok));

    auto bad = ok;
    bad.maturity_date = parse_date("2013-01-15");
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    bad = ok;
    bad.periodicity = 3;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    bad = ok;
    bad.face = 0.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    // a coupon rate with no periodicity is incoherent
    bad = ok;
    bad.periodicity = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("zero-coupon schedule is a single face payment") {
    auto b = zero("2014-06-01", "2016-06-01");
    auto s = build_schedule(b, parse_date("2015-06-01"));
    REQUIRE(s.flows.size() == 1);
    CHECK(s.flows[0].amount == 100.0);
    CHECK(s.flows[0].time == doctest::Approx(366.0 / 365.0).epsilon(1e-15));
}

TEST_CASE("nine months to maturity, semiannual: two flows remain") {
    // maturity 2015-12-15, valuation 2015-03-15: coupons 2015-06-15 (92d)
    // and 2015-12-15 (275d) remain; 4.5% semiannual on face 100 pays 2.25.
    auto b = semiannual("2010-12-15", "2015-12-15", 0.045);
    auto s = build_schedule(b, parse_date("2015-03-15"));
    REQUIRE(s.flows.size() == 2);
    CHECK(s.flows[0].time == doctest::Approx(92.0 / 365.0).epsilon(1e-15));
    CHECK(s.flows[0].amount == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(s.flows[1].time == doctest::Approx(275.0 / 365.0).epsilon(1e-15));
    CHECK(s.flows[1].amount == doctest::Approx(102.25).epsilon(1e-15));
}

TEST_CASE("schedule times are strictly increasing and end with the face") {
    auto b = semiannual("2012-02-29", "2024-02-29", 0.06);
    auto s = build_schedule(b, parse_date("2015-03-17"));
    REQUIRE(!s.flows.empty());
    for (std::size_t i = 1; i < s.flows.size(); ++i) {
        CHECK(s.flows[i].time > s.flows[i - 1].time);
    }
    CHECK(s.flows.back().amount == doctest::Approx(103.0).epsilon(1e-15));
}

TEST_CASE("a coupon paying today is not part of the remaining schedule") {
    auto b = semiannual("2010-12-15", "2015-12-15", 0.045);
    auto s = build_schedule(b, parse_date("2015-06-15"));
    REQUIRE(s.flows.size() == 1);  // only maturity remains
    CHECK(s.flows[0].amount == doctest::Approx(102.25).epsilon(1e-15));
}

TEST_CASE("matured bonds cannot be scheduled") {
    auto b = zero("2010-01-01", "2014-01-01");
    CHECK_THROWS_AS(build_schedule(b, parse_date("2015-01-01")), std::invalid_argument);
    CHECK_THROWS_AS(build_schedule(b, parse_date("2014-01-01")), std::invalid_argument);
}

TEST_CASE("next coupon date override shifts only the first coupon") {
    auto b = semiannual("2010-12-15", "2015-12-15", 0.045);
    b.next_coupon_date = parse_date("2015-07-01");
    auto s = build_schedule(b, parse_date("2015-03-15"));
    REQUIRE(s.flows.size() == 2);
    CHECK(s.flows[0].time == doctest::Approx(108.0 / 365.0).epsilon(1e-15));
    CHECK(s.flows[1].time == doctest::Approx(275.0 / 365.0).epsilon(1e-15));
}

TEST_CASE("one-year zero at 5% flat prices at 100 e^-0.05") {
    // 2014-03-17 to 2015-03-17 spans exactly 365 days (no leap day)
    auto b = zero("2013-06-01", "2015-03-17");
    auto s = build_schedule(b, parse_date("2014-03-17"));
    REQUIRE(s.flows.size() == 1);
    REQUIRE(s.flows[0].time == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(price(s, flat_curve(0.05)) ==
          doctest::Approx(100.0 * std::exp(-0.05)).epsilon(1e-15));
    CHECK(price(s, flat_curve(0.05)) == doctest::Approx(95.1229424500714).epsilon(1e-12));
}

TEST_CASE("price at a zero curve is the undiscounted flow sum") {
    auto b = semiannual("2012-01-10", "2020-01-10", 0.08);
    auto s = build_schedule(b, parse_date("2015-03-17"));
    double total = 0.0;
    for (const auto& f : s.flows) total += f.amount;
    CurveParams p = flat_curve(0.0);
    // beta0 = 0 sits on the constraint boundary; the pricer itself has no
    // feasibility opinion, so the flat-zero curve is fine here.
    CHECK(price(s, p) == doctest::Approx(total).epsilon(1e-15));
}

TEST_CASE("price decreases when the curve shifts up") {
    auto b = semiannual("2012-01-10", "2022-01-10", 0.05);
    auto s = build_schedule(b, parse_date("2015-03-17"));
    double lo = price(s, flat_curve(0.02));
    double mid = price(s, flat_curve(0.05));
    double hi = price(s, flat_curve(0.09));
    CHECK(lo > mid);
    CHECK(mid > hi);
}

TEST_CASE("price matches the independent oracle to 1e-12") {
    auto b = semiannual("2011-05-20", "2021-05-20", 0.0625);
    auto s = build_schedule(b, parse_date("2015-03-17"));
    CurveParams p;
    p.kind = ModelKind::Svensson;
    p.beta0 = 0.08;
    p.beta1 = -0.03;
    p.beta2 = 0.05;
    p.lambda1 = 0.6;
    p.beta3 = 0.04;
    p.lambda2 = 2.5;
    double mine = price(s, p);
    double oracle = oracle_price(s, p);
    CHECK(std::abs(mine - oracle) / (1.0 + std::abs(oracle)) < 1e-12);
}

TEST_CASE("price gradient matches central differences") {
    auto b = semiannual("2011-05-20", "2021-05-20", 0.0625);
    auto s = build_schedule(b, parse_date("2015-03-17"));
    CurveParams p;
    p.kind = ModelKind::NelsonSiegel;
    p.beta0 = 0.07;
    p.beta1 = -0.02;
    p.beta2 = 0.06;
    p.lambda1 = 0.45;
    auto grad = price_gradient(s, p);
    auto theta = p.to_vector();
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double h = 1e-6 * (1.0 + std::abs(theta[i]));
        auto up = theta, dn = theta;
        up[i] += h;
        dn[i] -= h;
        double fd = (price(s, CurveParams::from_vector(p.kind, up)) -
                     price(s, CurveParams::from_vector(p.kind, dn))) /
                    (2 * h);
        CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("accrued interest counts days since the last coupon") {
    // valuation 73 days after the last coupon: 100 * 0.10 * 73/365 = 2.
    auto b = semiannual("2014-12-01", "2019-12-01", 0.10);
    auto s = accrued_interest(b, parse_date("2015-02-12"));
    CHECK(s == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("accrued interest is zero on a coupon date and for zeros") {
    auto b = semiannual("2014-12-01", "2019-12-01", 0.10);
    CHECK(accrued_interest(b, parse_date("2015-06-01")) == 0.0);
    auto z = zero("2014-12-01", "2019-12-01");
    CHECK(accrued_interest(z, parse_date("2015-02-12")) == 0.0);
}

TEST_CASE("accrued interest respects the day basis") {
    auto b = semiannual("2014-12-01", "2019-12-01", 0.10);
    CHECK(accrued_interest(b, parse_date("2015-02-12"), 360.0) ==
          doctest::Approx(100.0 * 0.10 * 73.0 / 360.0).epsilon(1e-15));
}
