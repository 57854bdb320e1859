#include "termfit/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace termfit {

double bid_ask_spread(const std::vector<Offer>& offers) {
    double buy_yield_sum = 0.0, buy_facial = 0.0;
    double sell_yield_sum = 0.0, sell_facial = 0.0;
    for (const Offer& o : offers) {
        if (!(o.facial > 0.0)) {
            throw std::invalid_argument("offer facial amount must be positive");
        }
        if (o.side == Offer::Side::Buy) {
            buy_yield_sum += o.yield * o.facial;
            buy_facial += o.facial;
        } else {
            sell_yield_sum += o.yield * o.facial;
            sell_facial += o.facial;
        }
    }
    if (buy_facial == 0.0 && sell_facial == 0.0) {
        throw SpreadUnavailable("no offers");
    }
    if (buy_facial == 0.0) throw SpreadUnavailable("no buy offers");
    if (sell_facial == 0.0) throw SpreadUnavailable("no sell offers");
    return std::abs(sell_yield_sum / sell_facial - buy_yield_sum / buy_facial);
}

double observation_weight(double spread, int staleness_days) {
    if (!(spread > 0.0)) {
        throw std::domain_error("observation weight needs a positive spread");
    }
    if (staleness_days < 0) {
        throw std::domain_error("staleness cannot be negative");
    }
    return 1.0 / (spread * (1.0 + staleness_days));
}

namespace {

void check_model(const CurveParams& params, const ObjectiveSpec& spec) {
    if (params.kind != spec.model) {
        throw std::invalid_argument("parameter model does not match the estimation data set");
    }
}

}  // namespace

double weighted_sse(const CurveParams& params, const ObjectiveSpec& spec) {
    check_model(params, spec);
    double total = 0.0;
    for (const BondObservation& obs : spec.observations) {
        const double residual = obs.observed_dirty_price - price(obs.schedule, params);
        total += residual * residual * observation_weight(obs.spread, obs.staleness_days);
    }
    return total;
}

std::vector<double> weighted_sse_gradient(const CurveParams& params,
                                          const ObjectiveSpec& spec) {
    check_model(params, spec);
    std::vector<double> grad(model_dimension(params.kind), 0.0);
    for (const BondObservation& obs : spec.observations) {
        const double w = observation_weight(obs.spread, obs.staleness_days);
        const double residual = obs.observed_dirty_price - price(obs.schedule, params);
        const auto dprice = price_gradient(obs.schedule, params);
        // d/dθ [w(Pr - P̃r(θ))²] = -2w(Pr - P̃r) dP̃r/dθ
        const double scale = -2.0 * w * residual;
        for (std::size_t i = 0; i < grad.size(); ++i) {
            grad[i] += scale * dprice[i];
        }
    }
    return grad;
}

double goodness_of_fit(const CurveParams& params, const ObjectiveSpec& spec) {
    check_model(params, spec);
    if (spec.observations.empty()) {
        throw std::invalid_argument("goodness of fit needs at least one observation");
    }
    double sum = 0.0;
    for (const BondObservation& obs : spec.observations) {
        const double p = price(obs.schedule, params);
        sum += std::abs(obs.observed_dirty_price - p) / obs.observed_dirty_price;
    }
    return 100.0 * sum / static_cast<double>(spec.observations.size());
}

}  // namespace termfit
