#pragma once

#include <optional>
#include <string>
#include <vector>

#include "termfit/bond_pricing.hpp"
#include "termfit/dates.hpp"
#include "termfit/objective.hpp"

namespace termfit {

/// One row of the book of closed operations (one completed trade).
struct ClosedOperation {
    std::string instrument_id;
    std::string issuer;
    std::string classification;
    std::string isin;
    std::string currency;
    Date issue_date{};
    Date maturity_date{};
    std::optional<Date> next_coupon_date;
    int periodicity = 0;
    double net_rate = 0.0;
    std::string rate_type;  // "fixed" or "zero"; "variable" rows are dropped at parse
    std::string operation_type;
    Date operation_date{};
    double nominal_yield = 0.0;
    double clean_price = 0.0;  // per 100 of face
    double transaction_value = 0.0;
};

/// One row of the book of buy and sell offers.
struct OfferRecord {
    std::string instrument_id;
    Offer::Side side = Offer::Side::Buy;
    double yield = 0.0;
    double facial = 0.0;
};

/// Reads closed_operations.csv (headers:
/// instrument_id,issuer,classification,isin,currency,issue_date,
/// maturity_date,next_coupon_date,periodicity,net_rate,rate_type,
/// operation_type,operation_date,nominal_yield,clean_price,
/// transaction_value). Variable-rate rows are dropped with a note in
/// `warnings`; malformed rows or missing columns throw std::runtime_error
/// naming the row/column. Operations dated after `valuation_date` are
/// rejected.
std::vector<ClosedOperation> parse_closed_operations(
    const std::string& path, const Date& valuation_date,
    std::vector<std::string>* warnings = nullptr);

/// Reads offers.csv (headers: instrument_id,side,yield,facial; side is
/// "buy" or "sell").
std::vector<OfferRecord> parse_offers(const std::string& path);

/// Counterparts used by fixtures and the round-trip check.
void write_closed_operations(const std::string& path,
                             const std::vector<ClosedOperation>& ops);
void write_offers(const std::string& path, const std::vector<OfferRecord>& offers);

/// Keeps, per instrument, only the record with the latest operation date
/// (later row wins date ties); output keeps first-appearance order.
std::vector<ClosedOperation> dedupe_last(const std::vector<ClosedOperation>& ops);

struct Exclusion {
    std::string instrument_id;
    std::string reason;
};

struct IngestConfig {
    double face = 100.0;        // face amount each price quote refers to
    double quote_basis = 100.0; // prices are per this much face
    double day_basis = 365.0;
    /// When set, observations whose weight share exceeds the cap are
    /// excluded iteratively, largest share first.
    std::optional<double> weight_cap;
};

struct IngestResult {
    std::vector<BondObservation> observations;
    std::vector<Exclusion> exclusions;
    std::vector<std::string> warnings;
};

/// Assembles fit-ready observations from deduplicated operations and the
/// offer book: dirty price = clean * face/quote_basis + accrued interest,
/// staleness = days since the trade, spread from the instrument's offers.
/// Instruments without both offer sides, or matured ones, are excluded
/// with a machine-readable reason. Zero spreads are floored at 1e-6 with a
/// warning.
IngestResult build_observations(const std::vector<ClosedOperation>& ops,
                                const std::vector<OfferRecord>& offers,
                                const Date& valuation_date,
                                const IngestConfig& config = {});

}  // namespace termfit
