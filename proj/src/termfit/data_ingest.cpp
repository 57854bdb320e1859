#include "termfit/data_ingest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace termfit {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

class CsvReader {
public:
    CsvReader(const std::string& path, const std::vector<std::string>& required) : path_(path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path);
        std::string line;
        if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file, header expected");
        strip_cr(line);
        auto headers = split_csv_line(line);
        for (std::size_t i = 0; i < headers.size(); ++i) columns_[headers[i]] = i;
        for (const auto& col : required) {
            if (!columns_.count(col)) {
                throw std::runtime_error(path + ": missing column '" + col + "'");
            }
        }
        while (std::getline(in, line)) {
            strip_cr(line);
            if (!line.empty()) rows_.push_back(split_csv_line(line));
        }
    }

    std::size_t row_count() const { return rows_.size(); }

    /// 1-based data row number for messages (header is row 1).
    std::size_t row_number(std::size_t i) const { return i + 2; }

    const std::string& cell(std::size_t row, const std::string& col) const {
        const std::size_t j = columns_.at(col);
        if (j >= rows_[row].size()) {
            throw std::runtime_error(path_ + " row " + std::to_string(row_number(row)) +
                                     ": missing value in column '" + col + "'");
        }
        return rows_[row][j];
    }

    double number(std::size_t row, const std::string& col) const {
        const std::string& s = cell(row, col);
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw std::runtime_error(path_ + " row " + std::to_string(row_number(row)) +
                                     ", column '" + col + "': cannot parse number '" + s + "'");
        }
    }

    long integer(std::size_t row, const std::string& col) const {
        const double v = number(row, col);
        const long n = static_cast<long>(v);
        if (static_cast<double>(n) != v) {
            throw std::runtime_error(path_ + " row " + std::to_string(row_number(row)) +
                                     ", column '" + col + "': expected an integer");
        }
        return n;
    }

    Date date(std::size_t row, const std::string& col) const {
        try {
            return parse_date(cell(row, col));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(path_ + " row " + std::to_string(row_number(row)) +
                                     ", column '" + col + "': " + e.what());
        }
    }

private:
    static void strip_cr(std::string& line) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
    }

    std::string path_;
    std::map<std::string, std::size_t> columns_;
    std::vector<std::vector<std::string>> rows_;
};

const std::vector<std::string> kOperationColumns = {
    "instrument_id", "issuer",         "classification", "isin",
    "currency",      "issue_date",     "maturity_date",  "next_coupon_date",
    "periodicity",   "net_rate",       "rate_type",      "operation_type",
    "operation_date", "nominal_yield", "clean_price",    "transaction_value"};

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::vector<ClosedOperation> parse_closed_operations(
    const std::string& path, const Date& valuation_date,
    std::vector<std::string>* warnings) {
    CsvReader csv(path, kOperationColumns);
    std::vector<ClosedOperation> ops;
    for (std::size_t r = 0; r < csv.row_count(); ++r) {
        ClosedOperation op;
        op.instrument_id = csv.cell(r, "instrument_id");
        op.issuer = csv.cell(r, "issuer");
        op.classification = csv.cell(r, "classification");
        op.isin = csv.cell(r, "isin");
        op.currency = csv.cell(r, "currency");
        op.issue_date = csv.date(r, "issue_date");
        op.maturity_date = csv.date(r, "maturity_date");
        if (!csv.cell(r, "next_coupon_date").empty()) {
            op.next_coupon_date = csv.date(r, "next_coupon_date");
        }
        op.periodicity = static_cast<int>(csv.integer(r, "periodicity"));
        op.net_rate = csv.number(r, "net_rate");
        op.rate_type = csv.cell(r, "rate_type");
        op.operation_type = csv.cell(r, "operation_type");
        op.operation_date = csv.date(r, "operation_date");
        op.nominal_yield = csv.number(r, "nominal_yield");
        op.clean_price = csv.number(r, "clean_price");
        op.transaction_value = csv.number(r, "transaction_value");

        if (op.rate_type == "variable") {
            if (warnings) {
                warnings->push_back(path + " row " + std::to_string(csv.row_number(r)) +
                                    ": dropped variable-rate instrument " + op.instrument_id);
            }
            continue;
        }
        if (op.rate_type != "fixed" && op.rate_type != "zero") {
            throw std::runtime_error(path + " row " + std::to_string(csv.row_number(r)) +
                                     ": unknown rate_type '" + op.rate_type + "'");
        }
        if (!(op.clean_price > 0.0)) {
            throw std::runtime_error(path + " row " + std::to_string(csv.row_number(r)) +
                                     ": clean_price must be positive");
        }
        if (days_between(op.operation_date, valuation_date) < 0) {
            throw std::runtime_error(path + " row " + std::to_string(csv.row_number(r)) +
                                     ": operation date " + format_date(op.operation_date) +
                                     " is after the valuation date");
        }
        ops.push_back(std::move(op));
    }
    return ops;
}

std::vector<OfferRecord> parse_offers(const std::string& path) {
    CsvReader csv(path, {"instrument_id", "side", "yield", "facial"});
    std::vector<OfferRecord> offers;
    for (std::size_t r = 0; r < csv.row_count(); ++r) {
        OfferRecord rec;
        rec.instrument_id = csv.cell(r, "instrument_id");
        const std::string& side = csv.cell(r, "side");
        if (side == "buy") {
            rec.side = Offer::Side::Buy;
        } else if (side == "sell") {
            rec.side = Offer::Side::Sell;
        } else {
            throw std::runtime_error(path + " row " + std::to_string(csv.row_number(r)) +
                                     ": side must be 'buy' or 'sell', got '" + side + "'");
        }
        rec.yield = csv.number(r, "yield");
        rec.facial = csv.number(r, "facial");
        if (!(rec.facial > 0.0)) {
            throw std::runtime_error(path + " row " + std::to_string(csv.row_number(r)) +
                                     ": facial must be positive");
        }
        offers.push_back(std::move(rec));
    }
    return offers;
}

void write_closed_operations(const std::string& path,
                             const std::vector<ClosedOperation>& ops) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (std::size_t i = 0; i < kOperationColumns.size(); ++i) {
        out << (i ? "," : "") << kOperationColumns[i];
    }
    out << "\n";
    for (const auto& op : ops) {
        out << op.instrument_id << ',' << op.issuer << ',' << op.classification << ','
            << op.isin << ',' << op.currency << ',' << format_date(op.issue_date) << ','
            << format_date(op.maturity_date) << ','
            << (op.next_coupon_date ? format_date(*op.next_coupon_date) : "") << ','
            << op.periodicity << ',' << format_number(op.net_rate) << ',' << op.rate_type
            << ',' << op.operation_type << ',' << format_date(op.operation_date) << ','
            << format_number(op.nominal_yield) << ',' << format_number(op.clean_price)
            << ',' << format_number(op.transaction_value) << "\n";
    }
}

void write_offers(const std::string& path, const std::vector<OfferRecord>& offers) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "instrument_id,side,yield,facial\n";
    for (const auto& o : offers) {
        out << o.instrument_id << ','
            << (o.side == Offer::Side::Buy ? "buy" : "sell") << ','
            << format_number(o.yield) << ',' << format_number(o.facial) << "\n";
    }
}

std::vector<ClosedOperation> dedupe_last(const std::vector<ClosedOperation>& ops) {
    std::vector<ClosedOperation> result;
    std::unordered_map<std::string, std::size_t> position;
    for (const auto& op : ops) {
        auto it = position.find(op.instrument_id);
        if (it == position.end()) {
            position.emplace(op.instrument_id, result.size());
            result.push_back(op);
        } else if (days_between(result[it->second].operation_date, op.operation_date) >= 0) {
            result[it->second] = op;  // later date, or same date and later row
        }
    }
    return result;
}

IngestResult build_observations(const std::vector<ClosedOperation>& ops,
                                const std::vector<OfferRecord>& offers,
                                const Date& valuation_date,
                                const IngestConfig& config) {
    IngestResult result;
    std::unordered_map<std::string, std::vector<Offer>> book;
    for (const auto& rec : offers) {
        book[rec.instrument_id].push_back({rec.side, rec.yield, rec.facial});
    }

    for (const auto& op : ops) {
        if (days_between(valuation_date, op.maturity_date) <= 0) {
            result.exclusions.push_back({op.instrument_id, "matured"});
            continue;
        }
        BondObservation obs;
        obs.bond.id = op.instrument_id;
        obs.bond.issue_date = op.issue_date;
        obs.bond.maturity_date = op.maturity_date;
        obs.bond.next_coupon_date = op.next_coupon_date;
        obs.bond.periodicity = op.periodicity;
        obs.bond.coupon_rate = op.periodicity == 0 ? 0.0 : op.net_rate;
        obs.bond.face = config.face;
        obs.bond.currency = op.currency;

        auto it = book.find(op.instrument_id);
        try {
            obs.spread = bid_ask_spread(it == book.end() ? std::vector<Offer>{} : it->second);
        } catch (const SpreadUnavailable& e) {
            result.exclusions.push_back({op.instrument_id, e.what()});
            continue;
        }
        if (obs.spread == 0.0) {
            obs.spread = 1e-6;
            result.warnings.push_back("instrument " + op.instrument_id +
                                      ": degenerate zero spread floored at 1e-6");
        }
        obs.staleness_days = static_cast<int>(days_between(op.operation_date, valuation_date));
        obs.schedule = build_schedule(obs.bond, valuation_date, config.day_basis);
        obs.observed_dirty_price =
            op.clean_price * config.face / config.quote_basis +
            accrued_interest(obs.bond, valuation_date, config.day_basis);
        result.observations.push_back(std::move(obs));
    }

    if (config.weight_cap) {
        const double cap = *config.weight_cap;
        for (;;) {
            double total = 0.0;
            for (const auto& obs : result.observations) {
                total += observation_weight(obs.spread, obs.staleness_days);
            }
            std::size_t worst = result.observations.size();
            double worst_share = 0.0;
            for (std::size_t i = 0; i < result.observations.size(); ++i) {
                const auto& obs = result.observations[i];
                const double share = observation_weight(obs.spread, obs.staleness_days) / total;
                if (share > worst_share) {
                    worst_share = share;
                    worst = i;
                }
            }
            if (worst == result.observations.size() || worst_share <= cap) break;
            char reason[96];
            std::snprintf(reason, sizeof(reason), "weight share %.6g exceeds cap %.6g",
                          worst_share, cap);
            result.exclusions.push_back({result.observations[worst].bond.id, reason});
            result.observations.erase(result.observations.begin() +
                                      static_cast<std::ptrdiff_t>(worst));
        }
    }
    return result;
}

}  // namespace termfit
