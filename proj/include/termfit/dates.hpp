#pragma once

#include <chrono>
#include <string>

namespace termfit {

using Date = std::chrono::year_month_day;

/// Parses an ISO-8601 calendar date (YYYY-MM-DD). Throws std::invalid_argument
/// on malformed input or an impossible date.
Date parse_date(const std::string& iso);

std::string format_date(const Date& d);

/// Signed day count from `from` to `to` (positive when `to` is later).
long days_between(const Date& from, const Date& to);

/// Shifts by calendar months, clamping to the last day of the target month
/// (e.g. 31 Jan + 1 month = 28/29 Feb).
Date add_months(const Date& d, int months);

}  // namespace termfit
