#include "termfit/dates.hpp"

#include <cstdio>
#include <stdexcept>

namespace termfit {

Date parse_date(const std::string& iso) {
    int y = 0, m = 0, d = 0;
    char tail = '\0';
    if (std::sscanf(iso.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &tail) != 3 ||
        iso.size() != 10) {
        throw std::invalid_argument("malformed date '" + iso + "', expected YYYY-MM-DD");
    }
    const Date date = std::chrono::year{y} / m / d;
    if (!date.ok()) {
        throw std::invalid_argument("impossible calendar date '" + iso + "'");
    }
    return date;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", int(d.year()),
                  unsigned(d.month()), unsigned(d.day()));
    return buf;
}

long days_between(const Date& from, const Date& to) {
    using std::chrono::sys_days;
    return (sys_days{to} - sys_days{from}).count();
}

Date add_months(const Date& d, int months) {
    Date shifted = d + std::chrono::months{months};
    if (!shifted.ok()) {
        shifted = shifted.year() / shifted.month() / std::chrono::last;
    }
    return shifted;
}

}  // namespace termfit
