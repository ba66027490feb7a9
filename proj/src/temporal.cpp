#include "reident/temporal.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace reident {

namespace {

using std::chrono::day;
using std::chrono::days;
using std::chrono::month;
using std::chrono::month_day_last;
using std::chrono::sys_days;
using std::chrono::year;
using std::chrono::year_month_day_last;

sys_days to_days(const Date& d) { return sys_days{d}; }
Date from_days(sys_days sd) { return Date{sd}; }

// Months since year 0, for month-window arithmetic.
long month_index(const YearMonth& ym) { return 12L * ym.year + (ym.month - 1); }
YearMonth month_at(long index) {
    long y = index / 12;
    long m = index % 12;
    if (m < 0) {
        m += 12;
        --y;
    }
    return YearMonth{static_cast<int>(y), static_cast<int>(m) + 1};
}

}  // namespace

int days_in_month(int y, int m) {
    if (m < 1 || m > 12) throw std::invalid_argument("month out of range: " + std::to_string(m));
    year_month_day_last last{year{y}, month_day_last{month{static_cast<unsigned>(m)}}};
    return static_cast<int>(unsigned(last.day()));
}

Date make_date(int y, int m, int d) {
    Date date{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!date.ok()) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
        throw std::invalid_argument(std::string("invalid date: ") + buf);
    }
    return date;
}

std::optional<Date> parse_date(std::string_view iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
    auto num = [&](size_t pos, size_t len, int& out) {
        auto res = std::from_chars(iso.data() + pos, iso.data() + pos + len, out);
        return res.ec == std::errc{} && res.ptr == iso.data() + pos + len;
    };
    int y = 0, m = 0, d = 0;
    if (!num(0, 4, y) || !num(5, 2, m) || !num(8, 2, d)) return std::nullopt;
    Date date{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

std::string format_month(const YearMonth& ym) {
    char buf[12];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", ym.year, ym.month);
    return buf;
}

YearMonth month_of(const Date& d) {
    return YearMonth{static_cast<int>(d.year()), static_cast<int>(unsigned(d.month()))};
}

AdmitWindow AdmitWindow::widened(int slack_days) const {
    if (slack_days < 0) throw std::invalid_argument("slack_days must be non-negative");
    if (slack_days == 0) return *this;
    return AdmitWindow{from_days(to_days(begin) - days{slack_days}),
                       from_days(to_days(end) + days{slack_days})};
}

int AdmitWindow::width_days() const {
    return static_cast<int>((to_days(end) - to_days(begin)).count()) + 1;
}

AdmitWindow admit_window(int discharge_year, int discharge_month, int los_days) {
    if (los_days < 0) throw std::invalid_argument("length of stay must be non-negative");
    Date first = make_date(discharge_year, discharge_month, 1);
    Date last = make_date(discharge_year, discharge_month, days_in_month(discharge_year, discharge_month));
    return AdmitWindow{from_days(to_days(first) - days{los_days}),
                       from_days(to_days(last) - days{los_days})};
}

AdmitWindow year_admit_window(int discharge_year, int los_days) {
    if (los_days < 0) throw std::invalid_argument("length of stay must be non-negative");
    return AdmitWindow{from_days(to_days(make_date(discharge_year, 1, 1)) - days{los_days}),
                       from_days(to_days(make_date(discharge_year, 12, 31)) - days{los_days})};
}

bool in_window(const Date& d, const AdmitWindow& w) {
    sys_days sd = to_days(d);
    return to_days(w.begin) <= sd && sd <= to_days(w.end);
}

int age_months_at(const Date& dob, const Date& ref) {
    if (to_days(dob) > to_days(ref)) throw std::invalid_argument("dob is after reference date");
    int months = 12 * (static_cast<int>(ref.year()) - static_cast<int>(dob.year())) +
                 (static_cast<int>(unsigned(ref.month())) - static_cast<int>(unsigned(dob.month())));
    if (unsigned(ref.day()) < unsigned(dob.day())) --months;
    return months;
}

int age_years_at(const Date& dob, const Date& ref) { return age_months_at(dob, ref) / 12; }

bool MonthWindow::contains(const YearMonth& ym) const {
    return std::find(months.begin(), months.end(), ym) != months.end();
}

MonthWindow birth_month_window(int age_months, const AdmitWindow& w) {
    if (age_months < 0) throw std::invalid_argument("age_months must be non-negative");
    // For a reference day d, a birthdate b satisfies age(b, d) == A in exactly
    // two shapes: b in month (d - A months) with b.day <= d.day, or b in month
    // (d - A - 1 months) with b.day > d.day. The first shape is always
    // feasible (day 1); the second only when that month has more than d.day
    // days.
    std::set<long> indexes;
    for (sys_days sd = to_days(w.begin); sd <= to_days(w.end); sd += days{1}) {
        Date d = from_days(sd);
        long anchor = month_index(month_of(d)) - age_months;
        indexes.insert(anchor);
        YearMonth prev = month_at(anchor - 1);
        if (days_in_month(prev.year, prev.month) > static_cast<int>(unsigned(d.day()))) {
            indexes.insert(anchor - 1);
        }
    }
    MonthWindow out;
    for (long idx : indexes) out.months.push_back(month_at(idx));
    return out;
}

}  // namespace reident
