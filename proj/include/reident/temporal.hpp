#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace reident {

// Civil dates only (proleptic Gregorian, no timezones).
using Date = std::chrono::year_month_day;

int days_in_month(int year, int month);
Date make_date(int year, int month, int day);  // throws std::invalid_argument
std::optional<Date> parse_date(std::string_view iso);  // strict YYYY-MM-DD
std::string format_date(const Date& d);

/// A (year, month) pair, comparable in calendar order.
struct YearMonth {
    int year = 0;
    int month = 0;  // 1..12
    auto operator<=>(const YearMonth&) const = default;
};

std::string format_month(const YearMonth& ym);
YearMonth month_of(const Date& d);

/// Inclusive calendar-date range. Windows produced by admit_window() span
/// exactly one month's worth of days; widening and single-day ranges are
/// also representable.
struct AdmitWindow {
    Date begin;
    Date end;

    AdmitWindow widened(int slack_days) const;
    int width_days() const;  // end - begin + 1
};

/// Possible admission dates for a record discharged in the given month
/// after los_days in hospital: [first-of-month - los, last-of-month - los].
AdmitWindow admit_window(int discharge_year, int discharge_month, int los_days);

/// Admission range when only the discharge year is known (year-only
/// generalized records): [Jan 1 - los, Dec 31 - los].
AdmitWindow year_admit_window(int discharge_year, int los_days);

bool in_window(const Date& d, const AdmitWindow& w);

/// Whole months elapsed from dob to ref. Partial months are decided by
/// day-of-month comparison: the month count is not incremented until the
/// day-of-month reaches dob's. Throws std::invalid_argument if dob > ref.
int age_months_at(const Date& dob, const Date& ref);

int age_years_at(const Date& dob, const Date& ref);

/// Contiguous run of calendar months, earliest first.
struct MonthWindow {
    std::vector<YearMonth> months;

    bool contains(const YearMonth& ym) const;
};

/// All months that could contain the birthdate of a person whose recorded
/// age in months equals age_months, when the age was measured on some day
/// inside the window. Exact; the result is contiguous and spans at most
/// three calendar months when the window touches at most two, which a
/// 31-day window starting on day 30 or 31 and straddling February can
/// exceed: such windows admit four candidate months.
MonthWindow birth_month_window(int age_months, const AdmitWindow& w);

}  // namespace reident
