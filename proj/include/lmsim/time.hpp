#pragma once

#include <cstdint>

namespace lmsim {

// Days are the smallest unit of simulated time. Months and years are
// derived on a regular grid: 30-day months, 360-day years, so that the
// Month and Year ticks land exactly on Day ticks.
inline constexpr int days_per_month = 30;
inline constexpr int days_per_year = 360;

struct SimTime {
    int day = 0;

    constexpr int month() const { return day / days_per_month; }
    constexpr int year() const { return day / days_per_year; }

    constexpr bool is_month_boundary() const { return day > 0 && day % days_per_month == 0; }
    constexpr bool is_year_boundary() const { return day > 0 && day % days_per_year == 0; }

    constexpr auto operator<=>(const SimTime&) const = default;
};

constexpr SimTime at_day(int day) { return SimTime{day}; }

// Index of the calendar year a day belongs to, 1-based: days 1..360 are
// year 1, days 361..720 year 2, and so on. Day 0 maps to year 0.
constexpr int calendar_year(int day) { return (day + days_per_year - 1) / days_per_year; }

} // namespace lmsim
