#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace kwf {

// Calendar day on the civil (proleptic Gregorian) calendar.
using Date = std::chrono::sys_days;

// Minute-resolution timestamp, used by the CSV format.
using Minutes = std::chrono::sys_time<std::chrono::minutes>;

// Parses YYYY-MM-DD; rejects malformed or impossible dates.
Date parse_date(const std::string& text);
std::string format_date(Date d);

// Parses YYYY-MM-DDTHH:MM (ISO-8601 at minute precision).
Minutes parse_timestamp(const std::string& text);
std::string format_timestamp(Minutes t);

// 0 = Monday .. 6 = Sunday.
int weekday_index(Date d);

inline std::int64_t day_number(Date d) { return d.time_since_epoch().count(); }

} // namespace kwf
