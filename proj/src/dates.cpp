#include "kwf/dates.hpp"

#include "kwf/errors.hpp"

#include <cstdio>

namespace kwf {

namespace {

using std::chrono::day;
using std::chrono::month;
using std::chrono::year;
using std::chrono::year_month_day;

year_month_day parse_ymd(const std::string& text, const char* what) {
	int y = 0, m = 0, d = 0;
	char tail = 0;
	if (std::sscanf(text.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) != 3)
		throw ValidationError(std::string(what) + ": expected YYYY-MM-DD, got '" + text + "'");
	year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
	if (!ymd.ok())
		throw ValidationError(std::string(what) + ": '" + text + "' is not a valid calendar date");
	return ymd;
}

} // namespace

Date parse_date(const std::string& text) {
	return Date{parse_ymd(text, "date")};
}

std::string format_date(Date d) {
	const year_month_day ymd{d};
	char buf[16];
	std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
	              static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
	return buf;
}

Minutes parse_timestamp(const std::string& text) {
	int y = 0, mo = 0, d = 0, h = 0, mi = 0;
	char tail = 0;
	if (std::sscanf(text.c_str(), "%d-%d-%dT%d:%d%c", &y, &mo, &d, &h, &mi, &tail) != 5)
		throw ValidationError("timestamp: expected YYYY-MM-DDTHH:MM, got '" + text + "'");
	year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
	if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59)
		throw ValidationError("timestamp: '" + text + "' is not a valid instant");
	return Date{ymd} + std::chrono::hours(h) + std::chrono::minutes(mi);
}

std::string format_timestamp(Minutes t) {
	const Date d = std::chrono::floor<std::chrono::days>(t);
	const auto within = std::chrono::duration_cast<std::chrono::minutes>(t - d).count();
	char buf[40];
	const year_month_day ymd{d};
	std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld", static_cast<int>(ymd.year()),
	              static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
	              static_cast<long long>(within / 60), static_cast<long long>(within % 60));
	return buf;
}

int weekday_index(Date d) {
	const std::chrono::weekday wd{d};
	return static_cast<int>(wd.iso_encoding()) - 1;
}

} // namespace kwf
