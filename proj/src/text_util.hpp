#pragma once

#include "kwf/errors.hpp"

#include <charconv>
#include <string>

namespace kwf::detail {

// Shortest round-trip representation; parsing it back yields the same double.
inline std::string format_double(double v) {
	char buf[32];
	auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
	(void)ec;
	return std::string(buf, end);
}

inline double parse_double(const std::string& text, const std::string& where) {
	double v = 0.0;
	const char* first = text.data();
	const char* last = text.data() + text.size();
	auto [ptr, ec] = std::from_chars(first, last, v);
	if (ec != std::errc() || ptr != last)
		throw ValidationError(where + ": cannot parse number '" + text + "'");
	return v;
}

inline long parse_long(const std::string& text, const std::string& where) {
	long v = 0;
	const char* first = text.data();
	const char* last = text.data() + text.size();
	auto [ptr, ec] = std::from_chars(first, last, v);
	if (ec != std::errc() || ptr != last)
		throw ValidationError(where + ": cannot parse integer '" + text + "'");
	return v;
}

} // namespace kwf::detail
