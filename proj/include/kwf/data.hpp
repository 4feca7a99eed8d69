#pragma once

#include "kwf/dates.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kwf {

// One day of the series: H samples plus calendar metadata.
struct Segment {
	std::vector<double> values;
	Date date{};
	int group = 0;
};

struct SegmentSeries {
	std::vector<Segment> segments;
	std::chrono::minutes sample_period{0};
	int samples_per_day = 0;

	int H() const { return samples_per_day; }
	std::size_t size() const { return segments.size(); }
	const Segment& operator[](std::size_t i) const { return segments[i]; }
};

enum class GroupScheme {
	DayOfWeek,      // 7 groups, MON..SUN
	WeekdaySatSun,  // 3 groups, WEEKDAY / SAT / SUN
	UserMap,        // explicit date -> label map
};

// Maps dates to day-type groups. For UserMap every queried date must be
// present in the map.
class Grouping {
public:
	Grouping() = default;
	explicit Grouping(GroupScheme scheme);
	static Grouping user_map(const std::map<Date, std::string>& date_labels);

	GroupScheme scheme() const { return scheme_; }
	int n_groups() const;
	int group_of(Date d) const;
	std::string label(int group) const;

private:
	GroupScheme scheme_ = GroupScheme::DayOfWeek;
	std::map<Date, int> user_groups_;
	std::vector<std::string> user_labels_;
};

std::vector<int> assign_groups(const std::vector<Date>& dates, const Grouping& grouping);

// Additive load-like generator: linear trend + annual cosine + weekly level
// + per-group daily shape + Gaussian noise. Identical config gives
// bit-identical output.
struct SyntheticConfig {
	int n_days = 0;
	int samples_per_day = 48;                     // config key "H"
	double trend_slope = 0.0;                     // units per day
	double annual_amplitude = 0.0;
	std::array<double, 7> weekly_profile{};       // Monday first
	std::vector<std::vector<double>> daily_shapes; // 1, 3 or 7 rows of H values; empty = built-in
	double noise_sd = 0.0;
	std::uint64_t seed = 1;
	Date start_date = Date(std::chrono::days(13149)); // 2006-01-02, a Monday
};

// Built-in double-peak daily shape family, one row per day-of-week group.
std::vector<std::vector<double>> default_daily_shapes(int h);

SegmentSeries generate_synthetic(const SyntheticConfig& cfg);

// Slices a scalar series into consecutive day-sized segments.
// length must be a positive multiple of H and all values finite.
SegmentSeries segmentize(const std::vector<double>& series, int h, Date start_date,
                         const Grouping& grouping = Grouping{});

// CSV contract: header "timestamp,load", ISO-8601 minute timestamps on a
// uniform grid, exactly H rows per day, LF line endings. load_csv sorts rows
// by timestamp and rejects gaps, duplicates and unparsable rows by row number.
SegmentSeries load_csv(const std::string& path, const Grouping& grouping = Grouping{});
void write_csv(const SegmentSeries& series, const std::string& path);

} // namespace kwf
