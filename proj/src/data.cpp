#include "kwf/data.hpp"

#include "kwf/errors.hpp"
#include "kwf/stats.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace kwf {

namespace {

const char* kDowLabels[7] = {"MON", "TUE", "WED", "THU", "FRI", "SAT", "SUN"};
const char* kThreeLabels[3] = {"WEEKDAY", "SAT", "SUN"};

int three_group_of(int weekday) { return weekday <= 4 ? 0 : (weekday == 5 ? 1 : 2); }

} // namespace

Grouping::Grouping(GroupScheme scheme) : scheme_(scheme) {
	if (scheme == GroupScheme::UserMap)
		throw ValidationError("user-map grouping needs an explicit date->label map");
}

Grouping Grouping::user_map(const std::map<Date, std::string>& date_labels) {
	Grouping g;
	g.scheme_ = GroupScheme::UserMap;
	for (const auto& [date, label] : date_labels) {
		(void)date;
		if (std::find(g.user_labels_.begin(), g.user_labels_.end(), label) == g.user_labels_.end())
			g.user_labels_.push_back(label);
	}
	std::sort(g.user_labels_.begin(), g.user_labels_.end());
	for (const auto& [date, label] : date_labels) {
		const auto it = std::find(g.user_labels_.begin(), g.user_labels_.end(), label);
		g.user_groups_[date] = static_cast<int>(it - g.user_labels_.begin());
	}
	return g;
}

int Grouping::n_groups() const {
	switch (scheme_) {
	case GroupScheme::DayOfWeek: return 7;
	case GroupScheme::WeekdaySatSun: return 3;
	case GroupScheme::UserMap: return static_cast<int>(user_labels_.size());
	}
	return 0;
}

int Grouping::group_of(Date d) const {
	switch (scheme_) {
	case GroupScheme::DayOfWeek: return weekday_index(d);
	case GroupScheme::WeekdaySatSun: return three_group_of(weekday_index(d));
	case GroupScheme::UserMap: {
		const auto it = user_groups_.find(d);
		if (it == user_groups_.end())
			throw ValidationError("grouping map has no entry for date " + format_date(d));
		return it->second;
	}
	}
	return 0;
}

std::string Grouping::label(int group) const {
	const int n = n_groups();
	if (group < 0 || group >= n)
		throw ValidationError("group id " + std::to_string(group) + " out of range");
	switch (scheme_) {
	case GroupScheme::DayOfWeek: return kDowLabels[group];
	case GroupScheme::WeekdaySatSun: return kThreeLabels[group];
	case GroupScheme::UserMap: return user_labels_[group];
	}
	return {};
}

std::vector<int> assign_groups(const std::vector<Date>& dates, const Grouping& grouping) {
	std::vector<int> out;
	out.reserve(dates.size());
	for (Date d : dates) out.push_back(grouping.group_of(d));
	return out;
}

std::vector<std::vector<double>> default_daily_shapes(int h) {
	// Double-peak load curve; peak heights and phase vary by day type so the
	// wavelet details carry group information.
	std::vector<std::vector<double>> shapes(7, std::vector<double>(h));
	for (int g = 0; g < 7; ++g) {
		const double morning = 8.0 + 0.5 * g;
		const double evening = 10.0 - 0.4 * g;
		const double phase = 0.15 * g;
		for (int i = 0; i < h; ++i) {
			const double t = static_cast<double>(i) / h;
			const double m = (t - 0.35) / 0.12;
			const double e = (t - 0.80) / 0.09;
			shapes[g][i] = morning * std::exp(-m * m) + evening * std::exp(-e * e) +
			               2.0 * std::sin(2.0 * std::acos(-1.0) * t + phase);
		}
	}
	return shapes;
}

SegmentSeries generate_synthetic(const SyntheticConfig& cfg) {
	const int h = cfg.samples_per_day;
	if (cfg.n_days < 14) throw ValidationError("synthetic: n_days must be >= 14");
	if (h < 2) throw ValidationError("synthetic: H must be >= 2");
	if (cfg.noise_sd < 0.0) throw ValidationError("synthetic: noise_sd must be >= 0");
	auto shapes = cfg.daily_shapes.empty() ? default_daily_shapes(h) : cfg.daily_shapes;
	const auto rows = shapes.size();
	if (rows != 1 && rows != 3 && rows != 7)
		throw ValidationError("synthetic: daily_shapes needs 1, 3 or 7 rows");
	for (const auto& row : shapes)
		if (static_cast<int>(row.size()) != h)
			throw ValidationError("synthetic: every daily_shapes row needs exactly H values");

	const double two_pi = 2.0 * std::acos(-1.0);
	const Grouping grouping(GroupScheme::DayOfWeek);
	SegmentSeries out;
	out.samples_per_day = h;
	out.sample_period = std::chrono::minutes(1440 % h == 0 ? 1440 / h : 0);
	out.segments.resize(cfg.n_days);
	for (int d = 0; d < cfg.n_days; ++d) {
		Segment& seg = out.segments[d];
		seg.date = cfg.start_date + std::chrono::days(d);
		const int dow = weekday_index(seg.date);
		seg.group = grouping.group_of(seg.date);
		const std::size_t row = rows == 7 ? dow : (rows == 3 ? three_group_of(dow) : 0);
		const double level = cfg.trend_slope * d +
		                     cfg.annual_amplitude * std::cos(two_pi * d / 365.25) +
		                     cfg.weekly_profile[dow];
		seg.values.resize(h);
		for (int i = 0; i < h; ++i) {
			double v = level + shapes[row][i];
			if (cfg.noise_sd > 0.0)
				v += cfg.noise_sd *
				     stats::normal01(cfg.seed, static_cast<std::uint64_t>(d) * h + i);
			seg.values[i] = v;
		}
	}
	return out;
}

SegmentSeries segmentize(const std::vector<double>& series, int h, Date start_date,
                         const Grouping& grouping) {
	if (h <= 0) throw ValidationError("segmentize: H must be positive");
	if (series.empty()) throw ValidationError("segmentize: empty input series");
	if (series.size() % static_cast<std::size_t>(h) != 0)
		throw ValidationError("segmentize: series length " + std::to_string(series.size()) +
		                      " is not a multiple of H=" + std::to_string(h) +
		                      " (remainder=" + std::to_string(series.size() % h) + ")");
	for (std::size_t i = 0; i < series.size(); ++i)
		if (!std::isfinite(series[i]))
			throw ValidationError("segmentize: non-finite value at index " + std::to_string(i));

	SegmentSeries out;
	out.samples_per_day = h;
	out.sample_period = std::chrono::minutes(1440 % h == 0 ? 1440 / h : 0);
	const std::size_t n = series.size() / h;
	out.segments.resize(n);
	for (std::size_t k = 0; k < n; ++k) {
		Segment& seg = out.segments[k];
		seg.date = start_date + std::chrono::days(static_cast<int>(k));
		seg.group = grouping.group_of(seg.date);
		seg.values.assign(series.begin() + k * h, series.begin() + (k + 1) * h);
	}
	return out;
}

SegmentSeries load_csv(const std::string& path, const Grouping& grouping) {
	std::ifstream in(path);
	if (!in) throw ValidationError("cannot open '" + path + "'");
	std::string line;
	if (!std::getline(in, line)) throw ValidationError(path + ": empty file");
	if (!line.empty() && line.back() == '\r') line.pop_back();
	if (line != "timestamp,load")
		throw ValidationError(path + ": expected header 'timestamp,load', got '" + line + "'");

	struct Row {
		Minutes ts;
		double value;
		long number;
	};
	std::vector<Row> rows;
	long line_number = 1;
	while (std::getline(in, line)) {
		++line_number;
		if (!line.empty() && line.back() == '\r') line.pop_back();
		if (line.empty()) continue;
		const auto comma = line.find(',');
		if (comma == std::string::npos)
			throw ValidationError(path + ": row " + std::to_string(line_number) +
			                      ": expected 'timestamp,load'");
		const std::string where = path + ": row " + std::to_string(line_number);
		Minutes ts;
		try {
			ts = parse_timestamp(line.substr(0, comma));
		} catch (const ValidationError& e) {
			throw ValidationError(where + ": " + e.what());
		}
		const double v = detail::parse_double(line.substr(comma + 1), where);
		if (!std::isfinite(v)) throw ValidationError(where + ": non-finite load value");
		rows.push_back({ts, v, line_number});
	}
	if (rows.empty()) throw ValidationError(path + ": no data rows");

	std::stable_sort(rows.begin(), rows.end(),
	                 [](const Row& a, const Row& b) { return a.ts < b.ts; });
	for (std::size_t i = 1; i < rows.size(); ++i)
		if (rows[i].ts == rows[i - 1].ts)
			throw ValidationError(path + ": duplicate timestamp " +
			                      format_timestamp(rows[i].ts) + " (rows " +
			                      std::to_string(rows[i - 1].number) + " and " +
			                      std::to_string(rows[i].number) + ")");

	const Date first_day = std::chrono::floor<std::chrono::days>(rows.front().ts);
	if (rows.front().ts != Minutes(first_day))
		throw ValidationError(path + ": series must start at midnight, got " +
		                      format_timestamp(rows.front().ts));
	std::size_t h = 0;
	while (h < rows.size() &&
	       std::chrono::floor<std::chrono::days>(rows[h].ts) == first_day)
		++h;
	if (1440 % h != 0)
		throw ValidationError(path + ": " + std::to_string(h) +
		                      " samples in the first day do not fit a minute grid");
	const auto period = std::chrono::minutes(static_cast<long>(1440 / h));
	for (std::size_t i = 0; i < rows.size(); ++i) {
		const Minutes expected = rows.front().ts + period * static_cast<long>(i);
		if (rows[i].ts != expected)
			throw ValidationError(path + ": gap at timestamp " + format_timestamp(expected) +
			                      " (next present row is " + std::to_string(rows[i].number) +
			                      " at " + format_timestamp(rows[i].ts) + ")");
	}
	if (rows.size() % h != 0)
		throw ValidationError(path + ": last day is incomplete (" +
		                      std::to_string(rows.size() % h) + " of " + std::to_string(h) +
		                      " samples)");

	std::vector<double> values(rows.size());
	for (std::size_t i = 0; i < rows.size(); ++i) values[i] = rows[i].value;
	return segmentize(values, static_cast<int>(h), first_day, grouping);
}

void write_csv(const SegmentSeries& series, const std::string& path) {
	if (series.segments.empty()) throw ValidationError("write_csv: empty series");
	if (series.sample_period.count() <= 0)
		throw ValidationError("write_csv: H=" + std::to_string(series.H()) +
		                      " does not fit a minute grid");
	std::ofstream out(path);
	if (!out) throw ValidationError("cannot write '" + path + "'");
	out << "timestamp,load\n";
	for (const Segment& seg : series.segments) {
		const Minutes day_start{seg.date};
		for (int i = 0; i < series.H(); ++i)
			out << format_timestamp(day_start + series.sample_period * i) << ','
			    << detail::format_double(seg.values[i]) << '\n';
	}
	if (!out) throw ValidationError("failed while writing '" + path + "'");
}

} // namespace kwf
