#include "kwf/eval.hpp"

#include "kwf/errors.hpp"
#include "kwf/parallel.hpp"
#include "kwf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace kwf::eval {

namespace {

std::size_t band_index(const BacktestResult& r, Method m, double alpha) {
	const auto mi = std::find(r.methods.begin(), r.methods.end(), m);
	if (mi == r.methods.end())
		throw ValidationError("backtest result has no bands for method " + method_name(m));
	const auto ai = std::find(r.alphas.begin(), r.alphas.end(), alpha);
	if (ai == r.alphas.end())
		throw ValidationError("backtest result has no bands at alpha " + std::to_string(alpha));
	return static_cast<std::size_t>(mi - r.methods.begin()) * r.alphas.size() +
	       static_cast<std::size_t>(ai - r.alphas.begin());
}

int misses(const DayRecord& day, const intervals::PredictionBand& band) {
	int n = 0;
	for (std::size_t i = 0; i < day.actual.size(); ++i)
		if (day.actual[i] < band.lower[i] || day.actual[i] > band.upper[i]) ++n;
	return n;
}

} // namespace

const intervals::PredictionBand& BacktestResult::band(std::size_t day, Method m,
                                                      double alpha) const {
	return per_day[day].bands[band_index(*this, m, alpha)];
}

BacktestResult backtest(const SegmentSeries& input, Date test_start, const RunConfig& cfg) {
	if (input.size() < 2) throw ValidationError("backtest: series too short");

	// Re-label day types under the configured scheme so the run is
	// self-contained regardless of how the series was produced.
	const Grouping grouping = make_grouping(cfg);
	SegmentSeries series = input;
	for (Segment& seg : series.segments) seg.group = grouping.group_of(seg.date);

	std::size_t first = 0;
	while (first < series.size() && series[first].date < test_start) ++first;
	if (first == series.size())
		throw ValidationError("backtest: test_start " + format_date(test_start) +
		                      " is after the end of the series");
	const std::size_t n_days = series.size();
	const std::size_t min_history = cfg.model.correction == Correction::Increment ? 3 : 2;
	if (first < min_history)
		throw ValidationError("backtest: needs at least " + std::to_string(min_history) +
		                      " segments before test_start, got " + std::to_string(first));

	const ModelConfig& model = cfg.model;
	const wavelet::Basis basis = wavelet::Basis::from_name(model.wavelet);
	const forecast::DecomposedSeries ds(series, basis, model.levels, cfg.jobs);

	// Bandwidth per test day. Calibration anchors are keyed by the calendar
	// (day number modulo the cadence), not by the position inside the test
	// window, so shifting test_start does not change any day's forecast.
	std::vector<double> bandwidth_by_day(n_days, model.bandwidth);
	if (model.bandwidth <= 0.0) {
		const auto cadence = static_cast<std::int64_t>(cfg.recalibrate_days);
		// floored so the anchor never lands after the day, even pre-1970
		const auto anchor_of = [cadence](std::int64_t num) {
			return num - ((num % cadence) + cadence) % cadence;
		};
		std::map<std::int64_t, std::size_t> anchors; // anchor day number -> prefix length
		for (std::size_t t = first; t < n_days; ++t) {
			const std::int64_t num = day_number(series[t].date);
			const std::int64_t anchor = anchor_of(num);
			std::size_t prefix = t;
			while (prefix > 0 && day_number(series[prefix - 1].date) >= anchor) --prefix;
			anchors.emplace(anchor, prefix);
		}
		std::map<std::int64_t, double> calibrated;
		for (const auto& [anchor, prefix] : anchors) {
			const std::size_t required =
			    static_cast<std::size_t>(model.calibration_window) + min_history;
			if (prefix < required)
				throw ValidationError(
				    "backtest: calibration before " + format_date(test_start) +
				    " needs " + std::to_string(required) +
				    " segments of history, got " + std::to_string(prefix) +
				    "; move test_start later or shrink calibration_window");
			SegmentSeries head;
			head.samples_per_day = series.samples_per_day;
			head.sample_period = series.sample_period;
			head.segments.assign(series.segments.begin(),
			                     series.segments.begin() + prefix);
			calibrated[anchor] = similarity::calibrate_bandwidth(
			    head, model.bandwidth_grid, model.calibration_window, model, cfg.jobs);
		}
		for (std::size_t t = first; t < n_days; ++t)
			bandwidth_by_day[t] = calibrated.at(anchor_of(day_number(series[t].date)));
	}

	BacktestResult result;
	result.methods = cfg.methods;
	result.alphas = cfg.alpha_levels;
	result.samples_per_day = series.H();
	result.per_day.resize(n_days - first);

	std::vector<std::string> failures(n_days - first);
	parallel_for(n_days - first, cfg.jobs, [&](std::size_t idx) {
		const std::size_t t = first + idx;
		try {
			const Date target = series[t].date;
			if (!(series[t - 1].date < target))
				throw ValidationError("backtest: segment dates are not increasing at " +
				                      format_date(target));
			const auto bundle =
			    forecast::forecast_day(ds, t, bandwidth_by_day[t], model, true,
			                           rng::keyed(model.seed, static_cast<std::uint64_t>(
			                                                      day_number(target))));
			DayRecord day;
			day.date = target;
			day.actual = series[t].values;
			day.point = bundle.point;
			day.bandwidth = bandwidth_by_day[t];
			day.weight_stage = bundle.weight_stage;
			day.bands.reserve(cfg.methods.size() * cfg.alpha_levels.size());
			for (Method m : cfg.methods)
				for (double alpha : cfg.alpha_levels)
					day.bands.push_back(intervals::make_band(bundle, m, alpha,
					                                         cfg.kfwe_k,
					                                         cfg.nskwf_mode));
			result.per_day[idx] = std::move(day);
		} catch (const std::exception& e) {
			failures[idx] = e.what();
		}
	});
	for (std::size_t idx = 0; idx < failures.size(); ++idx)
		if (!failures[idx].empty())
			throw ValidationError("backtest: day " +
			                      format_date(series[first + idx].date) + ": " +
			                      failures[idx]);
	return result;
}

double mean_amplitude(const BacktestResult& r, Method m, double alpha) {
	const std::size_t bi = band_index(r, m, alpha);
	if (r.per_day.empty()) throw ValidationError("mean_amplitude: empty backtest");
	double total = 0.0;
	std::size_t count = 0;
	for (const DayRecord& day : r.per_day) {
		const auto& band = day.bands[bi];
		for (int i = 0; i < band.horizon(); ++i) total += band.width(i);
		count += band.horizon();
	}
	return total / static_cast<double>(count);
}

double mean_coverage(const BacktestResult& r, Method m, double alpha) {
	const std::size_t bi = band_index(r, m, alpha);
	if (r.per_day.empty()) throw ValidationError("mean_coverage: empty backtest");
	std::size_t covered = 0, count = 0;
	for (const DayRecord& day : r.per_day) {
		const auto& band = day.bands[bi];
		for (std::size_t i = 0; i < day.actual.size(); ++i) {
			if (day.actual[i] >= band.lower[i] && day.actual[i] <= band.upper[i]) ++covered;
			++count;
		}
	}
	return 100.0 * static_cast<double>(covered) / static_cast<double>(count);
}

double curvewise_coverage(const BacktestResult& r, Method m, double alpha, int k_allow) {
	if (k_allow < 0) throw ValidationError("curvewise_coverage: k_allow must be >= 0");
	const std::size_t bi = band_index(r, m, alpha);
	if (r.per_day.empty()) throw ValidationError("curvewise_coverage: empty backtest");
	std::size_t covered = 0;
	for (const DayRecord& day : r.per_day)
		if (misses(day, day.bands[bi]) <= k_allow) ++covered;
	return 100.0 * static_cast<double>(covered) / static_cast<double>(r.per_day.size());
}

std::pair<std::vector<double>, std::vector<double>> by_hour_profiles(const BacktestResult& r,
                                                                     Method m, double alpha) {
	const std::size_t bi = band_index(r, m, alpha);
	if (r.per_day.empty()) throw ValidationError("by_hour_profiles: empty backtest");
	const auto h = static_cast<std::size_t>(r.samples_per_day);
	std::vector<double> amplitude(h, 0.0), coverage(h, 0.0);
	for (const DayRecord& day : r.per_day) {
		const auto& band = day.bands[bi];
		for (std::size_t i = 0; i < h; ++i) {
			amplitude[i] += band.upper[i] - band.lower[i];
			if (day.actual[i] >= band.lower[i] && day.actual[i] <= band.upper[i])
				coverage[i] += 1.0;
		}
	}
	const auto n = static_cast<double>(r.per_day.size());
	for (std::size_t i = 0; i < h; ++i) {
		amplitude[i] /= n;
		coverage[i] = 100.0 * coverage[i] / n;
	}
	return {amplitude, coverage};
}

EvalReport summarize(const BacktestResult& r, double report_alpha, int max_allow) {
	EvalReport report;
	report.methods = r.methods;
	report.alphas = r.alphas;
	report.report_alpha = report_alpha;
	for (int k = 0; k <= max_allow; ++k) report.allowances.push_back(k);
	for (Method m : r.methods) {
		std::vector<double> amp_row, cov_row, curve_row;
		for (double alpha : r.alphas) {
			amp_row.push_back(mean_amplitude(r, m, alpha));
			cov_row.push_back(mean_coverage(r, m, alpha));
		}
		for (int k : report.allowances)
			curve_row.push_back(curvewise_coverage(r, m, report_alpha, k));
		report.amplitude.push_back(std::move(amp_row));
		report.coverage.push_back(std::move(cov_row));
		report.curvewise.push_back(std::move(curve_row));
		auto [amp, cov] = by_hour_profiles(r, m, report_alpha);
		report.by_hour_amplitude.push_back(std::move(amp));
		report.by_hour_coverage.push_back(std::move(cov));
	}
	return report;
}

} // namespace kwf::eval
