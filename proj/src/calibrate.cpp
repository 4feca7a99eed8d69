#include "kwf/config.hpp"
#include "kwf/errors.hpp"
#include "kwf/forecast.hpp"
#include "kwf/parallel.hpp"
#include "kwf/similarity.hpp"

#include <cmath>
#include <limits>

namespace kwf::similarity {

double calibrate_bandwidth(const SegmentSeries& series, const std::vector<double>& grid,
                           int window, const ModelConfig& cfg, int jobs) {
	if (grid.empty()) throw ValidationError("calibrate_bandwidth: empty bandwidth grid");
	for (double h : grid)
		if (!(h > 0.0))
			throw ValidationError("calibrate_bandwidth: grid bandwidths must be > 0");
	if (window < 1) throw ValidationError("calibrate_bandwidth: window must be >= 1");

	const std::size_t min_history = cfg.correction == Correction::Increment ? 3 : 2;
	const std::size_t required = static_cast<std::size_t>(window) + min_history;
	if (series.size() < required)
		throw ValidationError("calibrate_bandwidth: needs at least " + std::to_string(required) +
		                      " segments for a " + std::to_string(window) +
		                      "-day replay window, got " + std::to_string(series.size()));

	const forecast::DecomposedSeries ds(series, wavelet::Basis::from_name(cfg.wavelet),
	                                    cfg.levels, jobs);
	const std::size_t first_target = series.size() - static_cast<std::size_t>(window);
	const int h_points = series.H();

	// Mean squared one-day-ahead error of each grid entry over the replay
	// window; a bandwidth whose replays cannot produce weights scores inf.
	std::vector<double> mse(grid.size(), 0.0);
	parallel_for(grid.size(), jobs, [&](std::size_t g) {
		double total = 0.0;
		for (std::size_t t = first_target; t < series.size(); ++t) {
			try {
				const auto bundle = forecast::forecast_day(ds, t, grid[g], cfg, false, 0);
				for (int i = 0; i < h_points; ++i) {
					const double e = bundle.point[i] - series[t].values[i];
					total += e * e;
				}
			} catch (const DegenerateWeightsError&) {
				total = std::numeric_limits<double>::infinity();
				break;
			}
		}
		mse[g] = total / (static_cast<double>(window) * h_points);
	});

	std::size_t best = 0;
	for (std::size_t g = 1; g < grid.size(); ++g)
		if (mse[g] < mse[best] || (mse[g] == mse[best] && grid[g] < grid[best])) best = g;
	if (std::isinf(mse[best]))
		throw ValidationError("calibrate_bandwidth: no grid bandwidth produced usable weights");
	return grid[best];
}

} // namespace kwf::similarity
