// Times the OpenMP-parallel kernels against the serial reference path and
// checks that both produce identical results.

#include "kwf/config.hpp"
#include "kwf/data.hpp"
#include "kwf/eval.hpp"
#include "kwf/forecast.hpp"
#include "kwf/parallel.hpp"
#include "kwf/similarity.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace {

double time_ms(const std::function<void()>& fn) {
	double best = 1e300;
	for (int rep = 0; rep < 3; ++rep) {
		const auto t0 = std::chrono::steady_clock::now();
		fn();
		const auto t1 = std::chrono::steady_clock::now();
		best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
	}
	return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
	std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   identical %s\n",
	            name, serial_ms, parallel_ms, serial_ms / parallel_ms,
	            identical ? "yes" : "NO");
}

} // namespace

int main(int argc, char** argv) {
	CLI::App app{"KWF serial vs OpenMP benchmark"};
	int days = 1096;
	int jobs = 0;
	int backtest_days = 56;
	app.add_option("--days", days, "Synthetic series length");
	app.add_option("--jobs", jobs, "Parallel worker threads (0 = all cores)");
	app.add_option("--backtest-days", backtest_days, "Test window for the backtest kernel");
	CLI11_PARSE(app, argc, argv);

	using namespace kwf;
	std::printf("series: %d days, jobs: %d\n\n", days, effective_jobs(jobs));

	SyntheticConfig syn;
	syn.n_days = days;
	syn.trend_slope = 0.01;
	syn.annual_amplitude = 6.0;
	syn.weekly_profile = {5, 5, 5, 5, 5, 2, 0};
	syn.noise_sd = 0.8;
	syn.seed = 7;
	const SegmentSeries series = generate_synthetic(syn);
	const wavelet::Basis basis = wavelet::Basis::from_name("sym6");

	// Per-segment decomposition.
	std::unique_ptr<forecast::DecomposedSeries> ds_serial, ds_parallel;
	const double dec_serial =
	    time_ms([&] { ds_serial = std::make_unique<forecast::DecomposedSeries>(series, basis, 0, 1); });
	const double dec_parallel = time_ms(
	    [&] { ds_parallel = std::make_unique<forecast::DecomposedSeries>(series, basis, 0, jobs); });
	bool same = true;
	for (std::size_t i = 0; i < ds_serial->size() && same; ++i)
		same = ds_serial->decomp(i).approx == ds_parallel->decomp(i).approx &&
		       ds_serial->smooth(i) == ds_parallel->smooth(i);
	report("segment decomposition", dec_serial, dec_parallel, same);

	// Dissimilarity of the last segment to the whole past.
	const auto& current = ds_serial->decomp(ds_serial->size() - 1);
	const auto past = ds_serial->decomps().subspan(0, ds_serial->size() - 1);
	std::vector<double> d_serial, d_parallel;
	const double dis_serial =
	    time_ms([&] { d_serial = similarity::dissimilarity_to_past(current, past, 0, 1); });
	const double dis_parallel =
	    time_ms([&] { d_parallel = similarity::dissimilarity_to_past(current, past, 0, jobs); });
	report("dissimilarity batch", dis_serial, dis_parallel, d_serial == d_parallel);

	// Full backtest: calibration, weights, bootstrap, all four bands.
	RunConfig cfg;
	cfg.synthetic = syn;
	cfg.recalibrate_days = 7;
	const Date test_start = series.segments[series.size() - backtest_days].date;
	eval::BacktestResult serial_result, parallel_result;
	cfg.jobs = 1;
	const double bt_serial =
	    time_ms([&] { serial_result = eval::backtest(series, test_start, cfg); });
	cfg.jobs = jobs;
	const double bt_parallel =
	    time_ms([&] { parallel_result = eval::backtest(series, test_start, cfg); });
	same = serial_result.per_day.size() == parallel_result.per_day.size();
	for (std::size_t i = 0; i < serial_result.per_day.size() && same; ++i) {
		const auto& a = serial_result.per_day[i];
		const auto& b = parallel_result.per_day[i];
		same = a.point == b.point && a.bandwidth == b.bandwidth;
		for (std::size_t j = 0; j < a.bands.size() && same; ++j)
			same = a.bands[j].lower == b.bands[j].lower &&
			       a.bands[j].upper == b.bands[j].upper;
	}
	report("backtest", bt_serial, bt_parallel, same);
	return 0;
}
