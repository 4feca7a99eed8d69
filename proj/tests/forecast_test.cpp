#include "kwf/config.hpp"
#include "kwf/data.hpp"
#include "kwf/errors.hpp"
#include "kwf/forecast.hpp"
#include "kwf/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace kwf;
using forecast::DecomposedSeries;
using forecast::ForecastBundle;
using forecast::WeightStage;

namespace {

const wavelet::Basis& sym6() {
	static const wavelet::Basis basis = wavelet::Basis::from_name("sym6");
	return basis;
}

similarity::WeightVector make_weights(std::vector<double> w) {
	similarity::WeightVector out;
	out.weights = std::move(w);
	out.bandwidth_used = 1.0;
	return out;
}

similarity::WeightVector point_mass(std::size_t n_past, std::size_t at) {
	std::vector<double> w(n_past, 0.0);
	w[at] = 1.0;
	return make_weights(std::move(w));
}

SegmentSeries random_series(std::uint64_t seed, int n_days, int h = 48, double scale = 10.0) {
	std::vector<double> flat(static_cast<std::size_t>(n_days) * h);
	for (std::size_t i = 0; i < flat.size(); ++i)
		flat[i] = scale * rng::uniform01(seed, i);
	return segmentize(flat, h, parse_date("2006-01-02"), Grouping{});
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
	double m = 0.0;
	for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
	return m;
}

double day_mean_error(const std::vector<double>& forecast, const std::vector<double>& actual) {
	double e = 0.0;
	for (std::size_t i = 0; i < forecast.size(); ++i) e += forecast[i] - actual[i];
	return std::abs(e) / static_cast<double>(forecast.size());
}

} // namespace

TEST_CASE("stationary forecast") {
	const auto series = random_series(1, 8);
	const DecomposedSeries ds(series, sym6());

	SUBCASE("point mass reproduces the successor") {
		for (std::size_t m = 0; m < 7; ++m) {
			const auto bundle = forecast::forecast_stationary(ds, 8, point_mass(7, m));
			CHECK(max_abs_diff(bundle.point, series[m + 1].values) < 1e-9);
		}
	}

	SUBCASE("identical successors reproduce the common day") {
		SegmentSeries flat = series;
		for (auto& seg : flat.segments) seg.values = series[3].values;
		const DecomposedSeries dsf(flat, sym6());
		const auto bundle =
		    forecast::forecast_stationary(dsf, 8, make_weights(std::vector<double>(7, 1.0 / 7)));
		CHECK(max_abs_diff(bundle.point, series[3].values) < 1e-9);
	}

	SUBCASE("matches the signal-domain oracle") {
		const auto w = make_weights({0.2, 0.5, 0.3});
		const auto bundle = forecast::forecast_stationary(ds, 4, w);
		std::vector<double> expected(series.H(), 0.0);
		for (std::size_t m = 0; m < 3; ++m)
			for (int i = 0; i < series.H(); ++i)
				expected[i] += w[m] * series[m + 1].values[i];
		CHECK(max_abs_diff(bundle.point, expected) < 1e-9);
	}

	SUBCASE("additivity and convexity") {
		const auto w = make_weights({0.25, 0.25, 0.25, 0.25, 0, 0, 0});
		const auto bundle = forecast::forecast_stationary(ds, 8, w);
		for (int i = 0; i < series.H(); ++i) {
			CHECK(std::abs(bundle.point[i] - bundle.smooth_part[i] - bundle.detail_part[i]) <
			      1e-9);
			double lo = 1e300, hi = -1e300;
			for (std::size_t m = 0; m < 4; ++m) {
				lo = std::min(lo, series[m + 1].values[i]);
				hi = std::max(hi, series[m + 1].values[i]);
			}
			CHECK(bundle.point[i] >= lo - 1e-9);
			CHECK(bundle.point[i] <= hi + 1e-9);
		}
	}

	SUBCASE("rejections") {
		CHECK_THROWS_AS(forecast::forecast_stationary(ds, 1, make_weights({})),
		                ValidationError);
		CHECK_THROWS_AS(forecast::forecast_stationary(ds, 4, point_mass(5, 0)),
		                ValidationError);
	}
}

TEST_CASE("corrected forecast") {
	SUBCASE("zero increments keep the last smooth part") {
		SegmentSeries flat = random_series(2, 6);
		for (auto& seg : flat.segments) seg.values = flat[0].values;
		const DecomposedSeries ds(flat, sym6());
		const auto bundle =
		    forecast::forecast_corrected(ds, 6, make_weights(std::vector<double>(5, 0.2)));
		CHECK(max_abs_diff(bundle.smooth_part, ds.smooth(5)) < 1e-9);
		CHECK(max_abs_diff(bundle.point, flat[0].values) < 1e-9);
	}

	SUBCASE("a linear trend is followed exactly, whatever the weights") {
		SyntheticConfig syn;
		syn.n_days = 20;
		syn.trend_slope = 0.7;
		syn.seed = 5;
		syn.daily_shapes.assign(1, std::vector<double>(48, 0.0));
		for (int i = 0; i < 48; ++i) syn.daily_shapes[0][i] = std::sin(i * 0.26);
		const auto series = generate_synthetic(syn);
		const DecomposedSeries ds(series, sym6());
		for (std::uint64_t trial = 0; trial < 5; ++trial) {
			std::vector<double> w(18);
			double sum = 0.0;
			for (std::size_t m = 0; m < w.size(); ++m) sum += w[m] = rng::uniform01(trial, m);
			for (double& x : w) x /= sum;
			const auto bundle = forecast::forecast_corrected(ds, 19, make_weights(w));
			CHECK(day_mean_error(bundle.point, series[19].values) < 1e-9);
		}
	}

	SUBCASE("beats the stationary form on a trended series") {
		SyntheticConfig syn;
		syn.n_days = 40;
		syn.trend_slope = 0.5;
		syn.weekly_profile = {5, 5, 5, 5, 5, 2, 0};
		syn.seed = 6;
		const auto series = generate_synthetic(syn);
		const DecomposedSeries ds(series, sym6());
		const auto w = make_weights(std::vector<double>(38, 1.0 / 38));
		const auto corrected = forecast::forecast_corrected(ds, 39, w);
		const auto stationary = forecast::forecast_stationary(ds, 39, w);
		const double ce = day_mean_error(corrected.point, series[39].values);
		const double se = day_mean_error(stationary.point, series[39].values);
		CHECK(ce < se);
	}

	SUBCASE("needs three observed segments") {
		const auto series = random_series(3, 4);
		const DecomposedSeries ds(series, sym6());
		CHECK_THROWS_AS(forecast::forecast_corrected(ds, 2, point_mass(1, 0)),
		                ValidationError);
		CHECK_NOTHROW(forecast::forecast_corrected(ds, 3, make_weights({0.5, 0.5})));
	}
}

TEST_CASE("bootstrap draws") {
	const auto series = random_series(4, 9);
	const DecomposedSeries ds(series, sym6());

	SUBCASE("point mass duplicates one successor") {
		ForecastBundle bundle = forecast::forecast_stationary(ds, 9, point_mass(8, 2));
		forecast::draw_bootstrap(ds, 9, bundle.weights, 25, 77, bundle);
		REQUIRE(bundle.n_paths() == 25);
		for (const auto& path : bundle.boot_paths) CHECK(path == series[3].values);
		CHECK(bundle.sigma == std::vector<double>(48, 0.0));
	}

	SUBCASE("two-atom frequencies concentrate") {
		auto w = make_weights({0.5, 0.5, 0, 0, 0, 0, 0, 0});
		ForecastBundle bundle = forecast::forecast_stationary(ds, 9, w);
		forecast::draw_bootstrap(ds, 9, w, 10000, 12345, bundle);
		int first = 0;
		for (int pick : bundle.boot_pick)
			if (pick == 0) ++first;
		CHECK(std::abs(first / 10000.0 - 0.5) < 0.02);
	}

	SUBCASE("three-atom law") {
		const std::vector<double> probs{0.5, 0.3, 0.2};
		auto w = make_weights({0.5, 0.3, 0.2, 0, 0, 0, 0, 0});
		ForecastBundle bundle = forecast::forecast_stationary(ds, 9, w);
		forecast::draw_bootstrap(ds, 9, w, 20000, 999, bundle);
		std::vector<int> counts(3, 0);
		for (int pick : bundle.boot_pick) ++counts[pick];
		for (int a = 0; a < 3; ++a)
			CHECK(std::abs(counts[a] / 20000.0 - probs[a]) < 0.01);
	}

	SUBCASE("seed determinism") {
		auto w = make_weights(std::vector<double>(8, 0.125));
		ForecastBundle a = forecast::forecast_stationary(ds, 9, w);
		ForecastBundle b = forecast::forecast_stationary(ds, 9, w);
		forecast::draw_bootstrap(ds, 9, w, 64, 42, a);
		forecast::draw_bootstrap(ds, 9, w, 64, 42, b);
		CHECK(a.boot_pick == b.boot_pick);
		CHECK(a.boot_paths == b.boot_paths);
		forecast::draw_bootstrap(ds, 9, w, 64, 43, b);
		CHECK(a.boot_pick != b.boot_pick);
	}

	SUBCASE("paths split additively") {
		auto w = make_weights(std::vector<double>(8, 0.125));
		ForecastBundle bundle = forecast::forecast_stationary(ds, 9, w);
		forecast::draw_bootstrap(ds, 9, w, 50, 7, bundle);
		for (int b = 0; b < bundle.n_paths(); ++b)
			for (int i = 0; i < 48; ++i)
				CHECK(std::abs(bundle.boot_paths[b][i] - bundle.boot_smooth[b][i] -
				               bundle.boot_detail[b][i]) < 1e-9);
	}

	SUBCASE("rejections") {
		auto w = make_weights(std::vector<double>(8, 0.125));
		ForecastBundle bundle;
		CHECK_THROWS_AS(forecast::draw_bootstrap(ds, 9, w, 0, 1, bundle), ValidationError);
		CHECK_THROWS_AS(forecast::draw_bootstrap(ds, 9, make_weights({0, 0, 0, 0, 0, 0, 0, 0}),
		                                         4, 1, bundle),
		                DegenerateWeightsError);
	}
}

TEST_CASE("pointwise sigma") {
	SUBCASE("identical paths give zero") {
		const std::vector<std::vector<double>> paths(6, std::vector<double>{1, 2, 3});
		bool degenerate = true;
		CHECK(forecast::pointwise_sigma(paths, &degenerate) ==
		      std::vector<double>{0, 0, 0});
		CHECK_FALSE(degenerate);
	}

	SUBCASE("two paths differing by 2 give sqrt(2)") {
		const std::vector<std::vector<double>> paths{{5, 1, 0}, {5, 3, 0}};
		const auto sigma = forecast::pointwise_sigma(paths);
		CHECK(sigma[0] == 0.0);
		CHECK(sigma[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
		CHECK(sigma[2] == 0.0);
	}

	SUBCASE("single path flags degeneracy") {
		bool degenerate = false;
		const std::vector<std::vector<double>> one_path{{1, 2}};
		const auto sigma = forecast::pointwise_sigma(one_path, &degenerate);
		CHECK(sigma == std::vector<double>{0, 0});
		CHECK(degenerate);
	}

	SUBCASE("two-atom bootstrap approaches the closed-form sd") {
		// successors a and b drawn with probability 1/2 each: sd = |a-b|/2
		const std::vector<double> flat{
		    1, 2, 3, 4,   // z0
		    10, 20, 30, 40, // z1 = a
		    14, 28, 20, 48, // z2 = b
		};
		const auto series = segmentize(flat, 4, parse_date("2006-01-02"), Grouping{});
		const DecomposedSeries ds(series, sym6());
		auto w = make_weights({0.5, 0.5});
		ForecastBundle bundle = forecast::forecast_stationary(ds, 3, w);
		forecast::draw_bootstrap(ds, 3, w, 10000, 321, bundle);
		for (int i = 0; i < 4; ++i) {
			const double exact = std::abs(series[1].values[i] - series[2].values[i]) / 2.0;
			CHECK(std::abs(bundle.sigma[i] - exact) < 0.05 * exact);
		}
	}
}

TEST_CASE("weight fallback chain") {
	SyntheticConfig syn;
	syn.n_days = 30;
	syn.weekly_profile = {5, 5, 5, 5, 5, 2, 0};
	syn.noise_sd = 0.5;
	syn.seed = 9;
	const auto series = generate_synthetic(syn);
	const DecomposedSeries ds(series, sym6());
	ModelConfig cfg;

	SUBCASE("filtered when the group has history") {
		const auto wo = forecast::compute_weights(ds, 29, 1.0, cfg);
		CHECK(wo.stage == WeightStage::Filtered);
		CHECK(wo.weights.filtered);
		double in_group = 0.0;
		for (std::size_t m = 0; m < wo.weights.size(); ++m)
			if (series[m].group == series[28].group) in_group += wo.weights[m];
		CHECK(in_group == doctest::Approx(1.0).epsilon(1e-12));
	}

	SUBCASE("falls back to unfiltered when the group is empty") {
		// only 7 observed segments: predicting segment 7 leaves no past
		// segment in the group of segment 6
		const auto wo = forecast::compute_weights(ds, 7, 1.0, cfg);
		CHECK(wo.stage == WeightStage::Unfiltered);
	}

	SUBCASE("uniform in group when the kernel support is empty") {
		cfg.kernel = similarity::KernelFamily::Epanechnikov;
		const auto wo = forecast::compute_weights(ds, 29, 1e-9, cfg);
		CHECK(wo.stage == WeightStage::UniformInGroup);
		double sum = 0.0;
		for (std::size_t m = 0; m < wo.weights.size(); ++m) {
			if (wo.weights[m] > 0.0) CHECK(series[m].group == series[28].group);
			sum += wo.weights[m];
		}
		CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
	}

	SUBCASE("hard error when nothing is left") {
		cfg.kernel = similarity::KernelFamily::Epanechnikov;
		CHECK_THROWS_AS(forecast::compute_weights(ds, 7, 1e-9, cfg),
		                DegenerateWeightsError);
	}
}

TEST_CASE("forecast_day pipeline") {
	SyntheticConfig syn;
	syn.n_days = 40;
	syn.weekly_profile = {5, 5, 5, 5, 5, 2, 0};
	syn.noise_sd = 0.3;
	syn.seed = 10;
	const auto series = generate_synthetic(syn);
	const DecomposedSeries ds(series, sym6());
	ModelConfig cfg;
	cfg.B = 60;

	const auto bundle = forecast::forecast_day(ds, 39, 2.0, cfg, true, 1234);
	CHECK(bundle.n_paths() == 60);
	CHECK(bundle.sigma.size() == 48);
	CHECK(bundle.rng_seed == 1234);
	for (int i = 0; i < 48; ++i)
		CHECK(std::abs(bundle.point[i] - bundle.smooth_part[i] - bundle.detail_part[i]) <
		      1e-9);

	// stationary correction honors the config switch
	ModelConfig none = cfg;
	none.correction = Correction::None;
	const auto stationary = forecast::forecast_day(ds, 39, 2.0, none, false, 0);
	CHECK(stationary.boot_paths.empty());
	CHECK(stationary.point != bundle.point);

	// a shallow decomposition depth flows through the whole pipeline
	ModelConfig shallow = cfg;
	shallow.levels = 3;
	const DecomposedSeries ds3(series, sym6(), 3);
	const auto sb = forecast::forecast_day(ds3, 39, 2.0, shallow, true, 7);
	CHECK(ds3.decomp(0).levels() == 3);
	for (int i = 0; i < 48; ++i)
		CHECK(std::abs(sb.point[i] - sb.smooth_part[i] - sb.detail_part[i]) < 1e-9);
}
