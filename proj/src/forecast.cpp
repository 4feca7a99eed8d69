#include "kwf/forecast.hpp"

#include "kwf/errors.hpp"
#include "kwf/parallel.hpp"
#include "kwf/rng.hpp"
#include "kwf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace kwf::forecast {

namespace {

std::vector<double> to_h(std::vector<double> dyadic, int h) {
	if (static_cast<int>(dyadic.size()) == h) return dyadic;
	return wavelet::resample_from_dyadic(dyadic, h);
}

void check_weights(const DecomposedSeries& ds, std::size_t n, const similarity::WeightVector& w,
                   std::size_t min_n) {
	if (n < min_n || n > ds.size())
		throw ValidationError("forecast: needs at least " + std::to_string(min_n) +
		                      " observed segments, got " + std::to_string(n));
	if (w.size() != n - 1)
		throw ValidationError("forecast: weight vector length " + std::to_string(w.size()) +
		                      " does not match " + std::to_string(n - 1) + " past segments");
}

} // namespace

DecomposedSeries::DecomposedSeries(const SegmentSeries& series, const wavelet::Basis& basis,
                                   int levels, int jobs)
	: series_(&series), basis_(basis) {
	if (series.size() == 0) throw ValidationError("DecomposedSeries: empty series");
	if (series.H() < 2) throw ValidationError("DecomposedSeries: H must be >= 2");
	const std::size_t n = series.size();
	const int h = series.H();
	decomps_.resize(n);
	smooth_.resize(n);
	detail_.resize(n);
	parallel_for(n, jobs, [&](std::size_t i) {
		decomps_[i] = wavelet::analyze(series[i].values, basis_, levels);
		auto [s, d] = wavelet::smooth_detail_split(decomps_[i], basis_);
		smooth_[i] = to_h(std::move(s), h);
		detail_[i] = to_h(std::move(d), h);
	});
}

std::string weight_stage_name(WeightStage s) {
	switch (s) {
	case WeightStage::Filtered: return "filtered";
	case WeightStage::Unfiltered: return "unfiltered";
	case WeightStage::UniformInGroup: return "uniform-in-group";
	}
	return {};
}

ForecastBundle forecast_stationary(const DecomposedSeries& ds, std::size_t n,
                                   const similarity::WeightVector& w) {
	check_weights(ds, n, w, 2);
	const int h = ds.series().H();
	ForecastBundle out;
	out.weights = w;
	out.weight_stage = w.filtered ? WeightStage::Filtered : WeightStage::Unfiltered;
	out.smooth_part.assign(h, 0.0);
	out.detail_part.assign(h, 0.0);
	for (std::size_t m = 0; m + 1 < n; ++m) {
		if (w[m] == 0.0) continue;
		const auto& s = ds.smooth(m + 1);
		const auto& d = ds.detail(m + 1);
		for (int i = 0; i < h; ++i) {
			out.smooth_part[i] += w[m] * s[i];
			out.detail_part[i] += w[m] * d[i];
		}
	}
	out.point.resize(h);
	for (int i = 0; i < h; ++i) out.point[i] = out.smooth_part[i] + out.detail_part[i];
	return out;
}

ForecastBundle forecast_corrected(const DecomposedSeries& ds, std::size_t n,
                                  const similarity::WeightVector& w) {
	check_weights(ds, n, w, 3);
	const int h = ds.series().H();
	ForecastBundle out;
	out.weights = w;
	out.weight_stage = w.filtered ? WeightStage::Filtered : WeightStage::Unfiltered;

	out.detail_part.assign(h, 0.0);
	for (std::size_t m = 0; m + 1 < n; ++m) {
		if (w[m] == 0.0) continue;
		const auto& d = ds.detail(m + 1);
		for (int i = 0; i < h; ++i) out.detail_part[i] += w[m] * d[i];
	}

	// The first past segment has no predecessor, so its increment is
	// undefined; its weight is renormalized away. With no mass left the
	// increment average degenerates to zero (smooth part carried forward).
	double mass = 0.0;
	for (std::size_t m = 1; m + 1 < n; ++m) mass += w[m];
	out.smooth_part = ds.smooth(n - 1);
	if (mass > 0.0) {
		for (std::size_t m = 1; m + 1 < n; ++m) {
			if (w[m] == 0.0) continue;
			const auto& cur = ds.smooth(m);
			const auto& prev = ds.smooth(m - 1);
			const double wm = w[m] / mass;
			for (int i = 0; i < h; ++i) out.smooth_part[i] += wm * (cur[i] - prev[i]);
		}
	}

	out.point.resize(h);
	for (int i = 0; i < h; ++i) out.point[i] = out.smooth_part[i] + out.detail_part[i];
	return out;
}

void draw_bootstrap(const DecomposedSeries& ds, std::size_t n, const similarity::WeightVector& w,
                    int n_paths, std::uint64_t seed, ForecastBundle& bundle) {
	check_weights(ds, n, w, 2);
	if (n_paths < 1) throw ValidationError("draw_bootstrap: B must be >= 1");
	std::vector<double> cumulative(w.size());
	double total = 0.0;
	for (std::size_t m = 0; m < w.size(); ++m) {
		if (w[m] < 0.0) throw ValidationError("draw_bootstrap: negative weight");
		total += w[m];
		cumulative[m] = total;
	}
	if (total <= 0.0) throw DegenerateWeightsError("draw_bootstrap: weights sum to zero");

	bundle.boot_paths.resize(n_paths);
	bundle.boot_smooth.resize(n_paths);
	bundle.boot_detail.resize(n_paths);
	bundle.boot_pick.resize(n_paths);
	bundle.rng_seed = seed;
	for (int b = 0; b < n_paths; ++b) {
		const double u = total * rng::uniform01(seed, static_cast<std::uint64_t>(b));
		auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
		std::size_t m = std::min<std::size_t>(it - cumulative.begin(), w.size() - 1);
		bundle.boot_pick[b] = static_cast<int>(m);
		bundle.boot_paths[b] = ds.series()[m + 1].values;
		bundle.boot_smooth[b] = ds.smooth(m + 1);
		bundle.boot_detail[b] = ds.detail(m + 1);
	}
	bundle.sigma = pointwise_sigma(bundle.boot_paths, &bundle.sigma_degenerate);
}

std::vector<double> pointwise_sigma(const std::vector<std::vector<double>>& paths,
                                    bool* degenerate) {
	if (paths.empty()) throw ValidationError("pointwise_sigma: no bootstrap paths");
	const std::size_t h = paths[0].size();
	std::vector<double> sigma(h, 0.0);
	if (degenerate) *degenerate = paths.size() < 2;
	if (paths.size() < 2) return sigma;
	const double nb = static_cast<double>(paths.size());
	for (std::size_t i = 0; i < h; ++i) {
		// centered on the first path so identical paths give an exact zero
		const double ref = paths[0][i];
		double m = 0.0;
		for (const auto& p : paths) m += p[i] - ref;
		m /= nb;
		double ss = 0.0;
		for (const auto& p : paths) {
			const double d = (p[i] - ref) - m;
			ss += d * d;
		}
		sigma[i] = std::sqrt(ss / (nb - 1.0));
	}
	return sigma;
}

std::vector<double> pointwise_sigma(const ForecastBundle& bundle, bool* degenerate) {
	return pointwise_sigma(bundle.boot_paths, degenerate);
}

WeightOutcome compute_weights(const DecomposedSeries& ds, std::size_t n, double bandwidth,
                              const ModelConfig& cfg) {
	if (n < 2 || n > ds.size())
		throw ValidationError("compute_weights: need 2 <= n <= series size");
	const similarity::KernelSpec spec{cfg.kernel, bandwidth};
	const auto past = ds.decomps().subspan(0, n - 1);
	const int current_group = ds.series()[n - 1].group;
	std::vector<int> groups(n - 1);
	for (std::size_t m = 0; m + 1 < n; ++m) groups[m] = ds.series()[m].group;

	std::optional<similarity::WeightVector> raw;
	try {
		raw = similarity::kernel_weights(ds.decomp(n - 1), past, spec, cfg.j0);
	} catch (const DegenerateWeightsError&) {
	}

	if (raw && cfg.group_filter) {
		try {
			return {similarity::group_filter(*raw, groups, current_group),
			        WeightStage::Filtered};
		} catch (const DegenerateWeightsError&) {
			return {*raw, WeightStage::Unfiltered};
		}
	}
	if (raw) return {*raw, WeightStage::Unfiltered};

	// Kernel support empty everywhere: fall back to uniform weights over the
	// past segments of the current group.
	similarity::WeightVector uniform;
	uniform.bandwidth_used = bandwidth;
	uniform.filtered = true;
	uniform.weights.assign(n - 1, 0.0);
	int in_group = 0;
	for (std::size_t m = 0; m + 1 < n; ++m)
		if (groups[m] == current_group) ++in_group;
	if (in_group == 0)
		throw DegenerateWeightsError("compute_weights: empty kernel support and no past "
		                             "segment in group " + std::to_string(current_group));
	for (std::size_t m = 0; m + 1 < n; ++m)
		if (groups[m] == current_group) uniform.weights[m] = 1.0 / in_group;
	return {uniform, WeightStage::UniformInGroup};
}

ForecastBundle forecast_day(const DecomposedSeries& ds, std::size_t n, double bandwidth,
                            const ModelConfig& cfg, bool with_bootstrap, std::uint64_t seed) {
	WeightOutcome wo = compute_weights(ds, n, bandwidth, cfg);
	ForecastBundle bundle = cfg.correction == Correction::Increment
	                            ? forecast_corrected(ds, n, wo.weights)
	                            : forecast_stationary(ds, n, wo.weights);
	bundle.weight_stage = wo.stage;
	if (with_bootstrap) draw_bootstrap(ds, n, wo.weights, cfg.B, seed, bundle);
	return bundle;
}

ForecastBundle forecast_stationary(const SegmentSeries& series, const similarity::WeightVector& w,
                                   const ModelConfig& cfg) {
	const DecomposedSeries ds(series, wavelet::Basis::from_name(cfg.wavelet), cfg.levels);
	return forecast_stationary(ds, series.size(), w);
}

ForecastBundle forecast_corrected(const SegmentSeries& series, const similarity::WeightVector& w,
                                  const ModelConfig& cfg) {
	const DecomposedSeries ds(series, wavelet::Basis::from_name(cfg.wavelet), cfg.levels);
	return forecast_corrected(ds, series.size(), w);
}

} // namespace kwf::forecast
