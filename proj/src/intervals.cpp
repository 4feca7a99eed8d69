#include "kwf/intervals.hpp"

#include "kwf/errors.hpp"
#include "kwf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kwf::intervals {

namespace {

void check_alpha(double alpha) {
	if (!(alpha > 0.0) || !(alpha < 1.0))
		throw ValidationError("prediction band: alpha must be in (0, 1)");
}

bool all_zero(const std::vector<double>& v) {
	for (double x : v)
		if (x != 0.0) return false;
	return true;
}

PredictionBand new_band(const forecast::ForecastBundle& b, Method method, double alpha) {
	check_alpha(alpha);
	if (b.point.empty()) throw ValidationError("prediction band: bundle has no point forecast");
	PredictionBand band;
	band.method = method;
	band.alpha = alpha;
	band.lower.resize(b.point.size());
	band.upper.resize(b.point.size());
	return band;
}

// Value of the 1-based rank-th order statistic.
double order_statistic(std::vector<double> v, std::size_t rank) {
	std::nth_element(v.begin(), v.begin() + (rank - 1), v.end());
	return v[rank - 1];
}

} // namespace

PredictionBand pi_s_kwf(const forecast::ForecastBundle& b, double alpha) {
	PredictionBand band = new_band(b, Method::SKWF, alpha);
	if (b.sigma.size() != b.point.size())
		throw ValidationError("pi_s_kwf: bundle carries no sigma estimate");
	const double z = stats::inverse_normal_cdf(1.0 - alpha / 2.0);
	band.meta.degenerate_sigma = all_zero(b.sigma);
	for (std::size_t i = 0; i < b.point.size(); ++i) {
		band.lower[i] = b.point[i] - z * b.sigma[i];
		band.upper[i] = b.point[i] + z * b.sigma[i];
	}
	return band;
}

PredictionBand pi_ns_kwf(const forecast::ForecastBundle& b, double alpha, NsMode mode) {
	PredictionBand band = new_band(b, Method::NSKWF, alpha);
	const std::size_t n_paths = b.boot_paths.size();
	if (n_paths < 2)
		throw ValidationError("pi_ns_kwf: needs at least 2 bootstrap paths, got " +
		                      std::to_string(n_paths));
	if (b.boot_smooth.size() != n_paths || b.boot_detail.size() != n_paths)
		throw ValidationError("pi_ns_kwf: bundle lacks smooth/detail path decompositions");

	// Equal-tail nearest ranks: the upper rank mirrors the lower one.
	const std::size_t lower_rank = stats::nearest_rank(n_paths, alpha);
	const std::size_t upper_rank = std::max(n_paths + 1 - lower_rank, lower_rank);
	band.meta.lower_rank = static_cast<int>(lower_rank);
	band.meta.upper_rank = static_cast<int>(upper_rank);

	const std::size_t h = b.point.size();
	std::vector<double> detail_res(n_paths), smooth_res(n_paths);
	for (std::size_t i = 0; i < h; ++i) {
		for (std::size_t p = 0; p < n_paths; ++p) {
			detail_res[p] = b.boot_detail[p][i] - b.detail_part[i];
			smooth_res[p] = b.boot_smooth[p][i] - b.smooth_part[i];
		}
		const double r_lo = order_statistic(detail_res, lower_rank);
		const double r_hi = order_statistic(detail_res, upper_rank);
		double q_lo, q_hi;
		if (mode == NsMode::Disconnected) {
			q_lo = order_statistic(smooth_res, lower_rank);
			q_hi = order_statistic(smooth_res, upper_rank);
		} else {
			// Smooth term of the replicate attaining the detail quantile;
			// lowest replicate index on ties.
			auto attaining = [&](double value) {
				std::size_t first = n_paths;
				int count = 0;
				for (std::size_t p = 0; p < n_paths; ++p)
					if (detail_res[p] == value) {
						if (first == n_paths) first = p;
						++count;
					}
				if (count > 1) band.meta.quantile_tie = true;
				return first;
			};
			q_lo = smooth_res[attaining(r_lo)];
			q_hi = smooth_res[attaining(r_hi)];
		}
		double lo = b.point[i] + r_lo + q_lo;
		double hi = b.point[i] + r_hi + q_hi;
		if (lo > hi) {
			std::swap(lo, hi);
			++band.meta.connected_swaps;
		}
		band.lower[i] = lo;
		band.upper[i] = hi;
	}
	return band;
}

PredictionBand pi_np(const forecast::ForecastBundle& b, double alpha) {
	PredictionBand band = new_band(b, Method::NP, alpha);
	const std::size_t n_paths = b.boot_paths.size();
	if (n_paths == 0) throw ValidationError("pi_np: bundle has no bootstrap paths");
	const std::size_t h = b.point.size();
	const auto to_remove =
	    static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n_paths)));
	if (to_remove >= n_paths)
		throw ValidationError("pi_np: alpha*B removals would leave no path");

	std::vector<bool> alive(n_paths, true);
	std::vector<double> dist_sq(n_paths, 0.0);
	for (std::size_t p = 0; p < n_paths; ++p)
		for (std::size_t i = 0; i < h; ++i) {
			const double d = b.boot_paths[p][i] - b.point[i];
			dist_sq[p] += d * d;
		}

	for (std::size_t round = 0; round < to_remove; ++round) {
		// Paths attaining a pointwise extreme among the survivors.
		std::vector<bool> extreme(n_paths, false);
		for (std::size_t i = 0; i < h; ++i) {
			double lo = std::numeric_limits<double>::infinity();
			double hi = -std::numeric_limits<double>::infinity();
			for (std::size_t p = 0; p < n_paths; ++p) {
				if (!alive[p]) continue;
				lo = std::min(lo, b.boot_paths[p][i]);
				hi = std::max(hi, b.boot_paths[p][i]);
			}
			for (std::size_t p = 0; p < n_paths; ++p)
				if (alive[p] &&
				    (b.boot_paths[p][i] == lo || b.boot_paths[p][i] == hi))
					extreme[p] = true;
		}
		// Remove the extreme path farthest from the point forecast;
		// ties break toward the lowest path index.
		std::size_t victim = n_paths;
		for (std::size_t p = 0; p < n_paths; ++p)
			if (extreme[p] && (victim == n_paths || dist_sq[p] > dist_sq[victim]))
				victim = p;
		alive[victim] = false;
		band.meta.removed_paths.push_back(static_cast<int>(victim));
	}

	for (std::size_t i = 0; i < h; ++i) {
		double lo = std::numeric_limits<double>::infinity();
		double hi = -std::numeric_limits<double>::infinity();
		for (std::size_t p = 0; p < n_paths; ++p) {
			if (!alive[p]) continue;
			lo = std::min(lo, b.boot_paths[p][i]);
			hi = std::max(hi, b.boot_paths[p][i]);
		}
		band.lower[i] = lo;
		band.upper[i] = hi;
	}
	return band;
}

PredictionBand pi_kfwe(const forecast::ForecastBundle& b, double alpha, int k) {
	PredictionBand band = new_band(b, Method::KFWE, alpha);
	band.k_allow = k;
	const std::size_t h = b.point.size();
	if (k < 1 || static_cast<std::size_t>(k) > h)
		throw ValidationError("pi_kfwe: k must be in [1, H]");
	if (b.sigma.size() != h) throw ValidationError("pi_kfwe: bundle carries no sigma estimate");
	const std::size_t n_paths = b.boot_paths.size();
	if (n_paths == 0) throw ValidationError("pi_kfwe: bundle has no bootstrap paths");

	if (all_zero(b.sigma)) {
		band.meta.degenerate_sigma = true;
		band.lower = b.point;
		band.upper = b.point;
		return band;
	}

	std::vector<double> k_max(n_paths);
	std::vector<double> standardized(h);
	for (std::size_t p = 0; p < n_paths; ++p) {
		for (std::size_t i = 0; i < h; ++i)
			standardized[i] =
			    b.sigma[i] > 0.0 ? std::abs((b.boot_paths[p][i] - b.point[i]) / b.sigma[i])
			                     : 0.0;
		std::nth_element(standardized.begin(), standardized.begin() + (k - 1),
		                 standardized.end(), std::greater<>());
		k_max[p] = standardized[k - 1];
	}
	const std::size_t rank = stats::nearest_rank(n_paths, 1.0 - alpha);
	band.meta.upper_rank = static_cast<int>(rank);
	const double d_max = order_statistic(k_max, rank);
	band.meta.d_max = d_max;
	for (std::size_t i = 0; i < h; ++i) {
		band.lower[i] = b.point[i] - d_max * b.sigma[i];
		band.upper[i] = b.point[i] + d_max * b.sigma[i];
	}
	return band;
}

PredictionBand make_band(const forecast::ForecastBundle& b, Method method, double alpha, int k,
                         NsMode mode) {
	switch (method) {
	case Method::SKWF: return pi_s_kwf(b, alpha);
	case Method::NSKWF: return pi_ns_kwf(b, alpha, mode);
	case Method::NP: return pi_np(b, alpha);
	case Method::KFWE: return pi_kfwe(b, alpha, k);
	}
	throw ValidationError("make_band: unknown method");
}

} // namespace kwf::intervals
