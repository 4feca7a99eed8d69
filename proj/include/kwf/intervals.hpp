#pragma once

#include "kwf/config.hpp"
#include "kwf/forecast.hpp"

#include <vector>

namespace kwf::intervals {

struct BandMeta {
	double d_max = 0.0;             // KFWE half-width multiplier
	std::vector<int> removed_paths; // NP removal order
	int lower_rank = 0;             // 1-based quantile ranks actually used
	int upper_rank = 0;
	bool degenerate_sigma = false;  // zero-width band warning
	bool quantile_tie = false;      // several replicates tied at a selected rank
	int connected_swaps = 0;        // instants where connected NS-KWF crossed
};

struct PredictionBand {
	std::vector<double> lower;
	std::vector<double> upper;
	Method method = Method::SKWF;
	double alpha = 0.0;
	int k_allow = 0; // only KFWE
	BandMeta meta;

	int horizon() const { return static_cast<int>(lower.size()); }
	double width(int i) const { return upper[i] - lower[i]; }
};

// Symmetric Gaussian band: point +- z_{1-alpha/2} * sigma.
PredictionBand pi_s_kwf(const forecast::ForecastBundle& b, double alpha);

// Quantiles of bootstrap residuals, detail and smooth parts separately.
// Lower rank is ceil(alpha*B), upper its mirror B+1-ceil(alpha*B).
PredictionBand pi_ns_kwf(const forecast::ForecastBundle& b, double alpha,
                         NsMode mode = NsMode::Disconnected);

// Nearest-path heuristic: repeatedly drop, among the paths attaining a
// pointwise extreme, the one farthest (Euclidean) from the point forecast;
// exactly floor(alpha*B) removals, then the envelope of the survivors.
PredictionBand pi_np(const forecast::ForecastBundle& b, double alpha);

// Family-wise error control up to k misses: band is point +- d_max * sigma
// where d_max is the nearest-rank 1-alpha quantile of the per-path k-th
// largest absolute standardized residual.
PredictionBand pi_kfwe(const forecast::ForecastBundle& b, double alpha, int k);

// Dispatch on method; k is only consulted for KFWE, mode only for NS-KWF.
PredictionBand make_band(const forecast::ForecastBundle& b, Method method, double alpha, int k,
                         NsMode mode);

} // namespace kwf::intervals
