#pragma once

#include "kwf/config.hpp"
#include "kwf/data.hpp"
#include "kwf/similarity.hpp"
#include "kwf/wavelet.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace kwf::forecast {

// Per-segment wavelet state computed once and shared by every forecast in a
// run: the coefficient set plus the smooth/detail reconstructions at the
// original H-point resolution.
class DecomposedSeries {
public:
	DecomposedSeries(const SegmentSeries& series, const wavelet::Basis& basis, int levels = 0,
	                 int jobs = 1);

	const SegmentSeries& series() const { return *series_; }
	const wavelet::Basis& basis() const { return basis_; }
	std::span<const wavelet::Decomp> decomps() const { return decomps_; }
	const wavelet::Decomp& decomp(std::size_t i) const { return decomps_[i]; }
	const std::vector<double>& smooth(std::size_t i) const { return smooth_[i]; }
	const std::vector<double>& detail(std::size_t i) const { return detail_[i]; }
	std::size_t size() const { return decomps_.size(); }

private:
	const SegmentSeries* series_;
	wavelet::Basis basis_;
	std::vector<wavelet::Decomp> decomps_;
	std::vector<std::vector<double>> smooth_;
	std::vector<std::vector<double>> detail_;
};

// Which stage of the fallback chain produced the weights actually used.
enum class WeightStage { Filtered, Unfiltered, UniformInGroup };

std::string weight_stage_name(WeightStage s);

struct ForecastBundle {
	std::vector<double> point;
	std::vector<double> smooth_part;
	std::vector<double> detail_part;
	std::vector<std::vector<double>> boot_paths;
	std::vector<std::vector<double>> boot_smooth;
	std::vector<std::vector<double>> boot_detail;
	std::vector<int> boot_pick; // drawn past index per path
	std::vector<double> sigma;
	similarity::WeightVector weights;
	std::uint64_t rng_seed = 0;
	WeightStage weight_stage = WeightStage::Filtered;
	bool sigma_degenerate = false;

	int horizon() const { return static_cast<int>(point.size()); }
	int n_paths() const { return static_cast<int>(boot_paths.size()); }
};

// Point forecast of segment n (0-based: the first n segments are observed)
// as the w-weighted average of successor coefficient sets. w must have n-1
// entries. Fills point/smooth_part/detail_part and records w.
ForecastBundle forecast_stationary(const DecomposedSeries& ds, std::size_t n,
                                   const similarity::WeightVector& w);

// Mean-increment correction: the smooth part is the last observed smooth
// part plus the weighted average of past smooth increments (the weight of
// the first past segment, whose increment is undefined, is renormalized
// away); details as in the stationary form. Requires n >= 3.
ForecastBundle forecast_corrected(const DecomposedSeries& ds, std::size_t n,
                                  const similarity::WeightVector& w);

// Draws B successor segments with probabilities w via inverse CDF over the
// cumulative weights, one stateless (seed, b) key per path. Fills boot_*,
// sigma and rng_seed on `bundle`.
void draw_bootstrap(const DecomposedSeries& ds, std::size_t n, const similarity::WeightVector& w,
                    int n_paths, std::uint64_t seed, ForecastBundle& bundle);

// Per-instant sample standard deviation of the bootstrap paths (divisor B-1).
// One path only: all zeros and *degenerate set.
std::vector<double> pointwise_sigma(const std::vector<std::vector<double>>& paths,
                                    bool* degenerate = nullptr);
std::vector<double> pointwise_sigma(const ForecastBundle& bundle, bool* degenerate = nullptr);

// Weights with the fallback chain applied:
// filtered -> unfiltered -> uniform over the current group -> error.
struct WeightOutcome {
	similarity::WeightVector weights;
	WeightStage stage = WeightStage::Filtered;
};
WeightOutcome compute_weights(const DecomposedSeries& ds, std::size_t n, double bandwidth,
                              const ModelConfig& cfg);

// Full pipeline for one target day: weights, point forecast per cfg.correction,
// optional bootstrap + sigma. `seed` keys the bootstrap draws.
ForecastBundle forecast_day(const DecomposedSeries& ds, std::size_t n, double bandwidth,
                            const ModelConfig& cfg, bool with_bootstrap, std::uint64_t seed);

// Convenience overloads that build the decomposition on the fly.
ForecastBundle forecast_stationary(const SegmentSeries& series, const similarity::WeightVector& w,
                                   const ModelConfig& cfg = {});
ForecastBundle forecast_corrected(const SegmentSeries& series, const similarity::WeightVector& w,
                                  const ModelConfig& cfg = {});

} // namespace kwf::forecast
