#pragma once

#include "kwf/data.hpp"
#include "kwf/wavelet.hpp"

#include <span>
#include <vector>

namespace kwf {
struct ModelConfig;
}

namespace kwf::similarity {

enum class KernelFamily { Gaussian, Epanechnikov };

double kernel_value(KernelFamily family, double u);

struct KernelSpec {
	KernelFamily family = KernelFamily::Gaussian;
	double bandwidth = 1.0;
};

// Probability weights over the past segments m = 0..n-2.
struct WeightVector {
	std::vector<double> weights;
	double bandwidth_used = 0.0;
	bool filtered = false;

	std::size_t size() const { return weights.size(); }
	double operator[](std::size_t i) const { return weights[i]; }
};

// Euclidean distance between the scale-j detail coefficients of a and b.
double scale_distance(const wavelet::Decomp& a, const wavelet::Decomp& b, int j);

// D(a, b) = sum_{j=j0}^{J-1} 2^{-j/2} * scale_distance(a, b, j).
// Invariant to adding a constant to either signal.
double dissimilarity(const wavelet::Decomp& a, const wavelet::Decomp& b, int j0 = 0);

// D(current, past[m]) for every m; jobs == 1 is the serial reference path.
std::vector<double> dissimilarity_to_past(const wavelet::Decomp& current,
                                          std::span<const wavelet::Decomp> past,
                                          int j0 = 0, int jobs = 1);

// w_m proportional to K(D(current, past[m]) / h), normalized to sum 1.
// Throws DegenerateWeightsError when every kernel value is zero.
WeightVector kernel_weights(const wavelet::Decomp& current,
                            std::span<const wavelet::Decomp> past,
                            const KernelSpec& spec, int j0 = 0, int jobs = 1);

// Same from precomputed dissimilarities.
WeightVector weights_from_distances(const std::vector<double>& distances, const KernelSpec& spec);

// Zeroes weights of past segments outside current_group and renormalizes.
// Throws DegenerateWeightsError when nothing in-group carries weight.
WeightVector group_filter(const WeightVector& w, std::span<const int> groups, int current_group);

// Grid search minimizing mean squared one-day-ahead forecast error over the
// last `window` days of the series; each replay sees only data before its
// target day. Ties break toward the smaller bandwidth. Grid entries are
// evaluated independently (parallel when cfg requests it).
double calibrate_bandwidth(const SegmentSeries& series, const std::vector<double>& grid,
                           int window, const ModelConfig& cfg, int jobs = 1);

} // namespace kwf::similarity
