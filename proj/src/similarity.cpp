#include "kwf/similarity.hpp"

#include "kwf/errors.hpp"
#include "kwf/parallel.hpp"

#include <cmath>

namespace kwf::similarity {

double kernel_value(KernelFamily family, double u) {
	switch (family) {
	case KernelFamily::Gaussian: return std::exp(-0.5 * u * u);
	case KernelFamily::Epanechnikov: return std::abs(u) < 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
	}
	return 0.0;
}

namespace {

void check_same_shape(const wavelet::Decomp& a, const wavelet::Decomp& b) {
	bool ok = a.dyadic_length == b.dyadic_length && a.levels() == b.levels() &&
	          a.approx.size() == b.approx.size();
	for (int j = 0; ok && j < a.levels(); ++j)
		ok = a.details[j].size() == b.details[j].size();
	if (!ok) throw ValidationError("dissimilarity: decompositions have different shapes");
}

} // namespace

double scale_distance(const wavelet::Decomp& a, const wavelet::Decomp& b, int j) {
	check_same_shape(a, b);
	if (j < 0 || j >= a.levels())
		throw ValidationError("scale_distance: scale " + std::to_string(j) + " out of range");
	double ss = 0.0;
	const auto& da = a.details[j];
	const auto& db = b.details[j];
	for (std::size_t k = 0; k < da.size(); ++k) {
		const double diff = da[k] - db[k];
		ss += diff * diff;
	}
	return std::sqrt(ss);
}

double dissimilarity(const wavelet::Decomp& a, const wavelet::Decomp& b, int j0) {
	check_same_shape(a, b);
	if (j0 < 0 || j0 >= a.levels())
		throw ValidationError("dissimilarity: j0=" + std::to_string(j0) + " out of range");
	double sum = 0.0;
	for (int j = j0; j < a.levels(); ++j)
		sum += std::exp2(-0.5 * j) * scale_distance(a, b, j);
	return sum;
}

std::vector<double> dissimilarity_to_past(const wavelet::Decomp& current,
                                          std::span<const wavelet::Decomp> past, int j0,
                                          int jobs) {
	std::vector<double> out(past.size());
	parallel_for(past.size(), jobs,
	             [&](std::size_t m) { out[m] = dissimilarity(current, past[m], j0); });
	return out;
}

WeightVector weights_from_distances(const std::vector<double>& distances, const KernelSpec& spec) {
	if (distances.empty()) throw ValidationError("kernel_weights: no past segments");
	if (!(spec.bandwidth > 0.0)) throw ValidationError("kernel_weights: bandwidth must be > 0");
	WeightVector out;
	out.bandwidth_used = spec.bandwidth;
	out.weights.resize(distances.size());
	double total = 0.0;
	for (std::size_t m = 0; m < distances.size(); ++m) {
		out.weights[m] = kernel_value(spec.family, distances[m] / spec.bandwidth);
		total += out.weights[m];
	}
	if (total <= 0.0)
		throw DegenerateWeightsError("kernel_weights: every kernel value is zero (h=" +
		                             std::to_string(spec.bandwidth) + ")");
	for (double& w : out.weights) w /= total;
	return out;
}

WeightVector kernel_weights(const wavelet::Decomp& current, std::span<const wavelet::Decomp> past,
                            const KernelSpec& spec, int j0, int jobs) {
	return weights_from_distances(dissimilarity_to_past(current, past, j0, jobs), spec);
}

WeightVector group_filter(const WeightVector& w, std::span<const int> groups, int current_group) {
	if (groups.size() != w.weights.size())
		throw ValidationError("group_filter: group labels do not align with weights");
	double total = 0.0;
	for (std::size_t m = 0; m < groups.size(); ++m)
		if (groups[m] == current_group) total += w.weights[m];
	if (total <= 0.0)
		throw DegenerateWeightsError("group_filter: no weight left in group " +
		                             std::to_string(current_group));
	WeightVector out;
	out.bandwidth_used = w.bandwidth_used;
	out.filtered = true;
	out.weights.resize(w.weights.size());
	for (std::size_t m = 0; m < groups.size(); ++m)
		out.weights[m] = groups[m] == current_group ? w.weights[m] / total : 0.0;
	return out;
}

} // namespace kwf::similarity
