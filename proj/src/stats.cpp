#include "kwf/stats.hpp"

#include "kwf/errors.hpp"

#include <algorithm>
#include <cmath>

namespace kwf::stats {

double normal_cdf(double x) {
	return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

namespace {

// Acklam's rational approximation, |relative error| < 1.2e-9.
double inverse_normal_approx(double p) {
	static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
	                           -2.759285104469687e+02, 1.383577518672690e+02,
	                           -3.066479806614716e+01, 2.506628277459239e+00};
	static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
	                           -1.556989798598866e+02, 6.680131188771972e+01,
	                           -1.328068155288572e+01};
	static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
	                           -2.400758277161838e+00, -2.549732539343734e+00,
	                           4.374664141464968e+00,  2.938163982698783e+00};
	static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
	                           2.445134137142996e+00, 3.754408661907416e+00};
	const double plow = 0.02425;

	if (p < plow) {
		double q = std::sqrt(-2.0 * std::log(p));
		return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
		       ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
	}
	if (p > 1.0 - plow) {
		double q = std::sqrt(-2.0 * std::log(1.0 - p));
		return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
		       ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
	}
	double q = p - 0.5;
	double r = q * q;
	return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
	       (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace

double inverse_normal_cdf(double p) {
	if (!(p > 0.0) || !(p < 1.0))
		throw ValidationError("inverse_normal_cdf: p must be in (0, 1)");
	double x = inverse_normal_approx(p);
	// One Newton step brings the approximation to machine precision.
	const double norm = 0.3989422804014326779; // 1/sqrt(2 pi)
	double density = norm * std::exp(-0.5 * x * x);
	if (density > 0.0) x -= (normal_cdf(x) - p) / density;
	return x;
}

std::size_t nearest_rank(std::size_t n, double p) {
	if (n == 0) throw ValidationError("nearest_rank: empty sample");
	auto rank = static_cast<long long>(std::ceil(p * static_cast<double>(n)));
	rank = std::clamp<long long>(rank, 1, static_cast<long long>(n));
	return static_cast<std::size_t>(rank);
}

double nearest_rank_quantile(std::vector<double> sample, double p) {
	const std::size_t rank = nearest_rank(sample.size(), p);
	std::nth_element(sample.begin(), sample.begin() + (rank - 1), sample.end());
	return sample[rank - 1];
}

double mean(const std::vector<double>& v) {
	if (v.empty()) return 0.0;
	double s = 0.0;
	for (double x : v) s += x;
	return s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
	if (v.size() < 2) return 0.0;
	const double m = mean(v);
	double ss = 0.0;
	for (double x : v) ss += (x - m) * (x - m);
	return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

} // namespace kwf::stats
