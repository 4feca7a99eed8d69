#pragma once

#include "kwf/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace kwf::stats {

// Standard normal quantile, accurate to full double precision
// (rational approximation refined by one Newton step on erfc).
double inverse_normal_cdf(double p);

double normal_cdf(double x);

// Standard normal draw for a stateless (seed, counter) key.
inline double normal01(std::uint64_t seed, std::uint64_t counter) {
	return inverse_normal_cdf(rng::uniform01(seed, counter));
}

// Nearest-rank empirical quantile: 1-based rank ceil(p * n), clamped to [1, n].
std::size_t nearest_rank(std::size_t n, double p);

// Value of nearest-rank quantile; sorts a copy of the sample.
double nearest_rank_quantile(std::vector<double> sample, double p);

double mean(const std::vector<double>& v);

// Sample standard deviation with divisor n-1; zero for n < 2.
double sample_sd(const std::vector<double>& v);

} // namespace kwf::stats
