#pragma once

#include <string>
#include <utility>
#include <vector>

namespace kwf::wavelet {

// Orthonormal two-channel filter bank with periodic boundary handling.
// The high-pass is derived from the low-pass taps by the quadrature-mirror
// relation; construction verifies perfect reconstruction on seeded signals
// instead of trusting the taps.
class Basis {
public:
	Basis(std::string name, std::vector<double> low_pass);

	// Known names: "sym6" (default), "haar".
	static Basis from_name(const std::string& name);

	const std::string& name() const { return name_; }
	const std::vector<double>& low_pass() const { return low_pass_; }
	const std::vector<double>& high_pass() const { return high_pass_; }

private:
	std::string name_;
	std::vector<double> low_pass_;
	std::vector<double> high_pass_;
};

// Coefficient set of one segment. details[j] holds scale j, where
// j = levels-1 is the finest scale; with a full-depth transform details[j]
// has 2^j entries and the approximation a single one.
struct Decomp {
	std::vector<double> approx;
	std::vector<std::vector<double>> details;
	int original_length = 0; // sample count before resampling
	int dyadic_length = 0;   // total coefficient count

	int levels() const { return static_cast<int>(details.size()); }
};

// Smallest power of two >= h.
int dyadic_ceil(int h);

// Linear interpolation of h samples onto n equally spaced points over the
// same span; endpoints are preserved exactly. Requires n >= h.
std::vector<double> resample_to_dyadic(const std::vector<double>& values, int n);

// Exact inverse of resample_to_dyadic on its range (least-squares solve of
// the interpolation system); plain re-interpolation back would not satisfy
// the round-trip tolerance.
std::vector<double> resample_from_dyadic(const std::vector<double>& values, int h);

// Periodized pyramid transform. levels == 0 decomposes down to a length-1
// approximation. Input length must be a power of two.
Decomp dwt(const std::vector<double>& values, const Basis& basis, int levels = 0);
std::vector<double> idwt(const Decomp& decomp, const Basis& basis);

// resample_to_dyadic + dwt, remembering the original length.
Decomp analyze(const std::vector<double>& values, const Basis& basis, int levels = 0);
// idwt + resample_from_dyadic back to the original length.
std::vector<double> synthesize(const Decomp& decomp, const Basis& basis);

// S = inverse transform of the approximation alone, D = of the details alone;
// S + D equals idwt(decomp) up to rounding. Both at dyadic length.
std::pair<std::vector<double>, std::vector<double>> smooth_detail_split(const Decomp& decomp,
                                                                        const Basis& basis);

} // namespace kwf::wavelet
