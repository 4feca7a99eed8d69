#include "kwf/wavelet.hpp"

#include "kwf/errors.hpp"
#include "kwf/rng.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

namespace kwf::wavelet {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int log2i(int n) {
	int l = 0;
	while ((1 << l) < n) ++l;
	return l;
}

// Symmlet-6 scaling taps (least-asymmetric orthonormal family, 6 vanishing
// moments, 12 taps).
const std::vector<double> kSym6Low = {
	0.015404109327044824,  0.0034907120842221626, -0.11799011114852002,
	-0.04831174258569806,  0.49105594192797375,   0.787641141028651,
	0.3379294217281658,    -0.07263752278637658,  -0.02106029251237085,
	0.04472490177078139,   0.0017677118642540077, -0.00780070832503238,
};

const std::vector<double> kHaarLow = {
	0.70710678118654752440,
	0.70710678118654752440,
};

// One pyramid step: correlate with periodic wrap, keep every second output.
void analysis_step(const std::vector<double>& a, const std::vector<double>& lo,
                   const std::vector<double>& hi, std::vector<double>& c, std::vector<double>& d) {
	const int n = static_cast<int>(a.size());
	const int half = n / 2;
	const int taps = static_cast<int>(lo.size());
	c.assign(half, 0.0);
	d.assign(half, 0.0);
	for (int k = 0; k < half; ++k) {
		double sc = 0.0, sd = 0.0;
		const int base = 2 * k;
		for (int i = 0; i < taps; ++i) {
			const double v = a[(base + i) % n];
			sc += lo[i] * v;
			sd += hi[i] * v;
		}
		c[k] = sc;
		d[k] = sd;
	}
}

// Adjoint of analysis_step; exact inverse for an orthonormal filter pair.
void synthesis_step(const std::vector<double>& c, const std::vector<double>& d,
                    const std::vector<double>& lo, const std::vector<double>& hi,
                    std::vector<double>& a) {
	const int half = static_cast<int>(c.size());
	const int n = 2 * half;
	const int taps = static_cast<int>(lo.size());
	a.assign(n, 0.0);
	for (int k = 0; k < half; ++k) {
		const int base = 2 * k;
		for (int i = 0; i < taps; ++i) {
			const int m = (base + i) % n;
			a[m] += lo[i] * c[k] + hi[i] * d[k];
		}
	}
}

Decomp dwt_unchecked(const std::vector<double>& values, const std::vector<double>& lo,
                     const std::vector<double>& hi, int levels) {
	Decomp out;
	out.original_length = static_cast<int>(values.size());
	out.dyadic_length = static_cast<int>(values.size());
	out.details.resize(levels);
	std::vector<double> approx = values;
	std::vector<double> c, d;
	for (int step = 0; step < levels; ++step) {
		analysis_step(approx, lo, hi, c, d);
		out.details[levels - 1 - step] = std::move(d);
		d.clear();
		approx = std::move(c);
		c.clear();
	}
	out.approx = std::move(approx);
	return out;
}

std::vector<double> idwt_unchecked(const Decomp& decomp, const std::vector<double>& lo,
                                   const std::vector<double>& hi) {
	std::vector<double> approx = decomp.approx;
	std::vector<double> next;
	for (const auto& detail : decomp.details) {
		synthesis_step(approx, detail, lo, hi, next);
		approx = std::move(next);
		next.clear();
	}
	return approx;
}

void verify_perfect_reconstruction(const std::string& name, const std::vector<double>& lo,
                                   const std::vector<double>& hi) {
	const int n = 64;
	for (std::uint64_t trial = 0; trial < 3; ++trial) {
		std::vector<double> x(n);
		for (int i = 0; i < n; ++i)
			x[i] = 2.0 * rng::uniform01(0x57ee1b00ull + trial, static_cast<std::uint64_t>(i)) - 1.0;
		const Decomp d = dwt_unchecked(x, lo, hi, log2i(n));
		const std::vector<double> back = idwt_unchecked(d, lo, hi);
		for (int i = 0; i < n; ++i)
			if (std::abs(back[i] - x[i]) >= 1e-10)
				throw ValidationError("wavelet basis '" + name +
				                      "' fails the perfect-reconstruction check");
	}
}

} // namespace

Basis::Basis(std::string name, std::vector<double> low_pass)
	: name_(std::move(name)), low_pass_(std::move(low_pass)) {
	const int taps = static_cast<int>(low_pass_.size());
	if (taps < 2 || taps % 2 != 0)
		throw ValidationError("wavelet basis '" + name_ + "': tap count must be even and >= 2");
	high_pass_.resize(taps);
	for (int i = 0; i < taps; ++i)
		high_pass_[i] = (i % 2 == 0 ? 1.0 : -1.0) * low_pass_[taps - 1 - i];
	verify_perfect_reconstruction(name_, low_pass_, high_pass_);
}

Basis Basis::from_name(const std::string& name) {
	if (name == "sym6") return Basis("sym6", kSym6Low);
	if (name == "haar") return Basis("haar", kHaarLow);
	throw ValidationError("unknown wavelet basis '" + name + "' (known: sym6, haar)");
}

int dyadic_ceil(int h) {
	if (h <= 0) throw ValidationError("dyadic_ceil: length must be positive");
	int n = 1;
	while (n < h) n <<= 1;
	return n;
}

std::vector<double> resample_to_dyadic(const std::vector<double>& values, int n) {
	const int h = static_cast<int>(values.size());
	if (h == 0) throw ValidationError("resample_to_dyadic: empty input");
	if (n < h) throw ValidationError("resample_to_dyadic: target shorter than input");
	if (n == h) return values;
	if (h == 1) return std::vector<double>(n, values[0]);
	std::vector<double> out(n);
	for (int j = 0; j < n; ++j) {
		const double pos = static_cast<double>(j) * (h - 1) / (n - 1);
		int i0 = static_cast<int>(pos);
		if (i0 >= h - 1) i0 = h - 2;
		const double frac = pos - i0;
		out[j] = (1.0 - frac) * values[i0] + frac * values[i0 + 1];
	}
	out[0] = values[0];
	out[n - 1] = values[h - 1];
	return out;
}

std::vector<double> resample_from_dyadic(const std::vector<double>& values, int h) {
	const int n = static_cast<int>(values.size());
	if (h <= 0) throw ValidationError("resample_from_dyadic: target length must be positive");
	if (n < h) throw ValidationError("resample_from_dyadic: input shorter than target");
	if (n == h) return values;
	if (h == 1) {
		double s = 0.0;
		for (double v : values) s += v;
		return {s / n};
	}

	// Least-squares solve of the interpolation system: normal equations are
	// tridiagonal because every dyadic sample mixes two adjacent knots.
	std::vector<double> diag(h, 0.0), off(h - 1, 0.0), rhs(h, 0.0);
	for (int j = 0; j < n; ++j) {
		const double pos = static_cast<double>(j) * (h - 1) / (n - 1);
		int i0 = static_cast<int>(pos);
		if (i0 >= h - 1) i0 = h - 2;
		const double frac = pos - i0;
		const double w0 = 1.0 - frac, w1 = frac;
		diag[i0] += w0 * w0;
		diag[i0 + 1] += w1 * w1;
		off[i0] += w0 * w1;
		rhs[i0] += w0 * values[j];
		rhs[i0 + 1] += w1 * values[j];
	}
	// Thomas algorithm.
	std::vector<double> c(h - 1), x(h);
	c[0] = off[0] / diag[0];
	rhs[0] /= diag[0];
	for (int i = 1; i < h; ++i) {
		const double m = diag[i] - off[i - 1] * c[i - 1];
		if (i < h - 1) c[i] = off[i] / m;
		rhs[i] = (rhs[i] - off[i - 1] * rhs[i - 1]) / m;
	}
	x[h - 1] = rhs[h - 1];
	for (int i = h - 2; i >= 0; --i) x[i] = rhs[i] - c[i] * x[i + 1];
	return x;
}

Decomp dwt(const std::vector<double>& values, const Basis& basis, int levels) {
	const int n = static_cast<int>(values.size());
	if (!is_power_of_two(n))
		throw ValidationError("dwt: input length " + std::to_string(n) + " is not a power of two");
	const int max_levels = log2i(n);
	if (levels == 0) levels = max_levels;
	if (levels < 1 || levels > max_levels)
		throw ValidationError("dwt: levels must be in [1, " + std::to_string(max_levels) + "]");
	return dwt_unchecked(values, basis.low_pass(), basis.high_pass(), levels);
}

std::vector<double> idwt(const Decomp& decomp, const Basis& basis) {
	std::size_t len = decomp.approx.size();
	if (len == 0) throw ValidationError("idwt: empty approximation");
	for (const auto& detail : decomp.details) {
		if (detail.size() != len)
			throw ValidationError("idwt: detail level sizes do not form a pyramid");
		len *= 2;
	}
	return idwt_unchecked(decomp, basis.low_pass(), basis.high_pass());
}

Decomp analyze(const std::vector<double>& values, const Basis& basis, int levels) {
	const int h = static_cast<int>(values.size());
	const int n = dyadic_ceil(h);
	Decomp out = dwt(n == h ? values : resample_to_dyadic(values, n), basis, levels);
	out.original_length = h;
	return out;
}

std::vector<double> synthesize(const Decomp& decomp, const Basis& basis) {
	std::vector<double> x = idwt(decomp, basis);
	if (decomp.original_length == decomp.dyadic_length) return x;
	return resample_from_dyadic(x, decomp.original_length);
}

std::pair<std::vector<double>, std::vector<double>> smooth_detail_split(const Decomp& decomp,
                                                                        const Basis& basis) {
	Decomp smooth_only = decomp;
	for (auto& detail : smooth_only.details) detail.assign(detail.size(), 0.0);
	Decomp detail_only = decomp;
	detail_only.approx.assign(detail_only.approx.size(), 0.0);
	return {idwt(smooth_only, basis), idwt(detail_only, basis)};
}

} // namespace kwf::wavelet
