#include "kwf/errors.hpp"
#include "kwf/rng.hpp"
#include "kwf/wavelet.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace kwf;
using wavelet::Basis;

namespace {

std::vector<double> random_signal(std::uint64_t seed, int n, double scale = 1.0) {
	std::vector<double> x(n);
	for (int i = 0; i < n; ++i)
		x[i] = scale * (2.0 * rng::uniform01(seed, static_cast<std::uint64_t>(i)) - 1.0);
	return x;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
	double m = 0.0;
	for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
	return m;
}

double energy(const std::vector<double>& v) {
	double s = 0.0;
	for (double x : v) s += x * x;
	return s;
}

double coefficient_energy(const wavelet::Decomp& d) {
	double s = energy(d.approx);
	for (const auto& level : d.details) s += energy(level);
	return s;
}

} // namespace

TEST_CASE("basis construction") {
	const Basis sym6 = Basis::from_name("sym6");
	CHECK(sym6.low_pass().size() == 12);
	double sum = 0.0;
	for (double t : sym6.low_pass()) sum += t;
	CHECK(sum == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
	// quadrature-mirror relation
	const auto& lo = sym6.low_pass();
	const auto& hi = sym6.high_pass();
	for (std::size_t i = 0; i < lo.size(); ++i)
		CHECK(hi[i] == (i % 2 == 0 ? 1.0 : -1.0) * lo[lo.size() - 1 - i]);

	CHECK_NOTHROW(Basis::from_name("haar"));
	CHECK_THROWS_AS(Basis::from_name("db4"), ValidationError);
	// broken taps fail the reconstruction self-check
	CHECK_THROWS_AS(Basis("broken", std::vector<double>{0.3, 0.4, 0.5, 0.6}), ValidationError);
}

TEST_CASE("resample_to_dyadic") {
	CHECK(wavelet::dyadic_ceil(48) == 64);
	CHECK(wavelet::dyadic_ceil(64) == 64);

	const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
	CHECK(wavelet::resample_to_dyadic(x, 4) == x); // already dyadic: identity

	const auto up = wavelet::resample_to_dyadic({0.0, 1.0}, 4);
	REQUIRE(up.size() == 4);
	CHECK(up[0] == 0.0);
	CHECK(up[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
	CHECK(up[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
	CHECK(up[3] == 1.0);

	const auto flat = wavelet::resample_to_dyadic(std::vector<double>(48, 3.25), 64);
	for (double v : flat) CHECK(v == doctest::Approx(3.25).epsilon(1e-15));

	CHECK_THROWS_AS(wavelet::resample_to_dyadic(x, 3), ValidationError);
}

TEST_CASE("resample_from_dyadic inverts the interpolation") {
	const std::vector<double> x{5.0, 6.0, 7.0};
	CHECK(wavelet::resample_from_dyadic(x, 3) == x);

	const auto two = wavelet::resample_from_dyadic({0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}, 2);
	REQUIRE(two.size() == 2);
	CHECK(two[0] == doctest::Approx(0.0).epsilon(1e-12));
	CHECK(two[1] == doctest::Approx(1.0).epsilon(1e-12));

	const auto flat = wavelet::resample_from_dyadic(std::vector<double>(64, 2.5), 48);
	for (double v : flat) CHECK(v == doctest::Approx(2.5).epsilon(1e-12));

	for (std::uint64_t trial = 0; trial < 200; ++trial) {
		const auto original = random_signal(900 + trial, 48, 100.0);
		const auto round =
		    wavelet::resample_from_dyadic(wavelet::resample_to_dyadic(original, 64), 48);
		CHECK(max_abs_diff(original, round) < 1e-9);
	}

	CHECK_THROWS_AS(wavelet::resample_from_dyadic(x, 5), ValidationError);
}

TEST_CASE("dwt basics") {
	const Basis basis = Basis::from_name("sym6");

	const wavelet::Decomp zero = wavelet::dwt(std::vector<double>(64, 0.0), basis);
	for (double c : zero.approx) CHECK(c == 0.0);
	for (const auto& level : zero.details)
		for (double c : level) CHECK(c == 0.0);

	// constant: details vanish, approximation carries the 2^{J/2}-scaled mass
	const double c = 4.2;
	const wavelet::Decomp flat = wavelet::dwt(std::vector<double>(64, c), basis);
	REQUIRE(flat.approx.size() == 1);
	CHECK(flat.approx[0] == doctest::Approx(c * 8.0).epsilon(1e-12));
	for (const auto& level : flat.details)
		for (double d : level) CHECK(std::abs(d) < 1e-10);

	// full-depth shape: details[j] has 2^j entries, j = J-1 finest
	const wavelet::Decomp shape = wavelet::dwt(random_signal(1, 64), basis);
	REQUIRE(shape.levels() == 6);
	for (int j = 0; j < 6; ++j) CHECK(shape.details[j].size() == (1u << j));
	CHECK(shape.dyadic_length == 64);

	// depth override
	const wavelet::Decomp shallow = wavelet::dwt(random_signal(1, 64), basis, 3);
	REQUIRE(shallow.levels() == 3);
	CHECK(shallow.approx.size() == 8);
	CHECK(shallow.details[0].size() == 8);
	CHECK(shallow.details[2].size() == 32);

	CHECK_THROWS_AS(wavelet::dwt(std::vector<double>(48, 1.0), basis), ValidationError);
	CHECK_THROWS_AS(wavelet::dwt(std::vector<double>(64, 1.0), basis, 7), ValidationError);
}

TEST_CASE("round trip and Parseval over 1000 seeded signals") {
	const Basis basis = Basis::from_name("sym6");
	double worst_rt = 0.0, worst_parseval = 0.0;
	for (std::uint64_t trial = 0; trial < 1000; ++trial) {
		const auto x = random_signal(3000 + trial, 64, 10.0);
		const wavelet::Decomp d = wavelet::dwt(x, basis);
		worst_rt = std::max(worst_rt, max_abs_diff(wavelet::idwt(d, basis), x));
		worst_parseval = std::max(
		    worst_parseval, std::abs(coefficient_energy(d) - energy(x)) / energy(x));
	}
	CHECK(worst_rt < 1e-10);
	CHECK(worst_parseval < 1e-9);
}

TEST_CASE("adding a constant moves only the approximation") {
	const Basis basis = Basis::from_name("sym6");
	for (std::uint64_t trial = 0; trial < 50; ++trial) {
		auto x = random_signal(4000 + trial, 64, 5.0);
		const wavelet::Decomp before = wavelet::dwt(x, basis);
		for (double& v : x) v += 123.456;
		const wavelet::Decomp after = wavelet::dwt(x, basis);
		for (int j = 0; j < before.levels(); ++j)
			CHECK(max_abs_diff(before.details[j], after.details[j]) < 1e-10);
		CHECK(std::abs(after.approx[0] - before.approx[0] - 123.456 * 8.0) < 1e-9);
	}
}

TEST_CASE("smooth/detail split") {
	const Basis basis = Basis::from_name("sym6");

	const std::vector<double> flat(64, 7.5);
	const auto [s_flat, d_flat] = wavelet::smooth_detail_split(wavelet::dwt(flat, basis), basis);
	CHECK(max_abs_diff(s_flat, flat) < 1e-10);
	for (double v : d_flat) CHECK(std::abs(v) < 1e-10);

	// a single finest-scale detail atom has no smooth part
	wavelet::Decomp atom = wavelet::dwt(std::vector<double>(64, 0.0), basis);
	atom.details[5][13] = 1.0;
	const auto [s_atom, d_atom] = wavelet::smooth_detail_split(atom, basis);
	for (double v : s_atom) CHECK(std::abs(v) < 1e-12);
	CHECK(energy(d_atom) == doctest::Approx(1.0).epsilon(1e-10));

	for (std::uint64_t trial = 0; trial < 100; ++trial) {
		const auto x = random_signal(5000 + trial, 64, 3.0);
		const wavelet::Decomp d = wavelet::dwt(x, basis);
		const auto [s, detail] = wavelet::smooth_detail_split(d, basis);
		std::vector<double> sum(s.size());
		for (std::size_t i = 0; i < s.size(); ++i) sum[i] = s[i] + detail[i];
		CHECK(max_abs_diff(sum, wavelet::idwt(d, basis)) < 1e-10);
	}
}

TEST_CASE("analyze/synthesize bridges H=48 to the dyadic grid") {
	const Basis basis = Basis::from_name("sym6");
	for (std::uint64_t trial = 0; trial < 100; ++trial) {
		const auto x = random_signal(6000 + trial, 48, 20.0);
		const wavelet::Decomp d = wavelet::analyze(x, basis);
		CHECK(d.original_length == 48);
		CHECK(d.dyadic_length == 64);
		CHECK(max_abs_diff(wavelet::synthesize(d, basis), x) < 1e-9);
	}
}

TEST_CASE("signals shorter than the filter still reconstruct") {
	// periodization folds the 12 sym6 taps onto length-2 and length-4 grids
	const Basis basis = Basis::from_name("sym6");
	for (int n : {2, 4, 8}) {
		for (std::uint64_t trial = 0; trial < 20; ++trial) {
			const auto x = random_signal(7700 + trial, n, 3.0);
			CHECK(max_abs_diff(wavelet::idwt(wavelet::dwt(x, basis), basis), x) < 1e-10);
		}
	}
}

TEST_CASE("haar basis reconstructs too") {
	const Basis haar = Basis::from_name("haar");
	for (std::uint64_t trial = 0; trial < 50; ++trial) {
		const auto x = random_signal(7000 + trial, 32, 5.0);
		CHECK(max_abs_diff(wavelet::idwt(wavelet::dwt(x, haar), haar), x) < 1e-12);
	}
	// two-point average/difference at the first level
	const wavelet::Decomp d = wavelet::dwt({1.0, 3.0}, haar);
	CHECK(d.approx[0] == doctest::Approx(4.0 / std::sqrt(2.0)).epsilon(1e-15));
	CHECK(std::abs(d.details[0][0]) == doctest::Approx(2.0 / std::sqrt(2.0)).epsilon(1e-15));
}
