#pragma once

#include <cstdint>

namespace kwf::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
	x += 0x9e3779b97f4a7c15ull;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
	return x ^ (x >> 31);
}

// Stateless counter-based generator: the value of (seed, counter) does not
// depend on evaluation order, so parallel consumers stay reproducible.
inline std::uint64_t keyed(std::uint64_t seed, std::uint64_t counter) {
	return splitmix64(seed ^ splitmix64(counter + 0x632be59bd9b4e019ull));
}

// Uniform in (0, 1), both ends excluded.
inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
	return (static_cast<double>(keyed(seed, counter) >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace kwf::rng
