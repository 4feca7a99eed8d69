#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kwf {

// Thread count a `jobs` setting resolves to; 0 means all available.
inline int effective_jobs(int jobs) {
#ifdef _OPENMP
	return jobs <= 0 ? omp_get_max_threads() : jobs;
#else
	(void)jobs;
	return 1;
#endif
}

// Runs fn(i) for i in [0, n). jobs == 1 takes the plain serial loop, which is
// the reference path the determinism tests compare against. Iterations must
// be independent, write to disjoint slots and not throw.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& fn) {
	const int threads = effective_jobs(jobs);
	if (threads == 1 || n < 2) {
		for (std::size_t i = 0; i < n; ++i) fn(i);
		return;
	}
#ifdef _OPENMP
	#pragma omp parallel for schedule(static) num_threads(threads)
	for (long long i = 0; i < static_cast<long long>(n); ++i)
		fn(static_cast<std::size_t>(i));
#else
	for (std::size_t i = 0; i < n; ++i) fn(i);
#endif
}

} // namespace kwf
