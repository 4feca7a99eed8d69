#pragma once

#include <stdexcept>
#include <string>

namespace kwf {

// Rejected input, file or configuration. The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
	explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Every candidate weight vanished (empty kernel support, or no past segment
// in the requested group). Callers walk the fallback chain
// filtered -> unfiltered -> uniform-in-group and record the stage used.
class DegenerateWeightsError : public std::runtime_error {
public:
	explicit DegenerateWeightsError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace kwf
