#pragma once

#include "kwf/data.hpp"
#include "kwf/similarity.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kwf {

enum class Correction { None, Increment };

enum class Method { SKWF, NSKWF, NP, KFWE };

// NS-KWF residual recombination: Disconnected takes independent quantiles of
// detail and smooth residuals; Connected reuses the smooth residual of the
// replicate that attains the detail quantile.
enum class NsMode { Disconnected, Connected };

std::string method_name(Method m); // "S-KWF", "NS-KWF", "NP", "KFWE"
std::string method_key(Method m);  // "skwf", "nskwf", "np", "kfwe"
Method method_from_key(const std::string& key);

// Everything the forecaster itself needs; shared by calibration, single-day
// forecasts and the backtest.
struct ModelConfig {
	std::string wavelet = "sym6";
	int levels = 0; // 0 = full depth
	int j0 = 0;
	similarity::KernelFamily kernel = similarity::KernelFamily::Gaussian;
	double bandwidth = 0.0; // 0 = calibrate on bandwidth_grid
	std::vector<double> bandwidth_grid = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
	int calibration_window = 28;
	Correction correction = Correction::Increment;
	bool group_filter = true;
	int B = 100;
	std::uint64_t seed = 1;
};

struct RunConfig {
	// data source: CSV path, or the synthetic generator when input is empty
	std::string input;
	SyntheticConfig synthetic;
	GroupScheme group_scheme = GroupScheme::DayOfWeek;
	std::string group_map; // CSV date,label; only for GroupScheme::UserMap

	ModelConfig model;

	std::vector<Method> methods = {Method::SKWF, Method::NSKWF, Method::NP, Method::KFWE};
	std::vector<double> alpha_levels = {0.20, 0.10, 0.05};
	int kfwe_k = 2;
	NsMode nskwf_mode = NsMode::Disconnected;

	Date test_start{};
	bool has_test_start = false;
	int recalibrate_days = 7;  // 1 = every day
	double report_alpha = 0.05; // level for by-hour profiles and curve-wise table
	int curvewise_max_allow = 3;
	bool dump_per_day = true;

	std::string out_dir = "out";
	int jobs = 1;
};

// Flat key-value file: one `key = value` per line, `#` comments.
// Unknown keys are rejected.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin = "config");

Grouping make_grouping(const RunConfig& cfg);

} // namespace kwf
