#pragma once

#include "kwf/config.hpp"
#include "kwf/forecast.hpp"
#include "kwf/intervals.hpp"

#include <string>
#include <utility>
#include <vector>

namespace kwf::eval {

struct DayRecord {
	Date date{};
	std::vector<double> actual;
	std::vector<double> point;
	std::vector<intervals::PredictionBand> bands; // one per method x alpha
	double bandwidth = 0.0;
	forecast::WeightStage weight_stage = forecast::WeightStage::Filtered;
};

struct BacktestResult {
	std::vector<DayRecord> per_day;
	std::vector<Method> methods;
	std::vector<double> alphas;
	int samples_per_day = 0;

	const intervals::PredictionBand& band(std::size_t day, Method m, double alpha) const;
};

// Rolling one-day-ahead evaluation from test_start to the end of the series.
// Bandwidth is recalibrated on a date-keyed cadence; bootstrap seeds are
// day-keyed, so results are independent of the test window and of jobs.
BacktestResult backtest(const SegmentSeries& series, Date test_start, const RunConfig& cfg);

// Average band width over all test days and instants.
double mean_amplitude(const BacktestResult& r, Method m, double alpha);

// Percent of (day, instant) pairs with lower <= actual <= upper.
double mean_coverage(const BacktestResult& r, Method m, double alpha);

// Percent of days with at most k_allow uncovered instants.
double curvewise_coverage(const BacktestResult& r, Method m, double alpha, int k_allow);

// Per-instant averages across test days: (amplitude, coverage percent).
std::pair<std::vector<double>, std::vector<double>> by_hour_profiles(const BacktestResult& r,
                                                                     Method m, double alpha);

struct EvalReport {
	std::vector<Method> methods;
	std::vector<double> alphas;
	std::vector<std::vector<double>> amplitude; // [method][alpha]
	std::vector<std::vector<double>> coverage;  // [method][alpha], percent
	double report_alpha = 0.05;
	std::vector<int> allowances;                 // curve-wise k' columns
	std::vector<std::vector<double>> curvewise;  // [method][k'], percent
	std::vector<std::vector<double>> by_hour_amplitude; // [method][instant]
	std::vector<std::vector<double>> by_hour_coverage;  // [method][instant]
};

EvalReport summarize(const BacktestResult& r, double report_alpha, int max_allow);

// Report files: amplitude.csv, coverage.csv, curvewise.csv,
// by_hour_<method>.csv and report.json under out_dir.
void write_report(const EvalReport& report, const std::string& out_dir);

// Raw dump with columns date,instant,actual,point,method,alpha,lower,upper.
void write_per_day_csv(const BacktestResult& r, const std::string& path);
BacktestResult read_per_day_csv(const std::string& path);

std::string render_report_text(const EvalReport& report);

} // namespace kwf::eval
