#include "kwf/config.hpp"
#include "kwf/data.hpp"
#include "kwf/errors.hpp"
#include "kwf/eval.hpp"
#include "kwf/forecast.hpp"
#include "kwf/intervals.hpp"
#include "kwf/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace kwf;

std::string format_double(double v) {
	char buf[32];
	auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
	(void)ec;
	return std::string(buf, end);
}

SegmentSeries load_series(const RunConfig& cfg) {
	if (!cfg.input.empty()) return load_csv(cfg.input, make_grouping(cfg));
	return generate_synthetic(cfg.synthetic);
}

void apply_overrides(RunConfig& cfg, long seed, const std::string& out, int jobs) {
	if (seed >= 0) {
		cfg.synthetic.seed = static_cast<std::uint64_t>(seed);
		cfg.model.seed = static_cast<std::uint64_t>(seed);
	}
	if (!out.empty()) cfg.out_dir = out;
	if (jobs >= 0) cfg.jobs = jobs;
}

int cmd_generate(const std::string& config_path, long seed, const std::string& out_file) {
	RunConfig cfg = load_config(config_path);
	apply_overrides(cfg, seed, "", -1);
	const SegmentSeries series = generate_synthetic(cfg.synthetic);
	std::string path = out_file;
	if (path.empty()) {
		std::filesystem::create_directories(cfg.out_dir);
		path = (std::filesystem::path(cfg.out_dir) / "synthetic.csv").string();
	} else if (const auto parent = std::filesystem::path(path).parent_path(); !parent.empty()) {
		std::filesystem::create_directories(parent);
	}
	write_csv(series, path);
	std::cout << "wrote " << series.size() * static_cast<std::size_t>(series.H()) << " rows ("
	          << series.size() << " days of " << series.H() << " samples) to " << path << "\n";
	return 0;
}

void write_forecast_files(const eval::BacktestResult& result, const RunConfig& cfg,
                          bool with_actual, double bandwidth) {
	const eval::DayRecord& day = result.per_day.front();
	std::filesystem::create_directories(cfg.out_dir);
	const auto dir = std::filesystem::path(cfg.out_dir);
	const std::string date = format_date(day.date);

	const std::string csv_path = (dir / ("forecast_" + date + ".csv")).string();
	{
		std::ofstream out(csv_path, std::ios::binary);
		if (!out) throw ValidationError("cannot write '" + csv_path + "'");
		out << "date,instant,actual,point,method,alpha,lower,upper\n";
		for (std::size_t m = 0; m < result.methods.size(); ++m)
			for (std::size_t a = 0; a < result.alphas.size(); ++a) {
				const auto& band = day.bands[m * result.alphas.size() + a];
				for (std::size_t i = 0; i < day.point.size(); ++i) {
					out << date << ',' << i << ',';
					if (with_actual) out << format_double(day.actual[i]);
					out << ',' << format_double(day.point[i]) << ','
					    << method_key(result.methods[m]) << ','
					    << format_double(result.alphas[a]) << ','
					    << format_double(band.lower[i]) << ','
					    << format_double(band.upper[i]) << '\n';
				}
			}
	}

	nlohmann::json doc;
	doc["date"] = date;
	doc["bandwidth"] = bandwidth;
	doc["point"] = day.point;
	if (with_actual) doc["actual"] = day.actual;
	for (std::size_t m = 0; m < result.methods.size(); ++m)
		for (std::size_t a = 0; a < result.alphas.size(); ++a) {
			const auto& band = day.bands[m * result.alphas.size() + a];
			nlohmann::json jb;
			jb["method"] = method_name(band.method);
			jb["alpha"] = band.alpha;
			if (band.method == Method::KFWE) jb["k"] = band.k_allow;
			jb["lower"] = band.lower;
			jb["upper"] = band.upper;
			doc["bands"].push_back(std::move(jb));
		}
	const std::string json_path = (dir / ("forecast_" + date + ".json")).string();
	std::ofstream out(json_path, std::ios::binary);
	if (!out) throw ValidationError("cannot write '" + json_path + "'");
	out << doc.dump(2) << '\n';
	std::cout << "wrote " << csv_path << " and " << json_path << "\n";
}

int cmd_forecast(const std::string& config_path, const std::string& date_text, long seed,
                 const std::string& out, int jobs) {
	RunConfig cfg = load_config(config_path);
	apply_overrides(cfg, seed, out, jobs);
	const Date target = parse_date(date_text);
	SegmentSeries series = load_series(cfg);

	std::size_t n = series.size();
	for (std::size_t i = 0; i < series.size(); ++i)
		if (series[i].date == target) {
			n = i;
			break;
		}

	if (n < series.size()) {
		// Target inside the series: run the one-day backtest so the result
		// matches the corresponding backtest day exactly.
		SegmentSeries head;
		head.samples_per_day = series.samples_per_day;
		head.sample_period = series.sample_period;
		head.segments.assign(series.segments.begin(), series.segments.begin() + n + 1);
		const auto result = eval::backtest(head, target, cfg);
		write_forecast_files(result, cfg, true, result.per_day.front().bandwidth);
		return 0;
	}

	if (target != series.segments.back().date + std::chrono::days(1))
		throw ValidationError("forecast date " + date_text +
		                      " is neither inside the series nor the day after its end (" +
		                      format_date(series.segments.back().date) + ")");

	// Day-ahead forecast past the end of the observed series.
	const Grouping grouping = make_grouping(cfg);
	for (Segment& seg : series.segments) seg.group = grouping.group_of(seg.date);
	const wavelet::Basis basis = wavelet::Basis::from_name(cfg.model.wavelet);
	const forecast::DecomposedSeries ds(series, basis, cfg.model.levels, cfg.jobs);
	double bandwidth = cfg.model.bandwidth;
	if (bandwidth <= 0.0)
		bandwidth = similarity::calibrate_bandwidth(series, cfg.model.bandwidth_grid,
		                                            cfg.model.calibration_window, cfg.model,
		                                            cfg.jobs);
	const auto bundle = forecast::forecast_day(
	    ds, series.size(), bandwidth, cfg.model, true,
	    rng::keyed(cfg.model.seed, static_cast<std::uint64_t>(day_number(target))));

	eval::BacktestResult result;
	result.methods = cfg.methods;
	result.alphas = cfg.alpha_levels;
	result.samples_per_day = series.H();
	eval::DayRecord day;
	day.date = target;
	day.point = bundle.point;
	day.actual.assign(bundle.point.size(), 0.0);
	day.bandwidth = bandwidth;
	day.weight_stage = bundle.weight_stage;
	for (Method m : cfg.methods)
		for (double alpha : cfg.alpha_levels)
			day.bands.push_back(
			    intervals::make_band(bundle, m, alpha, cfg.kfwe_k, cfg.nskwf_mode));
	result.per_day.push_back(std::move(day));
	write_forecast_files(result, cfg, false, bandwidth);
	return 0;
}

int cmd_backtest(const std::string& config_path, long seed, const std::string& out, int jobs) {
	RunConfig cfg = load_config(config_path);
	apply_overrides(cfg, seed, out, jobs);
	if (!cfg.has_test_start)
		throw ValidationError("backtest needs test_start in the config");
	const SegmentSeries series = load_series(cfg);
	const auto result = eval::backtest(series, cfg.test_start, cfg);
	const auto report = eval::summarize(result, cfg.report_alpha, cfg.curvewise_max_allow);
	eval::write_report(report, cfg.out_dir);
	if (cfg.dump_per_day)
		eval::write_per_day_csv(
		    result, (std::filesystem::path(cfg.out_dir) / "per_day.csv").string());
	std::size_t unfiltered = 0, uniform = 0;
	for (const auto& day : result.per_day) {
		if (day.weight_stage == forecast::WeightStage::Unfiltered && cfg.model.group_filter)
			++unfiltered;
		if (day.weight_stage == forecast::WeightStage::UniformInGroup) ++uniform;
	}
	if (unfiltered + uniform > 0)
		std::cerr << "weight fallbacks: " << unfiltered << " day(s) unfiltered, " << uniform
		          << " day(s) uniform-in-group\n";
	std::cout << result.per_day.size() << " test days, reports in " << cfg.out_dir << "\n\n"
	          << eval::render_report_text(report);
	return 0;
}

int cmd_report(const std::string& per_day_path, const std::string& out, double alpha,
               int max_allow) {
	const auto result = eval::read_per_day_csv(per_day_path);
	double report_alpha = alpha;
	if (report_alpha <= 0.0)
		report_alpha = *std::min_element(result.alphas.begin(), result.alphas.end());
	const auto report = eval::summarize(result, report_alpha, max_allow);
	if (!out.empty()) eval::write_report(report, out);
	std::cout << eval::render_report_text(report);
	return 0;
}

} // namespace

int main(int argc, char** argv) {
	CLI::App app{"KWF day-ahead forecaster with simultaneous prediction intervals"};
	app.require_subcommand(1);

	std::string config_path, date_text, out, per_day_path;
	long seed = -1;
	int jobs = -1;
	double report_alpha = -1.0;
	int max_allow = 3;

	auto* generate = app.add_subcommand("generate", "Write a synthetic load series as CSV");
	generate->add_option("-c,--config", config_path, "Config file")->required();
	generate->add_option("--seed", seed, "Override the seed");
	generate->add_option("--out", out, "Output CSV path (default <out>/synthetic.csv)");

	auto* forecast = app.add_subcommand("forecast", "Forecast one day with all bands");
	forecast->add_option("-c,--config", config_path, "Config file")->required();
	forecast->add_option("--date", date_text, "Target day (YYYY-MM-DD)")->required();
	forecast->add_option("--seed", seed, "Override the seed");
	forecast->add_option("--out", out, "Output directory");
	forecast->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

	auto* backtest = app.add_subcommand("backtest", "Rolling one-day-ahead evaluation");
	backtest->add_option("-c,--config", config_path, "Config file")->required();
	backtest->add_option("--seed", seed, "Override the seed");
	backtest->add_option("--out", out, "Output directory");
	backtest->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

	auto* report = app.add_subcommand("report", "Re-render tables from a per-day dump");
	report->add_option("--per-day", per_day_path, "per_day.csv from a backtest")->required();
	report->add_option("--out", out, "Output directory (optional)");
	report->add_option("--alpha", report_alpha, "Report level (default: smallest in dump)");
	report->add_option("--max-allow", max_allow, "Largest curve-wise allowance");

	CLI11_PARSE(app, argc, argv);

	try {
		if (app.got_subcommand(generate)) return cmd_generate(config_path, seed, out);
		if (app.got_subcommand(forecast))
			return cmd_forecast(config_path, date_text, seed, out, jobs);
		if (app.got_subcommand(backtest)) return cmd_backtest(config_path, seed, out, jobs);
		if (app.got_subcommand(report))
			return cmd_report(per_day_path, out, report_alpha, max_allow);
	} catch (const kwf::ValidationError& e) {
		std::cerr << "error: " << e.what() << "\n";
		return 1;
	} catch (const std::exception& e) {
		std::cerr << "runtime error: " << e.what() << "\n";
		return 2;
	}
	return 2;
}
