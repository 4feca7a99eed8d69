#include "kwf/eval.hpp"

#include "kwf/errors.hpp"
#include "text_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace kwf::eval {

namespace {

std::ofstream open_out(const std::string& path) {
	std::ofstream out(path, std::ios::binary);
	if (!out) throw ValidationError("cannot write '" + path + "'");
	return out;
}

void write_table_csv(const std::string& path, const std::vector<Method>& methods,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
	auto out = open_out(path);
	out << "method";
	for (const auto& c : columns) out << ',' << c;
	out << '\n';
	for (std::size_t m = 0; m < methods.size(); ++m) {
		out << method_name(methods[m]);
		for (double v : rows[m]) out << ',' << detail::format_double(v);
		out << '\n';
	}
}

} // namespace

void write_report(const EvalReport& report, const std::string& out_dir) {
	std::filesystem::create_directories(out_dir);
	const auto dir = std::filesystem::path(out_dir);

	std::vector<std::string> alpha_cols;
	for (double a : report.alphas) alpha_cols.push_back("alpha_" + detail::format_double(a));
	write_table_csv((dir / "amplitude.csv").string(), report.methods, alpha_cols,
	                report.amplitude);
	write_table_csv((dir / "coverage.csv").string(), report.methods, alpha_cols,
	                report.coverage);

	std::vector<std::string> allow_cols;
	for (int k : report.allowances) allow_cols.push_back("allow_" + std::to_string(k));
	write_table_csv((dir / "curvewise.csv").string(), report.methods, allow_cols,
	                report.curvewise);

	for (std::size_t m = 0; m < report.methods.size(); ++m) {
		auto out = open_out((dir / ("by_hour_" + method_key(report.methods[m]) + ".csv")).string());
		out << "instant,amplitude,coverage\n";
		for (std::size_t i = 0; i < report.by_hour_amplitude[m].size(); ++i)
			out << i << ',' << detail::format_double(report.by_hour_amplitude[m][i]) << ','
			    << detail::format_double(report.by_hour_coverage[m][i]) << '\n';
	}

	nlohmann::json doc;
	doc["alphas"] = report.alphas;
	doc["report_alpha"] = report.report_alpha;
	doc["allowances"] = report.allowances;
	for (std::size_t m = 0; m < report.methods.size(); ++m) {
		const std::string name = method_name(report.methods[m]);
		doc["methods"].push_back(name);
		doc["amplitude"][name] = report.amplitude[m];
		doc["coverage"][name] = report.coverage[m];
		doc["curvewise"][name] = report.curvewise[m];
		doc["by_hour"][name]["amplitude"] = report.by_hour_amplitude[m];
		doc["by_hour"][name]["coverage"] = report.by_hour_coverage[m];
	}
	auto out = open_out((dir / "report.json").string());
	out << doc.dump(2) << '\n';
}

void write_per_day_csv(const BacktestResult& r, const std::string& path) {
	auto out = open_out(path);
	out << "date,instant,actual,point,method,alpha,lower,upper\n";
	for (const DayRecord& day : r.per_day) {
		const std::string date = format_date(day.date);
		for (std::size_t m = 0; m < r.methods.size(); ++m) {
			const std::string method = method_key(r.methods[m]);
			for (std::size_t a = 0; a < r.alphas.size(); ++a) {
				const auto& band = day.bands[m * r.alphas.size() + a];
				const std::string alpha = detail::format_double(r.alphas[a]);
				for (std::size_t i = 0; i < day.actual.size(); ++i)
					out << date << ',' << i << ','
					    << detail::format_double(day.actual[i]) << ','
					    << detail::format_double(day.point[i]) << ','
					    << method << ',' << alpha << ','
					    << detail::format_double(band.lower[i]) << ','
					    << detail::format_double(band.upper[i]) << '\n';
			}
		}
	}
}

BacktestResult read_per_day_csv(const std::string& path) {
	std::ifstream in(path);
	if (!in) throw ValidationError("cannot open '" + path + "'");
	std::string line;
	if (!std::getline(in, line)) throw ValidationError(path + ": empty file");
	if (!line.empty() && line.back() == '\r') line.pop_back();
	if (line != "date,instant,actual,point,method,alpha,lower,upper")
		throw ValidationError(path + ": unexpected header '" + line + "'");

	BacktestResult result;
	std::map<std::string, std::size_t> day_index;
	long line_number = 1;
	while (std::getline(in, line)) {
		++line_number;
		if (!line.empty() && line.back() == '\r') line.pop_back();
		if (line.empty()) continue;
		const std::string where = path + ": row " + std::to_string(line_number);
		std::vector<std::string> fields;
		std::istringstream fs(line);
		std::string field;
		while (std::getline(fs, field, ',')) fields.push_back(field);
		if (fields.size() != 8) throw ValidationError(where + ": expected 8 columns");

		const Date date = parse_date(fields[0]);
		const auto instant = static_cast<std::size_t>(detail::parse_long(fields[1], where));
		const Method method = method_from_key(fields[4]);
		const double alpha = detail::parse_double(fields[5], where);

		auto [it, inserted] = day_index.emplace(fields[0], result.per_day.size());
		if (inserted) {
			result.per_day.emplace_back();
			result.per_day.back().date = date;
		}
		DayRecord& day = result.per_day[it->second];

		if (std::find(result.methods.begin(), result.methods.end(), method) ==
		    result.methods.end())
			result.methods.push_back(method);
		if (std::find(result.alphas.begin(), result.alphas.end(), alpha) ==
		    result.alphas.end())
			result.alphas.push_back(alpha);

		if (day.actual.size() <= instant) {
			day.actual.resize(instant + 1);
			day.point.resize(instant + 1);
		}
		if (fields[2].empty())
			throw ValidationError(where + ": empty actual column; only complete "
			                              "backtest dumps can be re-rendered");
		day.actual[instant] = detail::parse_double(fields[2], where);
		day.point[instant] = detail::parse_double(fields[3], where);

		const std::size_t mi =
		    std::find(result.methods.begin(), result.methods.end(), method) -
		    result.methods.begin();
		const std::size_t ai =
		    std::find(result.alphas.begin(), result.alphas.end(), alpha) -
		    result.alphas.begin();
		const std::size_t bi = mi * 16 + ai; // provisional slot, re-packed below
		if (day.bands.size() <= bi) day.bands.resize(bi + 1);
		auto& band = day.bands[bi];
		band.method = method;
		band.alpha = alpha;
		if (band.lower.size() <= instant) {
			band.lower.resize(instant + 1);
			band.upper.resize(instant + 1);
		}
		band.lower[instant] = detail::parse_double(fields[6], where);
		band.upper[instant] = detail::parse_double(fields[7], where);
	}
	if (result.per_day.empty()) throw ValidationError(path + ": no data rows");
	if (result.alphas.size() > 16) throw ValidationError(path + ": too many alpha levels");

	// Re-pack bands into the dense method x alpha layout.
	result.samples_per_day = static_cast<int>(result.per_day.front().actual.size());
	for (DayRecord& day : result.per_day) {
		std::vector<intervals::PredictionBand> packed;
		packed.reserve(result.methods.size() * result.alphas.size());
		for (std::size_t m = 0; m < result.methods.size(); ++m)
			for (std::size_t a = 0; a < result.alphas.size(); ++a) {
				const std::size_t bi = m * 16 + a;
				if (bi >= day.bands.size() ||
				    day.bands[bi].lower.size() !=
				        static_cast<std::size_t>(result.samples_per_day))
					throw ValidationError(path + ": day " + format_date(day.date) +
					                      " is missing instants for " +
					                      method_name(result.methods[m]));
				packed.push_back(std::move(day.bands[bi]));
			}
		day.bands = std::move(packed);
	}
	std::sort(result.per_day.begin(), result.per_day.end(),
	          [](const DayRecord& a, const DayRecord& b) { return a.date < b.date; });
	return result;
}

std::string render_report_text(const EvalReport& report) {
	std::ostringstream out;
	char buf[64];
	auto row_label = [&](const std::string& name) {
		std::snprintf(buf, sizeof(buf), "%-8s", name.c_str());
		out << buf;
	};

	out << "Mean amplitude\n";
	row_label("method");
	for (double a : report.alphas) {
		std::snprintf(buf, sizeof(buf), "%9.0f%%", 100.0 * (1.0 - a));
		out << buf;
	}
	out << '\n';
	for (std::size_t m = 0; m < report.methods.size(); ++m) {
		row_label(method_name(report.methods[m]));
		for (double v : report.amplitude[m]) {
			std::snprintf(buf, sizeof(buf), "%10.3f", v);
			out << buf;
		}
		out << '\n';
	}

	out << "\nMean coverage (%)\n";
	row_label("method");
	for (double a : report.alphas) {
		std::snprintf(buf, sizeof(buf), "%9.0f%%", 100.0 * (1.0 - a));
		out << buf;
	}
	out << '\n';
	for (std::size_t m = 0; m < report.methods.size(); ++m) {
		row_label(method_name(report.methods[m]));
		for (double v : report.coverage[m]) {
			std::snprintf(buf, sizeof(buf), "%10.2f", v);
			out << buf;
		}
		out << '\n';
	}

	std::snprintf(buf, sizeof(buf), "%.0f%%", 100.0 * (1.0 - report.report_alpha));
	out << "\nCurve-wise coverage (%) at " << buf << " confidence\n";
	row_label("method");
	for (int k : report.allowances) {
		std::snprintf(buf, sizeof(buf), "      k=%-2d", k);
		out << buf;
	}
	out << '\n';
	for (std::size_t m = 0; m < report.methods.size(); ++m) {
		row_label(method_name(report.methods[m]));
		for (double v : report.curvewise[m]) {
			std::snprintf(buf, sizeof(buf), "%10.2f", v);
			out << buf;
		}
		out << '\n';
	}
	return out.str();
}

} // namespace kwf::eval
