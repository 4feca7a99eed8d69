#include "kwf/config.hpp"

#include "kwf/errors.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace kwf {

std::string method_name(Method m) {
	switch (m) {
	case Method::SKWF: return "S-KWF";
	case Method::NSKWF: return "NS-KWF";
	case Method::NP: return "NP";
	case Method::KFWE: return "KFWE";
	}
	return {};
}

std::string method_key(Method m) {
	switch (m) {
	case Method::SKWF: return "skwf";
	case Method::NSKWF: return "nskwf";
	case Method::NP: return "np";
	case Method::KFWE: return "kfwe";
	}
	return {};
}

Method method_from_key(const std::string& key) {
	if (key == "skwf") return Method::SKWF;
	if (key == "nskwf") return Method::NSKWF;
	if (key == "np") return Method::NP;
	if (key == "kfwe") return Method::KFWE;
	throw ValidationError("unknown method '" + key + "' (known: skwf, nskwf, np, kfwe)");
}

namespace {

std::string trim(const std::string& s) {
	const auto first = s.find_first_not_of(" \t\r");
	if (first == std::string::npos) return {};
	const auto last = s.find_last_not_of(" \t\r");
	return s.substr(first, last - first + 1);
}

std::string unquote(std::string v) {
	if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
	                      (v.front() == '\'' && v.back() == '\'')))
		return v.substr(1, v.size() - 2);
	return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
	std::vector<std::string> parts;
	std::string item;
	std::istringstream in(s);
	while (std::getline(in, item, sep)) parts.push_back(trim(item));
	if (!s.empty() && s.back() == sep) parts.push_back("");
	return parts;
}

std::vector<double> parse_list(const std::string& value, const std::string& where) {
	std::vector<double> out;
	for (const auto& item : split(value, ','))
		out.push_back(detail::parse_double(item, where));
	return out;
}

bool parse_flag(const std::string& value, const std::string& where) {
	if (value == "on" || value == "true" || value == "1") return true;
	if (value == "off" || value == "false" || value == "0") return false;
	throw ValidationError(where + ": expected on/off, got '" + value + "'");
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value,
               const std::string& where) {
	// data
	if (key == "input") cfg.input = value;
	else if (key == "n_days") cfg.synthetic.n_days = static_cast<int>(detail::parse_long(value, where));
	else if (key == "H") cfg.synthetic.samples_per_day = static_cast<int>(detail::parse_long(value, where));
	else if (key == "trend_slope") cfg.synthetic.trend_slope = detail::parse_double(value, where);
	else if (key == "annual_amplitude") cfg.synthetic.annual_amplitude = detail::parse_double(value, where);
	else if (key == "weekly_profile") {
		const auto values = parse_list(value, where);
		if (values.size() != 7) throw ValidationError(where + ": weekly_profile needs 7 values");
		std::copy(values.begin(), values.end(), cfg.synthetic.weekly_profile.begin());
	} else if (key == "daily_shapes") {
		cfg.synthetic.daily_shapes.clear();
		for (const auto& row : split(value, ';'))
			cfg.synthetic.daily_shapes.push_back(parse_list(row, where));
	} else if (key == "noise_sd") cfg.synthetic.noise_sd = detail::parse_double(value, where);
	else if (key == "seed") {
		cfg.synthetic.seed = static_cast<std::uint64_t>(detail::parse_long(value, where));
		cfg.model.seed = cfg.synthetic.seed;
	} else if (key == "start_date") cfg.synthetic.start_date = parse_date(value);
	else if (key == "group_scheme") {
		if (value == "dow7") cfg.group_scheme = GroupScheme::DayOfWeek;
		else if (value == "three") cfg.group_scheme = GroupScheme::WeekdaySatSun;
		else if (value == "map") cfg.group_scheme = GroupScheme::UserMap;
		else throw ValidationError(where + ": group_scheme must be dow7, three or map");
	} else if (key == "group_map") cfg.group_map = value;
	// wavelet
	else if (key == "wavelet") cfg.model.wavelet = value;
	else if (key == "levels") cfg.model.levels = static_cast<int>(detail::parse_long(value, where));
	// similarity
	else if (key == "kernel") {
		if (value == "gaussian") cfg.model.kernel = similarity::KernelFamily::Gaussian;
		else if (value == "epanechnikov") cfg.model.kernel = similarity::KernelFamily::Epanechnikov;
		else throw ValidationError(where + ": kernel must be gaussian or epanechnikov");
	} else if (key == "bandwidth") cfg.model.bandwidth = detail::parse_double(value, where);
	else if (key == "bandwidth_grid") cfg.model.bandwidth_grid = parse_list(value, where);
	else if (key == "calibration_window")
		cfg.model.calibration_window = static_cast<int>(detail::parse_long(value, where));
	else if (key == "j0") cfg.model.j0 = static_cast<int>(detail::parse_long(value, where));
	// forecast
	else if (key == "B") cfg.model.B = static_cast<int>(detail::parse_long(value, where));
	else if (key == "correction") {
		if (value == "none") cfg.model.correction = Correction::None;
		else if (value == "increment") cfg.model.correction = Correction::Increment;
		else throw ValidationError(where + ": correction must be none or increment");
	} else if (key == "group_filter") cfg.model.group_filter = parse_flag(value, where);
	// intervals
	else if (key == "methods") {
		cfg.methods.clear();
		for (const auto& item : split(value, ','))
			cfg.methods.push_back(method_from_key(item));
	} else if (key == "alpha_levels") cfg.alpha_levels = parse_list(value, where);
	else if (key == "kfwe_k") cfg.kfwe_k = static_cast<int>(detail::parse_long(value, where));
	else if (key == "nskwf_mode") {
		if (value == "disconnected") cfg.nskwf_mode = NsMode::Disconnected;
		else if (value == "connected") cfg.nskwf_mode = NsMode::Connected;
		else throw ValidationError(where + ": nskwf_mode must be disconnected or connected");
	}
	// eval
	else if (key == "test_start") {
		cfg.test_start = parse_date(value);
		cfg.has_test_start = true;
	} else if (key == "recalibrate") {
		if (value == "weekly") cfg.recalibrate_days = 7;
		else if (value == "daily") cfg.recalibrate_days = 1;
		else cfg.recalibrate_days = static_cast<int>(detail::parse_long(value, where));
	} else if (key == "report_alpha") cfg.report_alpha = detail::parse_double(value, where);
	else if (key == "curvewise_max_allow")
		cfg.curvewise_max_allow = static_cast<int>(detail::parse_long(value, where));
	else if (key == "dump_per_day") cfg.dump_per_day = parse_flag(value, where);
	// run
	else if (key == "out") cfg.out_dir = value;
	else if (key == "jobs") cfg.jobs = static_cast<int>(detail::parse_long(value, where));
	else throw ValidationError(where + ": unknown key '" + key + "'");
}

void validate(const RunConfig& cfg, const std::string& origin) {
	auto fail = [&](const std::string& msg) { throw ValidationError(origin + ": " + msg); };
	if (cfg.methods.empty()) fail("methods must not be empty");
	if (cfg.alpha_levels.empty()) fail("alpha_levels must not be empty");
	for (double a : cfg.alpha_levels)
		if (!(a > 0.0) || !(a < 1.0)) fail("alpha levels must lie in (0, 1)");
	for (std::size_t i = 0; i < cfg.alpha_levels.size(); ++i)
		for (std::size_t j = i + 1; j < cfg.alpha_levels.size(); ++j)
			if (cfg.alpha_levels[i] == cfg.alpha_levels[j])
				fail("duplicate alpha level");
	if (std::find(cfg.alpha_levels.begin(), cfg.alpha_levels.end(), cfg.report_alpha) ==
	    cfg.alpha_levels.end())
		fail("report_alpha must be one of alpha_levels");
	if (cfg.model.B < 1) fail("B must be >= 1");
	if (cfg.kfwe_k < 1) fail("kfwe_k must be >= 1");
	if (cfg.model.j0 < 0) fail("j0 must be >= 0");
	if (cfg.model.levels < 0) fail("levels must be >= 0");
	if (cfg.model.bandwidth < 0.0) fail("bandwidth must be >= 0 (0 = calibrate)");
	if (cfg.model.bandwidth == 0.0 && cfg.model.bandwidth_grid.empty())
		fail("either bandwidth or bandwidth_grid is required");
	if (cfg.model.calibration_window < 1) fail("calibration_window must be >= 1");
	if (cfg.recalibrate_days < 1) fail("recalibrate cadence must be >= 1 day");
	if (cfg.curvewise_max_allow < 0) fail("curvewise_max_allow must be >= 0");
	if (cfg.jobs < 0) fail("jobs must be >= 0 (0 = all cores)");
	if (cfg.group_scheme == GroupScheme::UserMap && cfg.group_map.empty())
		fail("group_scheme=map requires group_map=<csv path>");
	for (std::size_t i = 0; i < cfg.methods.size(); ++i)
		for (std::size_t j = i + 1; j < cfg.methods.size(); ++j)
			if (cfg.methods[i] == cfg.methods[j]) fail("duplicate method in methods");
}

} // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
	RunConfig cfg;
	std::istringstream in(text);
	std::string line;
	long line_number = 0;
	while (std::getline(in, line)) {
		++line_number;
		const std::string stripped = trim(line);
		if (stripped.empty() || stripped[0] == '#') continue;
		const auto eq = stripped.find('=');
		if (eq == std::string::npos)
			throw ValidationError(origin + ":" + std::to_string(line_number) +
			                      ": expected 'key = value'");
		const std::string key = trim(stripped.substr(0, eq));
		const std::string value = unquote(trim(stripped.substr(eq + 1)));
		apply_key(cfg, key, value, origin + ":" + std::to_string(line_number));
	}
	validate(cfg, origin);
	return cfg;
}

RunConfig load_config(const std::string& path) {
	std::ifstream in(path);
	if (!in) throw ValidationError("cannot open config '" + path + "'");
	std::ostringstream buffer;
	buffer << in.rdbuf();
	return parse_config(buffer.str(), path);
}

Grouping make_grouping(const RunConfig& cfg) {
	if (cfg.group_scheme != GroupScheme::UserMap) return Grouping(cfg.group_scheme);
	std::ifstream in(cfg.group_map);
	if (!in) throw ValidationError("cannot open group map '" + cfg.group_map + "'");
	std::map<Date, std::string> labels;
	std::string line;
	long line_number = 0;
	while (std::getline(in, line)) {
		++line_number;
		const std::string stripped = trim(line);
		if (stripped.empty() || stripped == "date,label") continue;
		const auto comma = stripped.find(',');
		if (comma == std::string::npos)
			throw ValidationError(cfg.group_map + ":" + std::to_string(line_number) +
			                      ": expected 'date,label'");
		labels[parse_date(trim(stripped.substr(0, comma)))] = trim(stripped.substr(comma + 1));
	}
	if (labels.empty()) throw ValidationError(cfg.group_map + ": no entries");
	return Grouping::user_map(labels);
}

} // namespace kwf
