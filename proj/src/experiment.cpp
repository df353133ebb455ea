#include "aoisched/experiment.hpp"

#include <charconv>
#include <cstdlib>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace aoisched {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(const std::string& text, std::size_t line, const std::string& key) {
  // strtod accepts "inf" and exponents; from_chars for doubles is not
  // available everywhere yet.
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size())
    throw ConfigError(line, "'" + key + "' expects a number, got '" + text + "'");
  return v;
}

std::int64_t to_int(const std::string& text, std::size_t line, const std::string& key) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError(line, "'" + key + "' expects an integer, got '" + text + "'");
  return v;
}

std::vector<double> parse_values(const std::string& text, std::size_t line) {
  // Either a comma list or an inclusive range `start:stop:step`.
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError(line, "range must be start:stop:step");
    const double start = to_double(parts[0], line, "values");
    const double stop = to_double(parts[1], line, "values");
    const double step = to_double(parts[2], line, "values");
    if (!(step > 0.0) || stop < start) throw ConfigError(line, "range needs step > 0 and stop >= start");
    std::vector<double> out;
    const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9));
    for (std::int64_t k = 0; k <= count; ++k) {
      // Round to 12 significant digits so 0.05 + 2*0.05 prints as 0.15.
      std::ostringstream tmp;
      tmp << std::setprecision(12) << start + static_cast<double>(k) * step;
      out.push_back(std::stod(tmp.str()));
    }
    return out;
  }
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(item, line, "values"));
  return out;
}

void check_sweep_value(SweepVariable v, double value, std::size_t line) {
  switch (v) {
    case SweepVariable::ArrivalRate:
      if (!(value > 0.0 && value <= 1.0)) throw ConfigError(line, "arrival rate sweep values must lie in (0, 1]");
      break;
    case SweepVariable::Density:
      if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError(line, "density sweep values must be positive");
      break;
    case SweepVariable::ObservationRadius:
      if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError(line, "observation radii must be positive");
      break;
  }
}

std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return out.str();
}

std::string short_double(double v) {
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}


}  // namespace

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

std::string policy_label(const StoppingSetSpec& spec) {
  switch (spec.kind) {
    case StoppingSetKind::Empty:
      return "empty";
    case StoppingSetKind::NearestInterferedReceiver:
      return "nearest";
    case StoppingSetKind::FixedDisk:
      return "disk:" + short_double(spec.radius);
  }
  return "unknown";
}

StoppingSetSpec parse_policy(std::string_view text) {
  const std::string t = trim(text);
  if (t == "empty") return StoppingSetSpec::empty();
  if (t == "nearest") return StoppingSetSpec::nearest_interfered_receiver();
  if (t.rfind("disk:", 0) == 0) {
    char* end = nullptr;
    const std::string number = t.substr(5);
    const double r = std::strtod(number.c_str(), &end);
    if (number.empty() || end != number.c_str() + number.size() || !(r > 0.0) || !std::isfinite(r))
      throw std::invalid_argument("disk policy needs a positive radius: '" + t + "'");
    return StoppingSetSpec::fixed_disk(r);
  }
  throw std::invalid_argument("unknown policy '" + t + "' (expected empty, nearest or disk:<radius>)");
}

std::string sweep_variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::ArrivalRate:
      return "arrival_rate";
    case SweepVariable::Density:
      return "density";
    case SweepVariable::ObservationRadius:
      return "observation_radius";
  }
  return "unknown";
}

StoppingSetSpec ExperimentSpec::policy_at(double value, const StoppingSetSpec& policy) const {
  if (sweep_variable == SweepVariable::ObservationRadius && policy.kind == StoppingSetKind::FixedDisk)
    return StoppingSetSpec::fixed_disk(value);
  return policy;
}

SimConfig ExperimentSpec::point(double value, const StoppingSetSpec& policy) const {
  SimConfig c = base;
  c.spec = policy_at(value, policy);
  if (sweep_variable == SweepVariable::ArrivalRate) c.arrival_rate = value;
  if (sweep_variable == SweepVariable::Density) c.density = value;
  return c;
}

ExperimentSpec parse_config(std::string_view text, bool require_sweep) {
  ExperimentSpec spec;
  SimConfig& c = spec.base;
  double sinr_db = 0.0, tx_dbm = 23.7, noise_dbm = -90.0;
  std::string policies_text = "empty,disk:100";
  std::size_t policies_line = 0, values_line = 0, sweep_line = 0, region_line = 0;
  bool have_sweep = false, have_values = false;
  std::string values_text;
  std::map<std::string, std::size_t> seen;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (value.empty()) throw ConfigError(line_no, "'" + key + "' has no value");
    if (auto [it, inserted] = seen.emplace(key, line_no); !inserted)
      throw ConfigError(line_no, "duplicate key '" + key + "' (first set on line " + std::to_string(it->second) + ")");

    if (key == "arrival_rate") {
      c.arrival_rate = to_double(value, line_no, key);
      if (!(c.arrival_rate > 0.0 && c.arrival_rate <= 1.0)) throw ConfigError(line_no, "arrival_rate must lie in (0, 1]");
    } else if (key == "density") {
      c.density = to_double(value, line_no, key);
      if (!(c.density > 0.0) || !std::isfinite(c.density)) throw ConfigError(line_no, "density must be positive");
    } else if (key == "link_distance") {
      c.channel.link_distance = to_double(value, line_no, key);
      if (!(c.channel.link_distance > 0.0) || !std::isfinite(c.channel.link_distance))
        throw ConfigError(line_no, "link_distance must be positive");
    } else if (key == "path_loss_exponent") {
      c.channel.path_loss_exponent = to_double(value, line_no, key);
      if (!(c.channel.path_loss_exponent > 2.0) || !std::isfinite(c.channel.path_loss_exponent))
        throw ConfigError(line_no, "path_loss_exponent must exceed 2 (interference tail diverges otherwise)");
    } else if (key == "sinr_threshold_db") {
      sinr_db = to_double(value, line_no, key);
      if (!std::isfinite(sinr_db)) throw ConfigError(line_no, "sinr_threshold_db must be finite");
    } else if (key == "tx_power_dbm") {
      tx_dbm = to_double(value, line_no, key);
      if (!std::isfinite(tx_dbm)) throw ConfigError(line_no, "tx_power_dbm must be finite");
    } else if (key == "noise_power_dbm") {
      noise_dbm = to_double(value, line_no, key);
      if (!std::isfinite(noise_dbm)) throw ConfigError(line_no, "noise_power_dbm must be finite");
    } else if (key == "side") {
      c.region.side = to_double(value, line_no, key);
      if (!(c.region.side > 0.0) || !std::isfinite(c.region.side)) throw ConfigError(line_no, "side must be positive");
      region_line = line_no;
    } else if (key == "boundary") {
      if (value == "torus")
        c.region.boundary = Boundary::Torus;
      else if (value == "free_plane")
        c.region.boundary = Boundary::FreePlaneWithMargin;
      else
        throw ConfigError(line_no, "boundary must be 'torus' or 'free_plane'");
    } else if (key == "margin") {
      c.region.margin = to_double(value, line_no, key);
      if (!(c.region.margin >= 0.0) || !std::isfinite(c.region.margin)) throw ConfigError(line_no, "margin must be >= 0");
      region_line = line_no;
    } else if (key == "horizon") {
      c.horizon = to_int(value, line_no, key);
      if (c.horizon < 1) throw ConfigError(line_no, "horizon must be at least 1");
    } else if (key == "realizations") {
      const auto n = to_int(value, line_no, key);
      if (n < 1) throw ConfigError(line_no, "realizations must be at least 1");
      c.realizations = static_cast<std::size_t>(n);
    } else if (key == "seed") {
      const auto s = to_int(value, line_no, key);
      if (s < 0) throw ConfigError(line_no, "seed must be nonnegative");
      c.master_seed = static_cast<std::uint64_t>(s);
    } else if (key == "warmup_fraction") {
      c.warmup_fraction = to_double(value, line_no, key);
      if (!(c.warmup_fraction >= 0.0 && c.warmup_fraction < 1.0))
        throw ConfigError(line_no, "warmup_fraction must lie in [0, 1)");
    } else if (key == "backlog_factor") {
      c.backlog_factor = to_double(value, line_no, key);
      if (!(c.backlog_factor > 0.0)) throw ConfigError(line_no, "backlog_factor must be positive");
    } else if (key == "mode") {
      if (value == "actual")
        c.mode = SystemMode::Actual;
      else if (value == "dominant")
        c.mode = SystemMode::Dominant;
      else
        throw ConfigError(line_no, "mode must be 'actual' or 'dominant'");
    } else if (key == "fading") {
      if (value == "marginal")
        c.fading = FadingModel::Marginal;
      else if (value == "explicit")
        c.fading = FadingModel::Explicit;
      else
        throw ConfigError(line_no, "fading must be 'marginal' or 'explicit'");
    } else if (key == "sweep") {
      if (value == "arrival_rate")
        spec.sweep_variable = SweepVariable::ArrivalRate;
      else if (value == "density")
        spec.sweep_variable = SweepVariable::Density;
      else if (value == "observation_radius")
        spec.sweep_variable = SweepVariable::ObservationRadius;
      else
        throw ConfigError(line_no, "sweep must be arrival_rate, density or observation_radius");
      have_sweep = true;
      sweep_line = line_no;
    } else if (key == "values") {
      values_text = value;
      values_line = line_no;
      have_values = true;
    } else if (key == "policies") {
      policies_text = value;
      policies_line = line_no;
    } else if (key == "output") {
      spec.output_path = value;
    } else {
      throw ConfigError(line_no, "unknown key '" + key + "'");
    }
  }

  c.channel.sinr_threshold = db_to_linear(sinr_db);
  c.channel.snr = snr_from_dbm(tx_dbm, noise_dbm);
  if (!(c.region.margin < c.region.side / 2.0)) throw ConfigError(region_line, "margin must be below side/2");

  spec.policies.clear();
  for (const auto& p : split(policies_text, ',')) {
    try {
      spec.policies.push_back(parse_policy(p));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(policies_line, e.what());
    }
  }
  if (spec.policies.empty()) throw ConfigError(policies_line, "no policies given");

  if (have_values && !have_sweep) throw ConfigError(values_line, "'values' given without 'sweep'");
  if (have_sweep && !have_values) throw ConfigError(sweep_line, "'sweep' given without 'values'");
  if (have_sweep) {
    spec.sweep_values = parse_values(values_text, values_line);
    if (spec.sweep_values.empty()) throw ConfigError(values_line, "sweep has no values");
    for (double v : spec.sweep_values) check_sweep_value(spec.sweep_variable, v, values_line);
  } else if (require_sweep) {
    throw ConfigError(0, "missing sweep definition ('sweep' and 'values')");
  }

  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
  return spec;
}

void write_sweep_header(std::ostream& out) {
  out << "sweep_value,policy_label,network_peak_aoi,ci_low,ci_high,fraction_stable\n";
}

void write_sweep_row(std::ostream& out, const SweepRow& row) {
  out << format_double(row.sweep_value) << ',' << row.policy_label << ',' << format_double(row.network_peak_aoi)
      << ',' << format_double(row.ci_low) << ',' << format_double(row.ci_high) << ','
      << format_double(row.fraction_stable) << '\n';
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 6) throw ConfigError(line_no, "sweep row needs 6 fields");
    SweepRow r;
    r.sweep_value = to_double(f[0], line_no, "sweep_value");
    r.policy_label = f[1];
    r.network_peak_aoi = to_double(f[2], line_no, "network_peak_aoi");
    r.ci_low = to_double(f[3], line_no, "ci_low");
    r.ci_high = to_double(f[4], line_no, "ci_high");
    r.fraction_stable = to_double(f[5], line_no, "fraction_stable");
    rows.push_back(r);
  }
  return rows;
}

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, unsigned threads, std::ostream* csv) {
  if (spec.sweep_values.empty()) throw std::invalid_argument("sweep has no values");
  if (csv) {
    write_sweep_header(*csv);
    csv->flush();
  }
  std::vector<SweepRow> rows;
  for (double value : spec.sweep_values) {
    for (const auto& policy : spec.policies) {
      const SimConfig config = spec.point(value, policy);
      const SimResult result = run_experiment(config, threads);
      SweepRow row{value, policy_label(config.spec), result.network_peak_aoi, result.ci_low, result.ci_high,
                   result.fraction_stable};
      if (csv) {
        write_sweep_row(*csv, row);
        csv->flush();
        if (!*csv) throw std::runtime_error("failed writing sweep output");
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

nlohmann::json config_json(const SimConfig& c) {
  return {
      {"arrival_rate", c.arrival_rate},
      {"horizon", c.horizon},
      {"mode", c.mode == SystemMode::Actual ? "actual" : "dominant"},
      {"fading", c.fading == FadingModel::Marginal ? "marginal" : "explicit"},
      {"path_loss_exponent", c.channel.path_loss_exponent},
      {"sinr_threshold", c.channel.sinr_threshold},
      {"snr", c.channel.snr},
      {"link_distance", c.channel.link_distance},
      {"density", c.density},
      {"side", c.region.side},
      {"boundary", c.region.boundary == Boundary::Torus ? "torus" : "free_plane"},
      {"margin", c.region.margin},
      {"policy", policy_label(c.spec)},
      {"realizations", c.realizations},
      {"seed", c.master_seed},
      {"warmup_fraction", c.warmup_fraction},
      {"backlog_factor", c.backlog_factor},
  };
}

std::string config_hash(const ExperimentSpec& spec) {
  nlohmann::json echo = config_json(spec.base);
  echo["sweep"] = sweep_variable_name(spec.sweep_variable);
  echo["values"] = spec.sweep_values;
  std::vector<std::string> labels;
  for (const auto& p : spec.policies) labels.push_back(policy_label(p));
  echo["policies"] = labels;
  // 64-bit FNV-1a over the canonical dump.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : echo.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

nlohmann::json provenance_json(const ExperimentSpec& spec, double runtime_seconds) {
  std::vector<std::string> labels;
  for (const auto& p : spec.policies) labels.push_back(policy_label(p));
  return {
      {"seed", spec.base.master_seed},
      {"config_hash", config_hash(spec)},
      {"runtime_seconds", runtime_seconds},
      {"sweep", sweep_variable_name(spec.sweep_variable)},
      {"values", spec.sweep_values},
      {"policies", labels},
      {"config", config_json(spec.base)},
  };
}

void write_link_csv(std::ostream& out, const SimResult& result) {
  out << "realization,link_index,tx_x,tx_y,gamma,deliveries,peak_aoi,stable\n";
  for (const auto& l : result.per_link) {
    out << l.realization << ',' << l.link << ',' << format_double(l.tx.x) << ',' << format_double(l.tx.y) << ','
        << format_double(l.gamma) << ',' << l.stats.deliveries << ',' << format_double(l.stats.peak_aoi) << ','
        << (l.stats.stable ? 1 : 0) << '\n';
  }
}

nlohmann::json summary_json(const SimConfig& config, const SimResult& result) {
  // Unbounded values serialize as null.
  return {
      {"network_peak_aoi", result.network_peak_aoi},
      {"ci_low", result.ci_low},
      {"ci_high", result.ci_high},
      {"stable_network_peak_aoi", result.stable_network_peak_aoi},
      {"fraction_stable", result.fraction_stable},
      {"per_realization_peak_aoi", result.per_realization_peak},
      {"links", result.per_link.size()},
      {"config", config_json(config)},
  };
}

void write_policy_report(std::ostream& out, const std::vector<PolicyReportRow>& rows) {
  out << "node,neighbor_count_in_S,tail_mass,condition_value,gamma\n";
  for (const auto& r : rows) {
    out << r.node << ',' << r.neighbors_in_set << ',' << format_double(r.tail_mass) << ','
        << format_double(r.condition_value) << ',' << format_double(r.gamma) << '\n';
  }
}

std::vector<PolicyReportRow> read_policy_report(std::istream& in) {
  std::vector<PolicyReportRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 5) throw ConfigError(line_no, "policy report row needs 5 fields");
    PolicyReportRow r;
    r.node = static_cast<std::size_t>(to_int(f[0], line_no, "node"));
    r.neighbors_in_set = static_cast<std::size_t>(to_int(f[1], line_no, "neighbor_count_in_S"));
    r.tail_mass = to_double(f[2], line_no, "tail_mass");
    r.condition_value = to_double(f[3], line_no, "condition_value");
    r.gamma = to_double(f[4], line_no, "gamma");
    rows.push_back(r);
  }
  return rows;
}

}  // namespace aoisched
