#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "aoisched/engine.hpp"
#include "aoisched/policy.hpp"

namespace aoisched {

enum class SweepVariable { ArrivalRate, Density, ObservationRadius };

struct ExperimentSpec {
  SweepVariable sweep_variable = SweepVariable::ArrivalRate;
  std::vector<double> sweep_values;
  SimConfig base = SimConfig::defaults();
  std::vector<StoppingSetSpec> policies;
  std::string output_path;

  /// Config of one sweep point: `value` applied to the swept variable, and
  /// for observation-radius sweeps to every fixed-disk policy.
  SimConfig point(double value, const StoppingSetSpec& policy) const;
  StoppingSetSpec policy_at(double value, const StoppingSetSpec& policy) const;
};

/// Configuration problem, with the 1-based line it was found on (0 when it
/// concerns the document as a whole).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses the `key = value` experiment format (`#` starts a comment).
/// Unset keys take the defaults of SimConfig::defaults(). A sweep
/// (`sweep` and `values`) is mandatory unless `require_sweep` is false.
ExperimentSpec parse_config(std::string_view text, bool require_sweep = true);

std::string policy_label(const StoppingSetSpec& spec);
/// `empty`, `nearest` or `disk:<radius>`.
StoppingSetSpec parse_policy(std::string_view text);
std::string sweep_variable_name(SweepVariable v);

struct SweepRow {
  double sweep_value = 0.0;
  std::string policy_label;
  double network_peak_aoi = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double fraction_stable = 0.0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

void write_sweep_header(std::ostream& out);
void write_sweep_row(std::ostream& out, const SweepRow& row);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

/// Runs every (value, policy) point in order. When `csv` is given, the
/// header and each row are written and flushed as soon as they are known.
std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, unsigned threads = 1, std::ostream* csv = nullptr);

/// Hex digest of the canonical configuration echo.
std::string config_hash(const ExperimentSpec& spec);
nlohmann::json config_json(const SimConfig& config);
nlohmann::json provenance_json(const ExperimentSpec& spec, double runtime_seconds);

/// Per-link rows: realization, link_index, tx_x, tx_y, gamma, deliveries,
/// peak_aoi, stable.
void write_link_csv(std::ostream& out, const SimResult& result);
nlohmann::json summary_json(const SimConfig& config, const SimResult& result);

void write_policy_report(std::ostream& out, const std::vector<PolicyReportRow>& rows);
std::vector<PolicyReportRow> read_policy_report(std::istream& in);

}  // namespace aoisched
