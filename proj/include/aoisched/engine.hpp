#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "aoisched/channel.hpp"
#include "aoisched/geometry.hpp"
#include "aoisched/policy.hpp"
#include "aoisched/queueing.hpp"

namespace aoisched {

/// Actual: a link transmits only with a packet in its buffer. Dominant:
/// every scheduled link transmits, sending a dummy packet when empty.
enum class SystemMode { Actual, Dominant };

/// Marginal draws each slot's decoding outcome from its exact law given the
/// active set (fades integrated out). Explicit draws every fade and
/// evaluates the SINR; it is O(active^2) transcendental calls per slot.
enum class FadingModel { Marginal, Explicit };

/// AllLinks: mean finite-horizon peak AoI over every measured link (links
/// with no delivery contribute their final age). StableLinks: mean over
/// links flagged stable only.
enum class PeakAggregation { AllLinks, StableLinks };

struct SimConfig {
  double arrival_rate = 0.1;
  std::int64_t horizon = 20000;
  SystemMode mode = SystemMode::Actual;
  ChannelParams channel{};
  double density = 1e-4;
  RegionSpec region{};
  StoppingSetSpec spec{};
  std::size_t realizations = 20;
  std::uint64_t master_seed = 1;
  double warmup_fraction = 0.1;
  double backlog_factor = 0.3;
  FadingModel fading = FadingModel::Marginal;

  /// alpha = 3.8, T = 0 dB, P_tx = 23.7 dBm, sigma^2 = -90 dBm,
  /// lambda = 1e-4 m^-2, r = 25 m, 2 km torus.
  static SimConfig defaults();
  void validate() const;
  std::int64_t warmup_slots() const;
};

struct LinkReport {
  std::size_t realization = 0;
  std::size_t link = 0;
  Point2 tx{};
  double gamma = 1.0;
  AoiStats stats{};
  /// Slots in which the link was on the air (dummy packets included) and the
  /// number of those that decoded.
  std::uint64_t attempts = 0;
  std::uint64_t decoded = 0;
};

struct NetworkPeak {
  double value = kUnboundedAge;
  double fraction_stable = 0.0;
  std::size_t links = 0;
  std::size_t stable_links = 0;
};

NetworkPeak network_peak_aoi(std::span<const LinkReport> per_link, const RegionSpec& window,
                             PeakAggregation aggregation);

struct SimResult {
  std::vector<LinkReport> per_link;
  /// Cross-realization mean of the AllLinks network peak AoI.
  double network_peak_aoi = kUnboundedAge;
  double ci_low = kUnboundedAge;
  double ci_high = kUnboundedAge;
  /// StableLinks aggregate pooled over all realizations.
  double stable_network_peak_aoi = kUnboundedAge;
  double fraction_stable = 0.0;
  std::vector<double> per_realization_peak;
};

/// Simulates one realization for `config.horizon` slots. `realization_index`
/// keys the random streams.
std::vector<LinkReport> run_realization(const NetworkRealization& realization, const PolicyAssignment& gamma,
                                        const SimConfig& config, std::size_t realization_index = 0);

/// Samples, schedules and simulates `config.realizations` networks.
/// `threads` only affects speed; the result is identical for any value.
SimResult run_experiment(const SimConfig& config, unsigned threads = 1);

/// Seed of realization `index` under `master_seed`.
std::uint64_t realization_seed(std::uint64_t master_seed, std::size_t index);

/// Student-t 95% interval half-width for the mean of `values`.
double ci95_half_width(std::span<const double> values);

}  // namespace aoisched
