#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "aoisched/geometry.hpp"
#include "aoisched/rng.hpp"

namespace aoisched {

/// Linear-unit channel parameters. Transmit power and noise only enter
/// through `snr`.
struct ChannelParams {
  double path_loss_exponent = 3.8;
  double sinr_threshold = 1.0;
  double snr = 0.0;
  double link_distance = 25.0;

  void validate() const;

  /// log(T r^alpha)
  double log_threshold_scale() const;
  /// T r^alpha / rho, the noise term of the success exponent.
  double noise_exponent() const;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// rho = P_tx / sigma^2 from powers given in dBm.
inline double snr_from_dbm(double tx_power_dbm, double noise_power_dbm) {
  return db_to_linear(tx_power_dbm - noise_power_dbm);
}

struct Interferer {
  double factor = 1.0;    // D = |X_j - y_0|^alpha / (T r^alpha)
  double activity = 1.0;  // probability the interferer is on the air
};

using InterfererView = std::vector<Interferer>;

/// log D for the given distance.
double log_interference_factor(double distance, const ChannelParams& params);

/// D = |tx - rx|^alpha / (T r^alpha). Throws on coincident points.
double interference_factor(Point2 tx, Point2 rx, const ChannelParams& params, const RegionSpec& region);

/// Success probability given interferer factors and activities, with
/// Rayleigh fading averaged out.
double success_probability(std::span<const Interferer> view, const ChannelParams& params);

/// Same as success_probability with every buffer assumed nonempty; the
/// activity field carries the access probability alone.
double dominant_success_probability(std::span<const Interferer> view, const ChannelParams& params);

/// One slot of the physical layer: draws the direct fade and one fade per
/// active interferer from `rng` and returns SINR > T. `link` itself is
/// skipped if present in `active`.
bool slot_sinr_success(std::size_t link, std::span<const std::size_t> active,
                       const NetworkRealization& realization, const ChannelParams& params, Stream& rng);

}  // namespace aoisched
