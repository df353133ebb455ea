#include "aoisched/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace aoisched {

namespace {

// Beyond this magnitude log-domain values are not exponentiated directly.
constexpr double kLogOverflowGuard = 300.0;

}  // namespace

void ChannelParams::validate() const {
  if (!std::isfinite(path_loss_exponent) || path_loss_exponent <= 2.0)
    throw std::invalid_argument("path loss exponent must exceed 2");
  if (!std::isfinite(sinr_threshold) || sinr_threshold <= 0.0)
    throw std::invalid_argument("SINR threshold must be positive");
  if (!(snr > 0.0)) throw std::invalid_argument("SNR must be positive");
  if (!std::isfinite(link_distance) || link_distance <= 0.0)
    throw std::invalid_argument("link distance must be positive");
}

double ChannelParams::log_threshold_scale() const {
  return std::log(sinr_threshold) + path_loss_exponent * std::log(link_distance);
}

double ChannelParams::noise_exponent() const {
  if (std::isinf(snr)) return 0.0;
  const double log_value = log_threshold_scale() - std::log(snr);
  if (log_value > kLogOverflowGuard) return std::numeric_limits<double>::infinity();
  return std::exp(log_value);
}

double log_interference_factor(double distance, const ChannelParams& params) {
  if (!(distance > 0.0)) throw std::invalid_argument("interference factor of coincident points");
  return params.path_loss_exponent * std::log(distance) - params.log_threshold_scale();
}

double interference_factor(Point2 tx, Point2 rx, const ChannelParams& params, const RegionSpec& region) {
  const double log_d = log_interference_factor(distance(tx, rx, region), params);
  if (log_d > kLogOverflowGuard) return std::numeric_limits<double>::infinity();
  return std::exp(log_d);
}

double success_probability(std::span<const Interferer> view, const ChannelParams& params) {
  double log_p = -params.noise_exponent();
  for (const auto& j : view) {
    // log(1 - a/(1+D)) = log1p(-a/(1+D)); 1/(1+D) is computed as 1/(1+D)
    // even for D = inf, where it is exactly 0.
    log_p += std::log1p(-j.activity / (1.0 + j.factor));
  }
  return std::exp(log_p);
}

double dominant_success_probability(std::span<const Interferer> view, const ChannelParams& params) {
  return success_probability(view, params);
}

bool slot_sinr_success(std::size_t link, std::span<const std::size_t> active,
                       const NetworkRealization& realization, const ChannelParams& params, Stream& rng) {
  // SINR > T  <=>  H00 > T r^a / rho + sum_j H_j0 / D_j0.
  const double direct = rng.exponential();
  double rhs = params.noise_exponent();
  const Point2 rx = realization.receivers[link];
  for (const std::size_t j : active) {
    if (j == link) continue;
    const double fade = rng.exponential();
    const double log_d = log_interference_factor(
        distance(realization.transmitters[j], rx, realization.region), params);
    if (log_d < kLogOverflowGuard) rhs += fade * std::exp(-log_d);
  }
  return direct > rhs;
}

}  // namespace aoisched
