#include "aoisched/interference.hpp"

#include <cmath>

namespace aoisched {

namespace {

// Gather when fewer than n / kGatherDivisor links are active.
constexpr std::size_t kGatherDivisor = 4;

}  // namespace

InterferenceCosts::InterferenceCosts(const NetworkRealization& realization, const ChannelParams& params)
    : n_(realization.size()), by_tx_(n_ * n_, 0.0f), by_rx_(n_ * n_, 0.0f) {
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (i == j) continue;
      const double d = distance(realization.transmitters[j], realization.receivers[i], realization.region);
      // exp(-log D) underflows to 0 for negligible interferers.
      const auto cost = static_cast<float>(std::log1p(std::exp(-log_interference_factor(d, params))));
      by_tx_[j * n_ + i] = cost;
      by_rx_[i * n_ + j] = cost;
    }
  }
}

void InterferenceCosts::sums(std::span<const std::size_t> active, std::vector<double>& out, Path path) const {
  out.assign(active.size(), 0.0);
  if (path == Path::Auto) path = active.size() * kGatherDivisor < n_ ? Path::Gather : Path::RowAccumulate;

  if (path == Path::Gather) {
    for (std::size_t k = 0; k < active.size(); ++k) {
      const float* row = &by_rx_[active[k] * n_];
      double s = 0.0;
      for (const std::size_t j : active) s += static_cast<double>(row[j]);
      out[k] = s;
    }
    return;
  }
  scratch_.assign(n_, 0.0);
  double* acc = scratch_.data();
  for (const std::size_t j : active) {
    const float* row = &by_tx_[j * n_];
    for (std::size_t i = 0; i < n_; ++i) acc[i] += static_cast<double>(row[i]);
  }
  for (std::size_t k = 0; k < active.size(); ++k) out[k] = acc[active[k]];
}

}  // namespace aoisched
