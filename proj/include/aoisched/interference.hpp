#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aoisched/channel.hpp"
#include "aoisched/geometry.hpp"

namespace aoisched {

/// log(1 + 1/D_ji) for every transmitter j and receiver i (zero on the
/// diagonal), so that a link's decoding probability given the active set A
/// is exp(-T r^a/rho - sum_{j in A} cost(j, i)).
class InterferenceCosts {
 public:
  enum class Path { Auto, Gather, RowAccumulate };

  InterferenceCosts() = default;
  InterferenceCosts(const NetworkRealization& realization, const ChannelParams& params);

  std::size_t size() const { return n_; }
  float cost(std::size_t tx, std::size_t rx) const { return by_tx_[tx * n_ + rx]; }

  /// For each receiver in `active` (sorted ascending), the sum of costs from
  /// every transmitter in `active`, added in ascending transmitter order.
  /// Both paths add the same terms in the same order and agree bitwise.
  void sums(std::span<const std::size_t> active, std::vector<double>& out, Path path = Path::Auto) const;

 private:
  std::size_t n_ = 0;
  std::vector<float> by_tx_;  // [j * n + i]
  std::vector<float> by_rx_;  // [i * n + j]
  mutable std::vector<double> scratch_;
};

}  // namespace aoisched
