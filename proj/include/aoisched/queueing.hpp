#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>

namespace aoisched {

inline constexpr double kUnboundedAge = std::numeric_limits<double>::infinity();

/// FCFS queue and age process of one link.
///
/// Slot convention: a packet arriving in slot t is queued at the start of
/// the slot and can be delivered in the same slot. The age is the value at
/// the end of a slot, so it grows by one every slot and, on a delivery in
/// slot t of a packet generated in slot G, drops to t - G + 1. The age just
/// before that drop is the peak recorded for the delivery.
class LinkState {
 public:
  /// Deliveries in slots before `record_from` update the age but are not
  /// counted in the peak and delay statistics.
  explicit LinkState(std::int64_t record_from = 0) : record_from_(record_from) {}

  void step_arrival(std::int64_t slot, bool arrived);
  /// `success` may only be true when the queue is nonempty.
  void step_delivery(std::int64_t slot, bool success);

  bool empty() const { return queue_.empty(); }
  std::size_t queue_length() const { return queue_.size(); }
  std::optional<std::int64_t> head_generation() const {
    return queue_.empty() ? std::nullopt : std::optional(queue_.front());
  }
  std::int64_t age() const { return age_; }

  std::uint64_t arrivals() const { return arrivals_; }
  std::uint64_t deliveries() const { return deliveries_; }
  std::uint64_t recorded_deliveries() const { return recorded_; }
  double peak_age_sum() const { return peak_sum_; }
  double sojourn_sum() const { return sojourn_sum_; }
  std::int64_t slots_observed() const { return last_slot_ + 1; }
  std::int64_t record_from() const { return record_from_; }

 private:
  std::deque<std::int64_t> queue_;
  std::int64_t age_ = 0;
  std::int64_t record_from_ = 0;
  std::int64_t last_arrival_slot_ = -1;
  std::int64_t last_slot_ = -1;
  std::uint64_t arrivals_ = 0;
  std::uint64_t deliveries_ = 0;
  std::uint64_t recorded_ = 0;
  double peak_sum_ = 0.0;
  double sojourn_sum_ = 0.0;
};

struct StabilityRule {
  double arrival_rate = 0.0;
  std::int64_t horizon = 0;
  /// Unstable when the residual queue exceeds factor * arrival_rate * horizon.
  double backlog_factor = 0.3;
};

struct AoiStats {
  /// Mean age at delivery instants; kUnboundedAge when nothing was delivered.
  double peak_aoi = kUnboundedAge;
  /// peak_aoi, or the current age when nothing was delivered. Finite lower
  /// bound usable in spatial averages.
  double censored_peak_aoi = 0.0;
  double mean_queue_delay = kUnboundedAge;
  double throughput = 0.0;
  bool stable = false;
  std::uint64_t deliveries = 0;
  std::uint64_t arrivals = 0;
  std::size_t residual_queue = 0;
};

AoiStats peak_aoi_estimate(const LinkState& state, const StabilityRule& rule);

/// Conditional peak AoI of a Geo/Geo/1 link with arrival rate xi and
/// per-slot service probability p; unbounded unless p > xi.
double analytic_peak_aoi(double arrival_rate, double service_rate);

}  // namespace aoisched
