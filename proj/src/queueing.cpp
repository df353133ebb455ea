#include "aoisched/queueing.hpp"

#include <stdexcept>
#include <string>

namespace aoisched {

void LinkState::step_arrival(std::int64_t slot, bool arrived) {
  if (slot <= last_arrival_slot_)
    throw std::logic_error("arrival slots must increase strictly (got " + std::to_string(slot) + ")");
  last_arrival_slot_ = slot;
  if (arrived) {
    queue_.push_back(slot);
    ++arrivals_;
  }
}

void LinkState::step_delivery(std::int64_t slot, bool success) {
  if (slot <= last_slot_) throw std::logic_error("delivery slots must increase strictly");
  if (success && queue_.empty()) throw std::logic_error("delivery from an empty queue");
  last_slot_ = slot;
  ++age_;
  if (!success) return;

  const std::int64_t generated = queue_.front();
  queue_.pop_front();
  ++deliveries_;
  const std::int64_t sojourn = slot - generated + 1;
  if (slot >= record_from_) {
    peak_sum_ += static_cast<double>(age_);
    sojourn_sum_ += static_cast<double>(sojourn);
    ++recorded_;
  }
  age_ = sojourn;
}

AoiStats peak_aoi_estimate(const LinkState& state, const StabilityRule& rule) {
  AoiStats s;
  s.deliveries = state.deliveries();
  s.arrivals = state.arrivals();
  s.residual_queue = state.queue_length();
  const auto recorded = state.recorded_deliveries();
  if (recorded > 0) {
    s.peak_aoi = state.peak_age_sum() / static_cast<double>(recorded);
    s.mean_queue_delay = state.sojourn_sum() / static_cast<double>(recorded);
    s.censored_peak_aoi = s.peak_aoi;
  } else {
    s.censored_peak_aoi = static_cast<double>(state.age());
  }
  const std::int64_t window = state.slots_observed() - state.record_from();
  if (window > 0) s.throughput = static_cast<double>(recorded) / static_cast<double>(window);
  const double backlog_limit = rule.backlog_factor * rule.arrival_rate * static_cast<double>(rule.horizon);
  s.stable = recorded > 0 && static_cast<double>(s.residual_queue) <= backlog_limit;
  return s;
}

double analytic_peak_aoi(double arrival_rate, double service_rate) {
  if (!(arrival_rate > 0.0 && arrival_rate <= 1.0)) throw std::invalid_argument("arrival rate must lie in (0, 1]");
  if (!(service_rate > 0.0 && service_rate <= 1.0)) throw std::invalid_argument("service rate must lie in (0, 1]");
  if (service_rate <= arrival_rate) return kUnboundedAge;
  return 1.0 / arrival_rate + (1.0 - arrival_rate) / (service_rate - arrival_rate);
}

}  // namespace aoisched
