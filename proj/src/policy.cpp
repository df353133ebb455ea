#include "aoisched/policy.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "aoisched/quadrature.hpp"

namespace aoisched {

namespace {

constexpr double kBracketLow = 1e-12;
constexpr double kResidualTol = 1e-10;
constexpr double kBracketWidthTol = 1e-14;

// Relative size of the discarded tails against the computed integral.
constexpr double kTruncationTol = 1e-14;

// integral_{e^lo}^inf u^(s-1) / (1+u) du with s = 2/alpha, in t = log u:
// integral_lo^inf e^(s t) / (1 + e^t) dt. lo = -inf allowed.
double beta_tail(double s, double lo) {
  auto integrand = [s](double t) {
    return t > 0.0 ? std::exp((s - 1.0) * t) / (1.0 + std::exp(-t)) : std::exp(s * t) / (1.0 + std::exp(t));
  };
  // Below t_lo the integrand is < e^(s t), whose integral is e^(s t_lo)/s.
  // Above t_hi it is < e^((s-1) t), with integral e^((s-1) t_hi)/(1-s).
  double start = lo;
  if (!std::isfinite(lo)) {
    // The full integral is at least pi, so an absolute bound suffices.
    start = std::log(kTruncationTol * s) / s;
  }
  const double pivot = std::max(start, 0.0) + 1.0;
  const double head = integrate_adaptive(integrand, start, pivot).value;
  // head is a lower bound on the total; size the upper cut-off from it.
  const double t_hi = std::max(pivot, std::log(kTruncationTol * (1.0 - s) * head) / (s - 1.0));
  const double body = integrate_adaptive(integrand, pivot, t_hi, 1e-13, 1e-3 * kTruncationTol * head).value;
  return head + body;
}

}  // namespace

void LocalObservation::validate() const {
  for (double d : in_set_factors)
    if (!(d > 0.0)) throw std::invalid_argument("interference factors must be positive");
  if (!(tail_mass >= 0.0)) throw std::invalid_argument("tail mass must be nonnegative");
}

double tail_integral(double stopping_radius, double density, const ChannelParams& params) {
  const double alpha = params.path_loss_exponent;
  if (!(alpha > 2.0)) throw std::domain_error("tail integral diverges for path loss exponent <= 2");
  if (!(stopping_radius >= 0.0)) throw std::invalid_argument("stopping radius must be nonnegative");
  if (!(density >= 0.0)) throw std::invalid_argument("density must be nonnegative");
  if (density == 0.0 || std::isinf(stopping_radius)) return 0.0;

  // v = (c u)^(1/alpha) with c = T r^alpha turns the radial integral into
  // (c^(2/alpha) / alpha) * integral_{R^alpha/c}^inf u^(2/alpha - 1)/(1+u) du.
  const double s = 2.0 / alpha;
  const double log_c = params.log_threshold_scale();
  const double lo = stopping_radius > 0.0 ? alpha * std::log(stopping_radius) - log_c
                                          : -std::numeric_limits<double>::infinity();
  const double scale = std::exp(s * log_c) / alpha;
  return 2.0 * std::numbers::pi * density * scale * beta_tail(s, lo);
}

double opportunism_value(const LocalObservation& obs) {
  double total = obs.tail_mass;
  for (double d : obs.in_set_factors) total += 1.0 / d;
  return total;
}

bool opportunism_condition(const LocalObservation& obs) { return opportunism_value(obs) > 1.0; }

double fixed_point_lhs(double eta, const LocalObservation& obs) {
  double value = 1.0 / eta - obs.tail_mass;
  for (double d : obs.in_set_factors) value -= 1.0 / (1.0 + d - eta);
  return value;
}

double solve_eta(const LocalObservation& obs) {
  obs.validate();
  if (!opportunism_condition(obs)) return 1.0;

  double lo = kBracketLow;  // lhs(lo) > 0
  double hi = 1.0;          // lhs(hi) < 0 since the condition holds
  double mid = 0.5 * (lo + hi);
  while (true) {
    mid = 0.5 * (lo + hi);
    const double value = fixed_point_lhs(mid, obs);
    if (std::abs(value) < kResidualTol) break;
    if (value > 0.0)
      lo = mid;
    else
      hi = mid;
    // Width is taken relative to the bracket so that small roots keep
    // resolving until the residual test passes.
    const double next = 0.5 * (lo + hi);
    if (hi - lo < kBracketWidthTol * hi || next == lo || next == hi) {
      mid = next;
      break;
    }
  }
  return mid;
}

double example_b_closed_form(double nearest_distance, double density, const ChannelParams& params) {
  const double d = std::exp(log_interference_factor(nearest_distance, params));
  const double m = tail_integral(nearest_distance, density, params);
  if (1.0 / d + m <= 1.0) return 1.0;
  // M eta^2 - (2 + M(1+D)) eta + (1+D) = 0; the smaller root, written via
  // the product of roots to stay accurate as M -> 0.
  const double b = 1.0 + d;
  const double eta = b / (1.0 + 0.5 * m * b + std::sqrt(1.0 + 0.25 * m * m * b * b));
  return std::clamp(eta, std::numeric_limits<double>::min(), 1.0);
}

LocalObservation local_observation(const NetworkRealization& realization, std::size_t node,
                                   const StoppingSetSpec& spec, const ChannelParams& params) {
  LocalObservation obs;
  if (spec.kind == StoppingSetKind::Empty) {
    if (node >= realization.size()) throw std::out_of_range("node index out of range");
    return obs;
  }
  const auto seen = observed_receivers(realization, node, spec);
  obs.in_set_factors.reserve(seen.size());
  for (const auto& r : seen) obs.in_set_factors.push_back(std::exp(log_interference_factor(r.distance, params)));

  const double radius = spec.kind == StoppingSetKind::FixedDisk ? spec.radius : seen.front().distance;
  obs.tail_mass = tail_integral(radius, realization.density, params);
  return obs;
}

PolicyAssignment assign_policy(const NetworkRealization& realization, const StoppingSetSpec& spec,
                               const ChannelParams& params) {
  params.validate();
  spec.validate();
  PolicyAssignment out;
  out.gamma.assign(realization.size(), 1.0);
  if (spec.kind == StoppingSetKind::Empty) return out;

  // The tail depends only on the radius for a fixed disk.
  double fixed_tail = 0.0;
  if (spec.kind == StoppingSetKind::FixedDisk) fixed_tail = tail_integral(spec.radius, realization.density, params);

  for (std::size_t i = 0; i < realization.size(); ++i) {
    LocalObservation obs;
    if (spec.kind == StoppingSetKind::FixedDisk) {
      for (const auto& r : observed_receivers(realization, i, spec))
        obs.in_set_factors.push_back(std::exp(log_interference_factor(r.distance, params)));
      obs.tail_mass = fixed_tail;
    } else {
      obs = local_observation(realization, i, spec, params);
    }
    out.gamma[i] = solve_eta(obs);
  }
  return out;
}

double full_plane_eta(double density, const ChannelParams& params) {
  LocalObservation obs;
  obs.tail_mass = tail_integral(0.0, density, params);
  return solve_eta(obs);
}

std::vector<PolicyReportRow> policy_report(const NetworkRealization& realization,
                                           const StoppingSetSpec& spec, const ChannelParams& params) {
  params.validate();
  std::vector<PolicyReportRow> rows;
  rows.reserve(realization.size());
  for (std::size_t i = 0; i < realization.size(); ++i) {
    const LocalObservation obs = local_observation(realization, i, spec, params);
    PolicyReportRow row;
    row.node = i;
    row.neighbors_in_set = obs.in_set_factors.size();
    row.tail_mass = obs.tail_mass;
    row.condition_value = opportunism_value(obs);
    row.gamma = spec.kind == StoppingSetKind::Empty ? 1.0 : solve_eta(obs);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace aoisched
