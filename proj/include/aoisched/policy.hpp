#pragma once

#include <cstddef>
#include <vector>

#include "aoisched/channel.hpp"
#include "aoisched/geometry.hpp"

namespace aoisched {

/// What a transmitter knows when choosing its access probability: the
/// interference factors D_0j towards the receivers it observes, and the mean
/// interference mass it would cause outside its stopping set.
struct LocalObservation {
  std::vector<double> in_set_factors;
  double tail_mass = 0.0;

  void validate() const;
};

struct PolicyAssignment {
  std::vector<double> gamma;

  std::size_t size() const { return gamma.size(); }
};

/// 2*pi*lambda * integral_R^inf v / (1 + v^alpha / (T r^alpha)) dv.
/// Relative accuracy about 1e-12. Throws for alpha <= 2 (divergent).
double tail_integral(double stopping_radius, double density, const ChannelParams& params);

/// sum_j 1/D_0j + tail_mass. Access is throttled iff this exceeds 1.
double opportunism_value(const LocalObservation& obs);
bool opportunism_condition(const LocalObservation& obs);

/// 1/eta - sum_j 1/(1 + D_0j - eta) - tail_mass
double fixed_point_lhs(double eta, const LocalObservation& obs);

/// Optimal access probability for one observation: 1 when the opportunism
/// condition fails, otherwise the root of fixed_point_lhs in (0, 1) found by
/// bisection.
double solve_eta(const LocalObservation& obs);

/// Single-neighbour root in closed form (quadratic in eta).
double example_b_closed_form(double nearest_distance, double density, const ChannelParams& params);

/// Observation of transmitter `node` under `spec`. Empty yields no factors
/// and zero tail mass.
LocalObservation local_observation(const NetworkRealization& realization, std::size_t node,
                                   const StoppingSetSpec& spec, const ChannelParams& params);

/// Access probability per transmitter. Empty stopping sets give 1 everywhere.
PolicyAssignment assign_policy(const NetworkRealization& realization, const StoppingSetSpec& spec,
                               const ChannelParams& params);

/// Access probability a node would pick with no observations but full
/// knowledge of the density, i.e. the fixed point with the whole-plane tail.
/// Not used by assign_policy.
double full_plane_eta(double density, const ChannelParams& params);

struct PolicyReportRow {
  std::size_t node = 0;
  std::size_t neighbors_in_set = 0;
  double tail_mass = 0.0;
  double condition_value = 0.0;
  double gamma = 1.0;

  friend bool operator==(const PolicyReportRow&, const PolicyReportRow&) = default;
};

std::vector<PolicyReportRow> policy_report(const NetworkRealization& realization,
                                           const StoppingSetSpec& spec, const ChannelParams& params);

}  // namespace aoisched
