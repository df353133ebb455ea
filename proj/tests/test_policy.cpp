#include <stdexcept>
#include <cmath>
#include <numbers>
#include <vector>

#include "aoisched/policy.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace aoisched;

namespace {

ChannelParams paper_params(double r, double alpha = 3.8) {
  ChannelParams p;
  p.path_loss_exponent = alpha;
  p.sinr_threshold = 1.0;
  p.snr = snr_from_dbm(23.7, -90.0);
  p.link_distance = r;
  return p;
}

LocalObservation random_observation(Stream& rng) {
  LocalObservation obs;
  const int k = static_cast<int>(rng.uniform() * 11);
  for (int i = 0; i < k; ++i) obs.in_set_factors.push_back(std::exp(std::log(100.0) * (2 * rng.uniform() - 1)));
  obs.tail_mass = 5.0 * rng.uniform();
  return obs;
}

}  // namespace

TEST_CASE("tail_integral at R = 0 equals the Beta-function closed form") {
  for (double alpha : {2.5, 3.0, 3.8, 4.0, 5.0}) {
    const auto p = paper_params(25.0, alpha);
    const double expected = oracle::full_plane_tail(1e-4, 25.0, alpha, 1.0);
    CHECK(tail_integral(0.0, 1e-4, p) == doctest::Approx(expected).epsilon(1e-10));
  }
  // alpha = 4, T = 1: pi^2 lambda r^2 / 2.
  CHECK(tail_integral(0.0, 1e-4, paper_params(25.0, 4.0)) ==
        doctest::Approx(M_PI * M_PI * 1e-4 * 625 / 2).epsilon(1e-10));
}

TEST_CASE("tail_integral against 30-digit quadrature") {
  // Values from mpmath at 30 digits, lambda = 1e-4, alpha = 3.8, T = 1.
  struct Case {
    double radius, r, expected;
  };
  const Case cases[] = {
      {100, 25, 0.0179622810708959616221}, {100, 100, 2.76606714399868684416}, {50, 25, 0.0612648329592877190813},
      {400, 25, 0.00148377381727432912191}, {10, 25, 0.294681834044007525394}, {1000, 100, 0.0553203909378698773524},
      {0, 100, 5.21233138645428285061},
  };
  for (const auto& c : cases)
    CHECK(tail_integral(c.radius, 1e-4, paper_params(c.r)) == doctest::Approx(c.expected).epsilon(1e-10));
}

TEST_CASE("tail_integral against the series oracle over random radii") {
  Stream rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const double alpha = 2.2 + 3.8 * rng.uniform();
    const double r = 5 + 200 * rng.uniform();
    const double radius = r * std::exp(6 * rng.uniform() - 3);
    const double density = std::exp(-12 + 5 * rng.uniform());
    const auto p = paper_params(r, alpha);
    const double expected = oracle::tail_integral(radius, density, r, alpha, 1.0);
    CHECK(tail_integral(radius, density, p) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("tail_integral edge cases") {
  const auto p = paper_params(25.0);
  CHECK(tail_integral(100.0, 0.0, p) == 0.0);
  double previous = tail_integral(0.0, 1e-4, p);
  for (double radius : {1.0, 10.0, 25.0, 100.0, 1000.0, 1e4, 1e6}) {
    const double v = tail_integral(radius, 1e-4, p);
    CHECK(v <= previous);
    CHECK(v > 0.0);
    previous = v;
  }
  // Far out the integrand is c v^(1-alpha): 2 pi lambda c R^(2-alpha) / (alpha-2).
  const double far = 2.0 * std::numbers::pi * 1e-4 * std::exp(p.log_threshold_scale()) * std::pow(1e6, 2.0 - 3.8) / 1.8;
  CHECK(tail_integral(1e6, 1e-4, p) == doctest::Approx(far).epsilon(1e-9));
  CHECK_THROWS_AS(tail_integral(10.0, 1e-4, paper_params(25.0, 2.0)), std::domain_error);
  CHECK_THROWS_AS(tail_integral(-1.0, 1e-4, p), std::invalid_argument);
}

TEST_CASE("opportunism_condition") {
  CHECK_FALSE(opportunism_condition({{}, 0.5}));
  CHECK(opportunism_condition({{0.5}, 1.0}));
  CHECK(opportunism_value({{0.5}, 1.0}) == doctest::Approx(3.0));
  // No observations, the whole-plane tail at r = 100 is about 5.21.
  LocalObservation blind{{}, tail_integral(0.0, 1e-4, paper_params(100.0))};
  CHECK(opportunism_condition(blind));
  CHECK(full_plane_eta(1e-4, paper_params(100.0)) == doctest::Approx(1.0 / 5.21233138645428285));
  CHECK(full_plane_eta(1e-4, paper_params(25.0)) == 1.0);
}

TEST_CASE("fixed_point_lhs") {
  CHECK(fixed_point_lhs(0.5, {{0.5}, 1.0}) == doctest::Approx(0.0));
  CHECK(fixed_point_lhs(1.0, {{}, 0.5}) == doctest::Approx(0.5));
  CHECK(fixed_point_lhs(1e-300, {{0.5}, 1.0}) > 1e299);
}

TEST_CASE("fixed_point_lhs is strictly decreasing on (0, 1]") {
  Stream rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto obs = random_observation(rng);
    double previous = fixed_point_lhs(1e-6, obs);
    for (int k = 1; k <= 1000; ++k) {
      const double v = fixed_point_lhs(k / 1000.0, obs);
      CHECK(v < previous);
      previous = v;
    }
  }
}

TEST_CASE("solve_eta cases") {
  CHECK(solve_eta({{}, 0.0}) == 1.0);
  CHECK(solve_eta({{0.5}, 1.0}) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(solve_eta({{10.0}, 0.5}) == 1.0);
  CHECK_THROWS_AS(solve_eta({{-1.0}, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(solve_eta({{}, -0.5}), std::invalid_argument);
}

TEST_CASE("solve_eta residual and boundary properties") {
  Stream rng(9);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto obs = random_observation(rng);
    const double eta = solve_eta(obs);
    CHECK(eta > 0.0);
    CHECK(eta <= 1.0);
    if (opportunism_value(obs) <= 1.0) {
      CHECK(eta == 1.0);
    } else {
      CHECK(eta < 1.0);
      CHECK(std::abs(fixed_point_lhs(eta, obs)) < 1e-10);
    }
  }
}

TEST_CASE("enlarging the observation never raises eta") {
  Stream rng(10);
  for (int trial = 0; trial < 500; ++trial) {
    const auto obs = random_observation(rng);
    const double eta = solve_eta(obs);
    auto more_tail = obs;
    more_tail.tail_mass += rng.uniform();
    CHECK(solve_eta(more_tail) <= eta + 1e-12);
    auto more_neighbors = obs;
    more_neighbors.in_set_factors.push_back(std::exp(4 * rng.uniform() - 2));
    CHECK(solve_eta(more_neighbors) <= eta + 1e-12);
  }
}

TEST_CASE("example_b_closed_form agrees with bisection") {
  Stream rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const double r = 10 + 100 * rng.uniform();
    const auto p = paper_params(r);
    const double nearest = r * std::exp(3 * rng.uniform() - 1.5);
    const double density = std::exp(-11 + 4 * rng.uniform());
    LocalObservation obs;
    obs.in_set_factors = {std::exp(log_interference_factor(nearest, p))};
    obs.tail_mass = tail_integral(nearest, density, p);
    CHECK(example_b_closed_form(nearest, density, p) == doctest::Approx(solve_eta(obs)).epsilon(1e-9));
  }
}

TEST_CASE("example_b_closed_form analytic points") {
  // Choose r and density so that D_c = 0.5 and the tail mass is 1.
  auto p = paper_params(25.0);
  const double nearest = 25.0 * std::pow(0.5, 1.0 / 3.8);
  const double density = 1e-4 / tail_integral(nearest, 1e-4, p);
  CHECK(example_b_closed_form(nearest, density, p) == doctest::Approx(0.5).epsilon(1e-10));
  // Far, lonely neighbour: condition fails.
  CHECK(example_b_closed_form(500.0, 1e-9, p) == 1.0);
}

namespace {

NetworkRealization cluster_fixture() {
  // Three links on a 12.5 m circle, each receiver diametrically opposite its
  // transmitter, plus one loner far away.
  NetworkRealization net;
  net.region = RegionSpec::torus(2000.0);
  net.link_distance = 25.0;
  net.density = 1e-4;
  net.transmitters = {{1000, 1012.5}, {989.17468245269447, 993.75}, {1010.8253175473055, 993.75}, {100, 100}};
  net.receivers = {{1000, 987.5}, {1010.8253175473055, 1006.25}, {989.17468245269447, 1006.25}, {125, 100}};
  return net;
}

}  // namespace

TEST_CASE("assign_policy: empty spec gives all ones") {
  const auto net = sample_bipolar(1e-4, 25.0, RegionSpec::torus(1000.0), 4);
  const auto a = assign_policy(net, StoppingSetSpec::empty(), paper_params(25.0));
  REQUIRE(a.size() == net.size());
  for (double g : a.gamma) CHECK(g == 1.0);
}

TEST_CASE("assign_policy: lone node under a fixed disk uses only the tail") {
  const auto net = cluster_fixture();
  REQUIRE_NOTHROW(net.validate());
  auto p = paper_params(100.0);
  auto net100 = net;
  // r = 100 version: the loner with its receiver 100 m away, alone.
  net100.link_distance = 100.0;
  net100.transmitters = {{100, 100}, {1500, 1500}};
  net100.receivers = {{200, 100}, {1600, 1500}};
  const auto a = assign_policy(net100, StoppingSetSpec::fixed_disk(100.0), p);
  const double tail = tail_integral(100.0, 1e-4, p);
  REQUIRE(tail > 1.0);
  CHECK(a.gamma[0] == doctest::Approx(1.0 / tail).epsilon(1e-9));

  const auto b = assign_policy(net, StoppingSetSpec::fixed_disk(100.0), paper_params(25.0));
  CHECK(tail_integral(100.0, 1e-4, paper_params(25.0)) < 1.0);
  CHECK(b.gamma[3] == 1.0);
}

TEST_CASE("assign_policy: nearest receiver matches the closed form") {
  const auto p = paper_params(25.0);
  const auto net = sample_bipolar(3e-4, 25.0, RegionSpec::torus(800.0), 21);
  const auto a = assign_policy(net, StoppingSetSpec::nearest_interfered_receiver(), p);
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto seen = observed_receivers(net, i, StoppingSetSpec::nearest_interfered_receiver());
    CHECK(a.gamma[i] == doctest::Approx(example_b_closed_form(seen[0].distance, net.density, p)).epsilon(1e-9));
  }
}

TEST_CASE("assign_policy is translation invariant on the torus") {
  const auto p = paper_params(25.0);
  const auto net = sample_bipolar(2e-4, 25.0, RegionSpec::torus(1000.0), 13);
  for (const auto spec : {StoppingSetSpec::fixed_disk(100.0), StoppingSetSpec::nearest_interfered_receiver()}) {
    const auto a = assign_policy(net, spec, p);
    const auto b = assign_policy(shift(net, net.transmitters[5]), spec, p);
    const auto c = assign_policy(shift(net, {333.3, 717.1}), spec, p);
    for (std::size_t i = 0; i < net.size(); ++i) {
      CHECK(b.gamma[i] == doctest::Approx(a.gamma[i]).epsilon(1e-9));
      CHECK(c.gamma[i] == doctest::Approx(a.gamma[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("policy_report rows") {
  const auto p = paper_params(25.0);
  const auto net = cluster_fixture();

  for (const auto& row : policy_report(net, StoppingSetSpec::empty(), p)) {
    CHECK(row.gamma == 1.0);
    CHECK(row.neighbors_in_set == 0);
  }

  const auto rows = policy_report(net, StoppingSetSpec::fixed_disk(100.0), p);
  REQUIRE(rows.size() == 4);
  CHECK(rows[3].neighbors_in_set == 0);
  CHECK(rows[3].condition_value <= 1.0);
  CHECK(rows[3].gamma == 1.0);

  const double tail = tail_integral(100.0, 1e-4, p);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(rows[i].neighbors_in_set == 2);
    CHECK(rows[i].condition_value > 1.0);
    CHECK(rows[i].gamma < 1.0);
    // Independent check: scan for the sign change of the fixed-point LHS
    // written out from the geometry.
    std::vector<double> factors;
    for (std::size_t j = 0; j < 3; ++j) {
      if (j == i) continue;
      const double d = std::hypot(net.transmitters[i].x - net.receivers[j].x, net.transmitters[i].y - net.receivers[j].y);
      factors.push_back(std::pow(d / 25.0, 3.8));
    }
    auto lhs = [&](double eta) {
      double v = 1.0 / eta - tail;
      for (double f : factors) v -= 1.0 / (1.0 + f - eta);
      return v;
    };
    double root = 0.0;
    for (int k = 1; k <= 10000000; ++k) {
      if (lhs(k * 1e-7) <= 0.0) {
        root = (k - 0.5) * 1e-7;
        break;
      }
    }
    CHECK(rows[i].gamma == doctest::Approx(root).epsilon(1e-5));
  }
}
