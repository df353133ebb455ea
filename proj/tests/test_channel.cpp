#include <stdexcept>
#include <cmath>
#include <vector>

#include "aoisched/channel.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace aoisched;

namespace {

ChannelParams params(double alpha, double threshold, double snr, double r) {
  ChannelParams p;
  p.path_loss_exponent = alpha;
  p.sinr_threshold = threshold;
  p.snr = snr;
  p.link_distance = r;
  return p;
}

const RegionSpec kPlane = RegionSpec::free_plane(10000.0, 0.0);

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(params(2.0, 1, 1, 1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(params(3, 0, 1, 1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(params(3, 1, 0, 1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(params(3, 1, 1, -1).validate(), std::invalid_argument);
  CHECK_NOTHROW(params(2.01, 1, INFINITY, 1).validate());
}

TEST_CASE("dB conversion of the default link budget") {
  // 23.7 dBm over -90 dBm.
  CHECK(snr_from_dbm(23.7, -90.0) == doctest::Approx(234422881531.99221).epsilon(1e-12));
  CHECK(db_to_linear(0.0) == 1.0);
}

TEST_CASE("interference_factor") {
  CHECK(interference_factor({0, 0}, {25, 0}, params(3.8, 1, 1, 25), kPlane) == doctest::Approx(1.0));
  CHECK(interference_factor({0, 0}, {50, 0}, params(2.5, 1, 1, 25), kPlane) == doctest::Approx(std::pow(2.0, 2.5)));
  CHECK(interference_factor({0, 0}, {0, 2}, params(2.0001, 1, 1, 1), kPlane) == doctest::Approx(4.0).epsilon(1e-3));
  // 4^3.8 from a 30-digit evaluation.
  CHECK(interference_factor({0, 0}, {100, 0}, params(3.8, 1, 1, 25), kPlane) ==
        doctest::Approx(194.01172051333095).epsilon(1e-13));
  CHECK_THROWS_AS(interference_factor({1, 1}, {1, 1}, params(3.8, 1, 1, 25), kPlane), std::invalid_argument);
  // Extreme ratios stay finite in log form.
  CHECK(log_interference_factor(1e300, params(3.8, 1, 1, 1e-300)) == doctest::Approx(3.8 * 600 * std::log(10.0)));
}

TEST_CASE("success_probability closed-form cases") {
  const auto quiet = params(3.8, 1.0, INFINITY, 25.0);
  CHECK(success_probability({}, quiet) == 1.0);
  const InterfererView one = {{1.0, 1.0}};
  CHECK(success_probability(one, quiet) == doctest::Approx(0.5));
  const auto noisy = params(4.0, 1.0, 1e4, 5.0);  // T r^a / rho = 625/1e4
  CHECK(success_probability({}, noisy) == doctest::Approx(std::exp(-0.0625)));
}

TEST_CASE("dominant_success_probability") {
  const auto p = params(3.8, 1.0, 1e6, 25.0);
  const double noise_only = std::exp(-p.noise_exponent());
  InterfererView silent = {{0.3, 0.0}, {2.0, 0.0}};
  CHECK(dominant_success_probability(silent, p) == doctest::Approx(noise_only));
  const InterfererView both = {{0.5, 1.0}, {3.0, 1.0}};
  CHECK(dominant_success_probability(both, p) == success_probability(both, p));
  // One interferer with gamma 0.5 at D = 0.5: 1 - 0.5/1.5.
  const InterfererView half = {{0.5, 0.5}};
  CHECK(dominant_success_probability(half, params(3.8, 1.0, INFINITY, 25.0)) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("success_probability monotonicity and noise bound") {
  Stream rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = params(2.5 + 2.5 * rng.uniform(), 0.1 + 3 * rng.uniform(), std::pow(10.0, 2 + 6 * rng.uniform()), 10 + 50 * rng.uniform());
    InterfererView view;
    for (int k = 0; k < 8; ++k) view.push_back({std::exp(4 * rng.uniform() - 2), rng.uniform()});
    const double base = success_probability(view, p);
    CHECK(base >= 0.0);
    CHECK(base <= std::exp(-p.noise_exponent()) * (1 + 1e-15));

    auto louder = view;
    louder[trial % 8].activity = std::min(1.0, louder[trial % 8].activity + 0.1);
    CHECK(success_probability(louder, p) <= base);
    auto farther = view;
    farther[trial % 8].factor *= 1.5;
    CHECK(success_probability(farther, p) >= base);
    auto strict = p;
    strict.sinr_threshold *= 1.2;  // raises only the noise term here
    CHECK(success_probability(view, strict) <= base);
    auto stronger = p;
    stronger.snr *= 2;
    CHECK(success_probability(view, stronger) >= base);
  }
}

TEST_CASE("success_probability matches a Monte Carlo fading oracle") {
  Stream rng(77);
  const auto p = params(3.8, 1.0, 1e7, 25.0);
  InterfererView view;
  std::vector<oracle::Interferer> mc;
  for (int k = 0; k < 20; ++k) {
    const double d = std::exp(3 * rng.uniform() - 0.5);
    const double a = rng.uniform();
    view.push_back({d, a});
    mc.push_back({d, a});
  }
  const double expected = success_probability(view, p);
  constexpr std::size_t kTrials = 200000;
  const double empirical = oracle::monte_carlo_success(mc, p.noise_exponent(), kTrials, 5);
  const double sigma = std::sqrt(expected * (1 - expected) / kTrials);
  CHECK(std::abs(empirical - expected) < 3.0 * sigma);
}

TEST_CASE("slot_sinr_success with no interferers") {
  NetworkRealization net;
  net.region = RegionSpec::torus(1000.0);
  net.link_distance = 25.0;
  net.transmitters = {{100, 100}, {300, 300}};
  net.receivers = {{125, 100}, {325, 300}};
  const std::vector<std::size_t> none;

  Stream quiet_rng(1);
  int ok = 0;
  for (int t = 0; t < 10000; ++t) ok += slot_sinr_success(0, none, net, params(3.8, 1.0, INFINITY, 25.0), quiet_rng);
  CHECK(ok == 10000);

  // Finite SNR: rate -> exp(-T r^a / rho).
  const auto p = params(3.8, 1.0, std::pow(25.0, 3.8) / 0.7, 25.0);
  Stream rng(2);
  constexpr int kSlots = 1000000;
  int hits = 0;
  for (int t = 0; t < kSlots; ++t) hits += slot_sinr_success(0, none, net, p, rng);
  const double expected = std::exp(-0.7);
  CHECK(std::abs(hits / double(kSlots) - expected) < 3 * std::sqrt(expected * (1 - expected) / kSlots));
}

TEST_CASE("slot_sinr_success with close interferers follows the closed form") {
  NetworkRealization net;
  net.region = RegionSpec::torus(1000.0);
  net.link_distance = 25.0;
  net.transmitters = {{100, 100}, {150, 100}, {100, 160}, {60, 60}};
  net.receivers = {{125, 100}, {175, 100}, {100, 185}, {35, 60}};
  const auto p = params(3.8, 1.0, 1e9, 25.0);
  const std::vector<std::size_t> active = {0, 1, 2, 3};  // own link is skipped

  InterfererView view;
  for (std::size_t j = 1; j < 4; ++j)
    view.push_back({interference_factor(net.transmitters[j], net.receivers[0], p, net.region), 1.0});
  const double expected = success_probability(view, p);

  Stream rng(3);
  constexpr int kSlots = 400000;
  int hits = 0;
  for (int t = 0; t < kSlots; ++t) hits += slot_sinr_success(0, active, net, p, rng);
  CHECK(std::abs(hits / double(kSlots) - expected) < 3 * std::sqrt(expected * (1 - expected) / kSlots));
}
