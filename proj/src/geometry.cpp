#include "aoisched/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "aoisched/rng.hpp"

namespace aoisched {

namespace {

double wrap(double v, double lo, double side) {
  double w = std::fmod(v - lo, side);
  if (w < 0.0) w += side;
  // fmod can round up to exactly `side` for tiny negative inputs.
  if (w >= side) w = 0.0;
  return lo + w;
}

Point2 wrap(Point2 p, const RegionSpec& region) {
  return {wrap(p.x, region.lower_left.x, region.side), wrap(p.y, region.lower_left.y, region.side)};
}

}  // namespace

RegionSpec RegionSpec::torus(double side) {
  RegionSpec r;
  r.side = side;
  r.boundary = Boundary::Torus;
  r.validate();
  return r;
}

RegionSpec RegionSpec::free_plane(double side, double margin) {
  RegionSpec r;
  r.side = side;
  r.boundary = Boundary::FreePlaneWithMargin;
  r.margin = margin;
  r.validate();
  return r;
}

void RegionSpec::validate() const {
  if (!std::isfinite(side) || side <= 0.0) throw std::invalid_argument("region side must be positive");
  if (!std::isfinite(margin) || margin < 0.0 || margin >= side / 2.0)
    throw std::invalid_argument("region margin must lie in [0, side/2)");
  if (!std::isfinite(lower_left.x) || !std::isfinite(lower_left.y))
    throw std::invalid_argument("region origin must be finite");
}

bool RegionSpec::contains(Point2 p) const {
  return p.x >= lower_left.x && p.x < lower_left.x + side && p.y >= lower_left.y &&
         p.y < lower_left.y + side;
}

bool RegionSpec::in_window(Point2 p) const {
  if (boundary == Boundary::Torus) return true;
  return p.x >= lower_left.x + margin && p.x <= lower_left.x + side - margin &&
         p.y >= lower_left.y + margin && p.y <= lower_left.y + side - margin;
}

void NetworkRealization::validate() const {
  if (transmitters.size() != receivers.size())
    throw std::invalid_argument("transmitter and receiver counts differ");
  region.validate();
  for (std::size_t i = 0; i < size(); ++i) {
    if (!region.contains(transmitters[i]) || !region.contains(receivers[i]))
      throw std::invalid_argument("link " + std::to_string(i) + " lies outside the region");
    const double d = distance(transmitters[i], receivers[i], region);
    if (std::abs(d - link_distance) > 1e-9 * link_distance)
      throw std::invalid_argument("link " + std::to_string(i) + " has distance " + std::to_string(d) +
                                  ", expected " + std::to_string(link_distance));
  }
}

StoppingSetSpec StoppingSetSpec::fixed_disk(double radius) {
  StoppingSetSpec s{StoppingSetKind::FixedDisk, radius};
  s.validate();
  return s;
}

void StoppingSetSpec::validate() const {
  if (kind == StoppingSetKind::FixedDisk && !(std::isfinite(radius) && radius > 0.0))
    throw std::invalid_argument("fixed-disk stopping set needs a positive radius");
}

double distance(Point2 a, Point2 b, const RegionSpec& region) {
  double dx = std::abs(a.x - b.x);
  double dy = std::abs(a.y - b.y);
  if (region.boundary == Boundary::Torus) {
    dx = std::min(dx, region.side - dx);
    dy = std::min(dy, region.side - dy);
  }
  return std::hypot(dx, dy);
}

NetworkRealization sample_bipolar(double density, double link_distance, const RegionSpec& region,
                                  std::uint64_t seed) {
  if (!std::isfinite(density) || density <= 0.0) throw std::invalid_argument("density must be positive");
  if (!std::isfinite(link_distance) || link_distance <= 0.0)
    throw std::invalid_argument("link distance must be positive");
  region.validate();
  if (region.boundary == Boundary::FreePlaneWithMargin && 2.0 * link_distance >= region.side)
    throw std::invalid_argument("link distance too large for a free-plane region");

  Stream rng(derive_key(seed, static_cast<std::uint64_t>(Purpose::Geometry)));
  std::poisson_distribution<std::int64_t> count_dist(density * region.area());
  const auto n = static_cast<std::size_t>(count_dist(rng));

  NetworkRealization out;
  out.link_distance = link_distance;
  out.density = density;
  out.region = region;
  out.transmitters.reserve(n);
  out.receivers.reserve(n);

  for (std::size_t i = 0; i < n; ++i) {
    const Point2 tx{region.lower_left.x + region.side * rng.uniform(),
                    region.lower_left.y + region.side * rng.uniform()};
    Point2 rx;
    for (;;) {
      const double theta = 2.0 * std::numbers::pi * rng.uniform();
      rx = {tx.x + link_distance * std::cos(theta), tx.y + link_distance * std::sin(theta)};
      if (region.boundary == Boundary::Torus) {
        rx = wrap(rx, region);
        break;
      }
      // Free plane: redraw orientations that leave the square. Only links
      // within one link distance of an edge are affected.
      if (region.contains(rx)) break;
    }
    out.transmitters.push_back(tx);
    out.receivers.push_back(rx);
  }
  return out;
}

NetworkRealization shift(const NetworkRealization& realization, Point2 origin) {
  NetworkRealization out = realization;
  auto move = [&](Point2 p) {
    Point2 q{p.x - origin.x, p.y - origin.y};
    return realization.region.boundary == Boundary::Torus ? wrap(q, realization.region) : q;
  };
  if (realization.region.boundary == Boundary::FreePlaneWithMargin) {
    out.region.lower_left = {realization.region.lower_left.x - origin.x,
                             realization.region.lower_left.y - origin.y};
  }
  for (auto& p : out.transmitters) p = move(p);
  for (auto& p : out.receivers) p = move(p);
  return out;
}

std::vector<ObservedReceiver> observed_receivers(const NetworkRealization& realization,
                                                 std::size_t node, const StoppingSetSpec& spec) {
  if (node >= realization.size()) throw std::out_of_range("node index out of range");
  spec.validate();
  std::vector<ObservedReceiver> out;
  const Point2 tx = realization.transmitters[node];

  switch (spec.kind) {
    case StoppingSetKind::Empty:
      break;
    case StoppingSetKind::FixedDisk:
      for (std::size_t j = 0; j < realization.size(); ++j) {
        if (j == node) continue;
        const double d = distance(tx, realization.receivers[j], realization.region);
        if (d <= spec.radius) out.push_back({j, d});
      }
      break;
    case StoppingSetKind::NearestInterferedReceiver: {
      if (realization.size() < 2)
        throw std::invalid_argument("nearest-interfered-receiver stopping set needs at least two links");
      ObservedReceiver best{0, std::numeric_limits<double>::infinity()};
      for (std::size_t j = 0; j < realization.size(); ++j) {
        if (j == node) continue;
        const double d = distance(tx, realization.receivers[j], realization.region);
        if (d < best.distance) best = {j, d};
      }
      out.push_back(best);
      break;
    }
  }
  return out;
}

void write_realization(std::ostream& out, const NetworkRealization& realization) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < realization.size(); ++i) {
    const auto& t = realization.transmitters[i];
    const auto& r = realization.receivers[i];
    out << t.x << ' ' << t.y << ' ' << r.x << ' ' << r.y << '\n';
  }
  out.precision(old_precision);
}

NetworkRealization read_realization(std::istream& in, double density, double link_distance,
                                    const RegionSpec& region) {
  NetworkRealization out;
  out.density = density;
  out.link_distance = link_distance;
  out.region = region;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream fields(line);
    Point2 t, r;
    if (!(fields >> t.x >> t.y >> r.x >> r.y))
      throw std::invalid_argument("realization line " + std::to_string(line_no) + ": expected 4 numbers");
    out.transmitters.push_back(t);
    out.receivers.push_back(r);
  }
  out.validate();
  return out;
}

}  // namespace aoisched
