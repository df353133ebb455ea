#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace aoisched {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

enum class Boundary { Torus, FreePlaneWithMargin };

/// Square simulation region `[lower_left, lower_left + side)^2`.
///
/// Under `Torus` the region wraps and distances use the minimum image. Under
/// `FreePlaneWithMargin` distances are Euclidean and only links whose
/// transmitter sits at least `margin` away from every edge are measured.
struct RegionSpec {
  double side = 2000.0;
  Boundary boundary = Boundary::Torus;
  double margin = 0.0;
  Point2 lower_left{};

  static RegionSpec torus(double side);
  static RegionSpec free_plane(double side, double margin);

  void validate() const;
  bool contains(Point2 p) const;
  /// True if `p` is inside the measurement window (always true on a torus).
  bool in_window(Point2 p) const;
  double area() const { return side * side; }
};

struct NetworkRealization {
  std::vector<Point2> transmitters;
  std::vector<Point2> receivers;
  double link_distance = 0.0;
  double density = 0.0;
  RegionSpec region{};

  std::size_t size() const { return transmitters.size(); }
  /// Checks pairing, link distances and containment; throws on violation.
  void validate() const;
};

enum class StoppingSetKind { Empty, FixedDisk, NearestInterferedReceiver };

struct StoppingSetSpec {
  StoppingSetKind kind = StoppingSetKind::Empty;
  double radius = 0.0;  // FixedDisk only

  static StoppingSetSpec empty() { return {}; }
  static StoppingSetSpec fixed_disk(double radius);
  static StoppingSetSpec nearest_interfered_receiver() {
    return {StoppingSetKind::NearestInterferedReceiver, 0.0};
  }

  void validate() const;
  friend bool operator==(const StoppingSetSpec&, const StoppingSetSpec&) = default;
};

struct ObservedReceiver {
  std::size_t index = 0;
  double distance = 0.0;
};

double distance(Point2 a, Point2 b, const RegionSpec& region);

/// Draws one bipolar PPP realization. Deterministic in `seed`.
NetworkRealization sample_bipolar(double density, double link_distance, const RegionSpec& region,
                                  std::uint64_t seed);

/// Translates every node by `-origin` (wrapping on a torus).
NetworkRealization shift(const NetworkRealization& realization, Point2 origin);

/// Other-link receivers inside the stopping set of transmitter `node`.
/// The node's own receiver is never reported.
std::vector<ObservedReceiver> observed_receivers(const NetworkRealization& realization,
                                                 std::size_t node, const StoppingSetSpec& spec);

/// One line per link: `tx_x tx_y rx_x rx_y`.
void write_realization(std::ostream& out, const NetworkRealization& realization);
NetworkRealization read_realization(std::istream& in, double density, double link_distance,
                                    const RegionSpec& region);

}  // namespace aoisched
