#pragma once

// Increasing events built from open-path connectivity inside a box, the
// disjoint-crossing count N(a,b), and Hamming distances to event complements.
//
// Each event has a base shape in its own coordinates plus a placement; the
// placed event holds on a configuration c exactly when the base event holds
// on the configuration whose state at base edge e is c at placement(e). Path
// connectivity never uses the wired boundary class: wiring changes the
// measure, not the event.

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rcm/configuration.hpp"
#include "rcm/lattice.hpp"

namespace rcm {

enum class CrossingDirection { left_right, bottom_top };

namespace shape {

/// C_h(a,b): open left-right crossing of [-a,a] x [-b,b].
struct CrossingH {
  int a = 1;
  int b = 1;
};
/// Open bottom-top crossing of [-a,a] x [-b,b].
struct CrossingV {
  int a = 1;
  int b = 1;
};
/// Crossing of an arbitrary rectangle.
struct BoxCrossing {
  Region box{0, 1, 0, 0};
  CrossingDirection direction = CrossingDirection::left_right;
};
/// H_n(alpha, beta): open path in [-n,n]^2 from its left side to {n} x [alpha, beta].
struct HalfCrossing {
  int n = 1;
  int alpha = -1;
  int beta = 1;
};
/// X_n(alpha): one open cluster in [-n,n]^2 meets the four side segments
/// {-n} x [-n,-alpha], {-n} x [alpha,n], {n} x [-n,-alpha], {n} x [alpha,n].
struct Cross {
  int n = 1;
  int alpha = 0;
};
/// A_x: x is joined to the origin inside [-|x|, |x|]^2 (sup norm).
struct PointToOrigin {
  Vertex x{1, 0};
};
/// E: open left-right crossing of [0, 2n+1] x [0, 2n].
struct Strip {
  int n = 1;
};
/// E*: open bottom-top crossing of the dual box, faces [0, 2n] x [-1, 2n].
/// Evaluated on dual configurations, whose vertices are faces.
struct DualStrip {
  int n = 1;
};
struct EdgeOpen {
  LatticeEdge edge{};
};
/// [-n,n]^2 joined to the boundary of [-R,R]^2 inside [-R,R]^2.
struct BoxToBoundary {
  int n = 0;
  int R = 1;
};

}  // namespace shape

using EventShape = std::variant<shape::CrossingH, shape::CrossingV, shape::BoxCrossing, shape::HalfCrossing,
                                shape::Cross, shape::PointToOrigin, shape::Strip, shape::DualStrip,
                                shape::EdgeOpen, shape::BoxToBoundary>;

struct EventSpec {
  EventShape shape;
  SymmetryTransform placement;
};

/// The support of a placed event does not fit the region it is evaluated on.
class EventSupportError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Hamming distance of configurations on which the event cannot be made to fail.
inline constexpr int kNoComplement = std::numeric_limits<int>::max();

/// Open edges in the support beyond which the generic Hamming search refuses.
inline constexpr std::size_t kGenericHammingBound = 20;

EventSpec crossing_h(int a, int b);
EventSpec crossing_v(int a, int b);
EventSpec box_crossing(const Region& box, CrossingDirection direction);
EventSpec half_crossing(int n, int alpha, int beta);
EventSpec cross_event(int n, int alpha);
EventSpec point_to_origin(Vertex x);
EventSpec strip_crossing(int n);
EventSpec dual_strip_crossing(int n);
EventSpec edge_open(const LatticeEdge& e);
EventSpec box_to_boundary(int n, int R);

/// Throws std::invalid_argument when parameters are out of range.
void validate(const EventSpec& ev);

std::string_view kind_name(const EventSpec& ev);

/// The box the base event lives in, before placement.
Region base_box(const EventSpec& ev);
/// Smallest rectangle containing every edge the placed event depends on.
Region support(const EventSpec& ev);

/// The image of the event under t, applied after the current placement.
EventSpec image_of(const EventSpec& ev, const SymmetryTransform& t);

/// Event compiled against a fixed region. Pure: evaluation allocates its own
/// scratch, so one detector may be shared between threads.
class EventDetector {
 public:
  EventDetector(const EventSpec& ev, const Region& r);

  bool operator()(const Configuration& c) const;

  /// Minimal number of open edges whose closure makes the event fail: 0 when
  /// it already fails, kNoComplement when no closure can. Connection events
  /// use max-flow; the cluster event X_n falls back to exhaustive search.
  int hamming(const Configuration& c) const;

  const Region& region() const noexcept { return region_; }
  /// Region indices of the edges the event depends on.
  std::span<const std::size_t> edges() const noexcept { return edge_map_; }

 private:
  bool evaluate(const Configuration& c, const std::vector<std::uint8_t>* closed) const;
  bool local_open(const Configuration& c, std::size_t local) const { return c.open(edge_map_[local]); }

  Region region_;
  GridGraph local_;
  std::vector<std::size_t> edge_map_;
  std::vector<std::vector<std::uint32_t>> terminals_;
  bool terminals_overlap_ = false;
};

bool detect(const EventSpec& ev, const Configuration& c, const Region& r);

/// Predicate form for the oracle and the sampler.
Event as_predicate(const EventSpec& ev, const Region& r);

/// N(a,b): the maximum number of edge-disjoint open left-right crossings of
/// [-a,a] x [-b,b]. Throws EventSupportError if the box is not inside r.
int count_disjoint_crossings(const Configuration& c, const Region& r, int a, int b);
int count_disjoint_crossings(const Configuration& c, const Region& r, const Region& box,
                             CrossingDirection direction);

int hamming_to_complement(const Configuration& c, const Region& r, const EventSpec& ev);

/// "kind key=value ..." with an optional placement (flip, rot, dx, dy).
std::string to_string(const EventSpec& ev);
/// Inverse of to_string; throws std::invalid_argument on malformed text.
EventSpec parse_event(std::string_view text);

}  // namespace rcm
