#pragma once

// Geometry of rectangular sublattices of Z^2.
//
// Edges are indexed row-major by their lower-left endpoint (the anchor); at a
// given anchor the horizontal edge precedes the vertical one. Dual vertices
// (bounded faces) are named by the lower-left corner of the face, so the dual
// of a region is again an integer rectangle.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcm/configuration.hpp"

namespace rcm {

struct Vertex {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(Vertex, Vertex) = default;
  friend constexpr auto operator<=>(Vertex, Vertex) = default;
};

constexpr Vertex operator+(Vertex a, Vertex b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vertex operator-(Vertex a, Vertex b) { return {a.x - b.x, a.y - b.y}; }

enum class Orientation : std::uint8_t { horizontal, vertical };

/// A nearest-neighbour edge of Z^2, named by its lower-left endpoint.
struct LatticeEdge {
  Vertex anchor;
  Orientation orientation = Orientation::horizontal;

  Vertex tail() const { return anchor; }
  Vertex head() const {
    return orientation == Orientation::horizontal ? Vertex{anchor.x + 1, anchor.y}
                                                  : Vertex{anchor.x, anchor.y + 1};
  }

  friend constexpr bool operator==(const LatticeEdge&, const LatticeEdge&) = default;
};

/// The edge joining two adjacent vertices, in either order. Throws if not adjacent.
LatticeEdge edge_between(Vertex a, Vertex b);

/// Canonical index of an edge within a region together with its endpoints.
struct EdgeId {
  std::size_t index = 0;
  Vertex u;
  Vertex v;
};

/// Closed integer rectangle [x_min, x_max] x [y_min, y_max] with all
/// nearest-neighbour edges inside it.
class Region {
 public:
  Region(int x_min, int x_max, int y_min, int y_max);

  int x_min() const noexcept { return x_min_; }
  int x_max() const noexcept { return x_max_; }
  int y_min() const noexcept { return y_min_; }
  int y_max() const noexcept { return y_max_; }
  /// Number of vertex columns / rows.
  int width() const noexcept { return x_max_ - x_min_ + 1; }
  int height() const noexcept { return y_max_ - y_min_ + 1; }

  std::size_t vertex_count() const noexcept {
    return static_cast<std::size_t>(width()) * static_cast<std::size_t>(height());
  }
  std::size_t edge_count() const noexcept;

  bool contains(Vertex v) const noexcept {
    return v.x >= x_min_ && v.x <= x_max_ && v.y >= y_min_ && v.y <= y_max_;
  }
  bool contains(const Region& other) const noexcept {
    return other.x_min_ >= x_min_ && other.x_max_ <= x_max_ && other.y_min_ >= y_min_ &&
           other.y_max_ <= y_max_;
  }
  bool contains(const LatticeEdge& e) const noexcept {
    return contains(e.tail()) && contains(e.head());
  }

  std::size_t vertex_index(Vertex v) const;
  Vertex vertex_at(std::size_t index) const;

  /// Canonical index of `e`; throws std::out_of_range when e is not in the region.
  std::size_t edge_index(const LatticeEdge& e) const;
  std::optional<std::size_t> find_edge(const LatticeEdge& e) const noexcept;
  LatticeEdge edge_at(std::size_t index) const;
  EdgeId edge_id(std::size_t index) const;

  /// Index of an edge known to be inside the region (no checks).
  std::size_t edge_index_unchecked(Vertex anchor, Orientation o) const noexcept {
    const std::size_t w = static_cast<std::size_t>(width());
    const std::size_t i = static_cast<std::size_t>(anchor.x - x_min_);
    const std::size_t j = static_cast<std::size_t>(anchor.y - y_min_);
    const std::size_t row = j * (2 * w - 1);
    if (j + 1 == static_cast<std::size_t>(height())) return row + i;
    if (o == Orientation::horizontal) return row + 2 * i;
    return row + 2 * i + (i + 1 < w ? 1 : 0);
  }

  /// True when v has a Z^2 neighbour outside the region.
  bool on_boundary(Vertex v) const noexcept {
    return contains(v) && (v.x == x_min_ || v.x == x_max_ || v.y == y_min_ || v.y == y_max_);
  }

  Region translated(Vertex offset) const {
    return {x_min_ + offset.x, x_max_ + offset.x, y_min_ + offset.y, y_max_ + offset.y};
  }

  std::string to_string() const;

  friend bool operator==(const Region&, const Region&) = default;

 private:
  int x_min_;
  int x_max_;
  int y_min_;
  int y_max_;
};

/// The box [-a,a] x [-b,b] translated by `offset`.
Region build_region(int a, int b, Vertex offset = {});

/// Vertices of r having a Z^2 neighbour outside r, in vertex-index order.
std::vector<Vertex> boundary_vertices(const Region& r);

/// Smallest region containing both arguments.
Region bounding_region(const Region& a, const Region& b);

/// Integer isometry of Z^2: v -> M v + t with M a signed permutation matrix.
/// Built from translations, reflections in the axes and the quarter rotation
/// about the origin, and closed under composition and inversion.
class SymmetryTransform {
 public:
  SymmetryTransform() = default;

  static SymmetryTransform identity() { return {}; }
  static SymmetryTransform translation(int dx, int dy);
  /// (x, y) -> (x, -y)
  static SymmetryTransform reflection_x_axis();
  /// (x, y) -> (-x, y)
  static SymmetryTransform reflection_y_axis();
  /// (x, y) -> (-y, x)
  static SymmetryTransform rotation_quarter();

  Vertex apply(Vertex v) const noexcept {
    return {m_[0] * v.x + m_[1] * v.y + t_.x, m_[2] * v.x + m_[3] * v.y + t_.y};
  }
  LatticeEdge apply(const LatticeEdge& e) const { return edge_between(apply(e.tail()), apply(e.head())); }
  /// Image rectangle of r.
  Region apply(const Region& r) const;

  SymmetryTransform inverse() const;
  /// `then(other)` applies *this first and `other` second.
  SymmetryTransform then(const SymmetryTransform& other) const;

  bool is_identity() const noexcept { return *this == SymmetryTransform{}; }
  bool swaps_axes() const noexcept { return m_[0] == 0; }

  friend bool operator==(const SymmetryTransform&, const SymmetryTransform&) = default;

 private:
  std::array<int, 4> m_{1, 0, 0, 1};
  Vertex t_{0, 0};
};

/// Pushes c forward along t: the output state at edge e is the input state at
/// t^{-1}(e). The output lives on t.apply(source).
Configuration apply_symmetry(const SymmetryTransform& t, const Configuration& c, const Region& source);

/// As above, but checks that t maps the edges of `source` onto those of `target`.
Configuration apply_symmetry(const SymmetryTransform& t, const Configuration& c, const Region& source,
                             const Region& target);

/// Inner dual of a region: one dual vertex per bounded unit face, one dual edge
/// per internal primal edge (an edge with a bounded face on both sides).
struct DualGraph {
  Region primal;
  /// Face (i, j) has lower-left corner (i, j); the dual edges are the edges of this rectangle.
  Region faces;
  /// dual edge index -> primal edge index
  std::vector<std::size_t> primal_edge;
  /// primal edge index -> dual edge index, or npos for edges on the outer face
  std::vector<std::size_t> dual_edge;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t internal_edge_count() const noexcept { return primal_edge.size(); }
};

/// Throws std::invalid_argument when the region has no bounded face.
DualGraph dual_graph(const Region& r);

/// Compact adjacency of a region, shared read-only by samplers and detectors.
class GridGraph {
 public:
  explicit GridGraph(Region r);

  struct Neighbor {
    std::uint32_t vertex;
    std::uint32_t edge;
  };

  const Region& region() const noexcept { return region_; }
  std::size_t vertex_count() const noexcept { return boundary_.size(); }
  std::size_t edge_count() const noexcept { return ends_.size(); }

  std::array<std::uint32_t, 2> ends(std::size_t e) const noexcept { return ends_[e]; }
  bool is_boundary(std::size_t v) const noexcept { return boundary_[v] != 0; }
  const std::vector<std::uint32_t>& boundary_list() const noexcept { return boundary_list_; }

  /// Neighbours of v as a (pointer, count) pair into the packed table.
  const Neighbor* neighbors(std::size_t v, std::size_t& count) const noexcept {
    count = degree_[v];
    return &adjacency_[4 * v];
  }

 private:
  Region region_;
  std::vector<std::array<std::uint32_t, 2>> ends_;
  std::vector<Neighbor> adjacency_;
  std::vector<std::uint8_t> degree_;
  std::vector<std::uint8_t> boundary_;
  std::vector<std::uint32_t> boundary_list_;
};

}  // namespace rcm
