#include "rcm/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rcm {

LatticeEdge edge_between(Vertex a, Vertex b) {
  if (a.y == b.y && (a.x - b.x == 1 || b.x - a.x == 1))
    return {a.x < b.x ? a : b, Orientation::horizontal};
  if (a.x == b.x && (a.y - b.y == 1 || b.y - a.y == 1))
    return {a.y < b.y ? a : b, Orientation::vertical};
  throw std::invalid_argument("edge_between: vertices are not nearest neighbours");
}

Region::Region(int x_min, int x_max, int y_min, int y_max)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max) {
  if (x_min > x_max || y_min > y_max)
    throw std::invalid_argument("Region: empty rectangle " + to_string());
}

std::size_t Region::edge_count() const noexcept {
  const std::size_t w = static_cast<std::size_t>(width());
  const std::size_t h = static_cast<std::size_t>(height());
  return (w - 1) * h + w * (h - 1);
}

std::size_t Region::vertex_index(Vertex v) const {
  if (!contains(v)) throw std::out_of_range("vertex outside region " + to_string());
  return static_cast<std::size_t>(v.y - y_min_) * static_cast<std::size_t>(width()) +
         static_cast<std::size_t>(v.x - x_min_);
}

Vertex Region::vertex_at(std::size_t index) const {
  if (index >= vertex_count()) throw std::out_of_range("vertex index out of range");
  const auto w = static_cast<std::size_t>(width());
  return {x_min_ + static_cast<int>(index % w), y_min_ + static_cast<int>(index / w)};
}

std::optional<std::size_t> Region::find_edge(const LatticeEdge& e) const noexcept {
  if (!contains(e)) return std::nullopt;
  return edge_index_unchecked(e.anchor, e.orientation);
}

std::size_t Region::edge_index(const LatticeEdge& e) const {
  if (auto idx = find_edge(e)) return *idx;
  throw std::out_of_range("edge outside region " + to_string());
}

LatticeEdge Region::edge_at(std::size_t index) const {
  if (index >= edge_count()) throw std::out_of_range("edge index out of range");
  const std::size_t w = static_cast<std::size_t>(width());
  const std::size_t per_row = 2 * w - 1;
  const std::size_t j = index / per_row;
  const std::size_t r = index % per_row;
  const int y = y_min_ + static_cast<int>(j);
  if (j + 1 == static_cast<std::size_t>(height()))
    return {{x_min_ + static_cast<int>(r), y}, Orientation::horizontal};
  if (r == 2 * (w - 1)) return {{x_max_, y}, Orientation::vertical};
  return {{x_min_ + static_cast<int>(r / 2), y},
          r % 2 == 0 ? Orientation::horizontal : Orientation::vertical};
}

EdgeId Region::edge_id(std::size_t index) const {
  const LatticeEdge e = edge_at(index);
  return {index, e.tail(), e.head()};
}

std::string Region::to_string() const {
  std::ostringstream os;
  os << "[" << x_min_ << "," << x_max_ << "]x[" << y_min_ << "," << y_max_ << "]";
  return os.str();
}

Region build_region(int a, int b, Vertex offset) {
  if (a < 0 || b < 0) throw std::invalid_argument("build_region: a and b must be non-negative");
  return Region(-a, a, -b, b).translated(offset);
}

std::vector<Vertex> boundary_vertices(const Region& r) {
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < r.vertex_count(); ++i) {
    const Vertex v = r.vertex_at(i);
    if (r.on_boundary(v)) out.push_back(v);
  }
  return out;
}

Region bounding_region(const Region& a, const Region& b) {
  return {std::min(a.x_min(), b.x_min()), std::max(a.x_max(), b.x_max()),
          std::min(a.y_min(), b.y_min()), std::max(a.y_max(), b.y_max())};
}

SymmetryTransform SymmetryTransform::translation(int dx, int dy) {
  SymmetryTransform t;
  t.t_ = {dx, dy};
  return t;
}

SymmetryTransform SymmetryTransform::reflection_x_axis() {
  SymmetryTransform t;
  t.m_ = {1, 0, 0, -1};
  return t;
}

SymmetryTransform SymmetryTransform::reflection_y_axis() {
  SymmetryTransform t;
  t.m_ = {-1, 0, 0, 1};
  return t;
}

SymmetryTransform SymmetryTransform::rotation_quarter() {
  SymmetryTransform t;
  t.m_ = {0, -1, 1, 0};
  return t;
}

Region SymmetryTransform::apply(const Region& r) const {
  const Vertex a = apply(Vertex{r.x_min(), r.y_min()});
  const Vertex b = apply(Vertex{r.x_max(), r.y_max()});
  return {std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y), std::max(a.y, b.y)};
}

SymmetryTransform SymmetryTransform::inverse() const {
  SymmetryTransform inv;
  inv.m_ = {m_[0], m_[2], m_[1], m_[3]};  // orthogonal: inverse is the transpose
  inv.t_ = {-(inv.m_[0] * t_.x + inv.m_[1] * t_.y), -(inv.m_[2] * t_.x + inv.m_[3] * t_.y)};
  return inv;
}

SymmetryTransform SymmetryTransform::then(const SymmetryTransform& o) const {
  SymmetryTransform r;
  r.m_ = {o.m_[0] * m_[0] + o.m_[1] * m_[2], o.m_[0] * m_[1] + o.m_[1] * m_[3],
          o.m_[2] * m_[0] + o.m_[3] * m_[2], o.m_[2] * m_[1] + o.m_[3] * m_[3]};
  r.t_ = o.apply(t_);
  return r;
}

Configuration apply_symmetry(const SymmetryTransform& t, const Configuration& c, const Region& source) {
  return apply_symmetry(t, c, source, t.apply(source));
}

Configuration apply_symmetry(const SymmetryTransform& t, const Configuration& c, const Region& source,
                             const Region& target) {
  if (c.size() != source.edge_count())
    throw std::invalid_argument("apply_symmetry: configuration does not match source region");
  if (t.apply(source) != target)
    throw std::invalid_argument("apply_symmetry: transform does not map " + source.to_string() +
                                " onto " + target.to_string());
  Configuration out(target.edge_count());
  for (std::size_t e = 0; e < source.edge_count(); ++e)
    out.set(target.edge_index(t.apply(source.edge_at(e))), c.open(e));
  return out;
}

DualGraph dual_graph(const Region& r) {
  if (r.width() < 2 || r.height() < 2)
    throw std::invalid_argument("dual_graph: region " + r.to_string() + " has no bounded face");
  DualGraph d{r, Region(r.x_min(), r.x_max() - 1, r.y_min(), r.y_max() - 1), {}, {}};
  d.primal_edge.resize(d.faces.edge_count());
  d.dual_edge.assign(r.edge_count(), DualGraph::npos);
  for (std::size_t k = 0; k < d.faces.edge_count(); ++k) {
    const LatticeEdge de = d.faces.edge_at(k);
    // A horizontal dual edge between faces (i,j) and (i+1,j) crosses the
    // vertical primal edge anchored at (i+1,j); a vertical dual edge between
    // (i,j) and (i,j+1) crosses the horizontal primal edge anchored at (i,j+1).
    const LatticeEdge pe = de.orientation == Orientation::horizontal
                               ? LatticeEdge{{de.anchor.x + 1, de.anchor.y}, Orientation::vertical}
                               : LatticeEdge{{de.anchor.x, de.anchor.y + 1}, Orientation::horizontal};
    const std::size_t pi = r.edge_index(pe);
    d.primal_edge[k] = pi;
    d.dual_edge[pi] = k;
  }
  return d;
}

GridGraph::GridGraph(Region r) : region_(r) {
  const std::size_t nv = region_.vertex_count();
  const std::size_t ne = region_.edge_count();
  ends_.resize(ne);
  adjacency_.assign(4 * nv, Neighbor{0, 0});
  degree_.assign(nv, 0);
  boundary_.assign(nv, 0);
  for (std::size_t e = 0; e < ne; ++e) {
    const LatticeEdge le = region_.edge_at(e);
    const auto u = static_cast<std::uint32_t>(region_.vertex_index(le.tail()));
    const auto v = static_cast<std::uint32_t>(region_.vertex_index(le.head()));
    ends_[e] = {u, v};
    adjacency_[4 * u + degree_[u]++] = {v, static_cast<std::uint32_t>(e)};
    adjacency_[4 * v + degree_[v]++] = {u, static_cast<std::uint32_t>(e)};
  }
  for (std::size_t i = 0; i < nv; ++i) {
    if (region_.on_boundary(region_.vertex_at(i))) {
      boundary_[i] = 1;
      boundary_list_.push_back(static_cast<std::uint32_t>(i));
    }
  }
}

}  // namespace rcm
