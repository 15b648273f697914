#include <set>

#include "doctest.h"
#include "rcm/lattice.hpp"

using namespace rcm;

TEST_CASE("region counts") {
  const Region r = build_region(2, 1);
  CHECK(r.vertex_count() == 15);
  CHECK(r.edge_count() == 22);
  CHECK(build_region(1, 1).edge_count() == 12);
  CHECK(Region(0, 0, 0, 0).edge_count() == 0);
  CHECK(Region(0, 1, 0, 0).edge_count() == 1);
  CHECK_THROWS(Region(1, 0, 0, 0));
}

TEST_CASE("edge indexing is a bijection in row-major order") {
  const Region r(-1, 2, 3, 5);
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < r.edge_count(); ++i) {
    const LatticeEdge e = r.edge_at(i);
    CHECK(r.contains(e));
    CHECK(r.edge_index(e) == i);
    CHECK(r.edge_index_unchecked(e.anchor, e.orientation) == i);
    seen.insert(i);
    if (i > 0) {
      const LatticeEdge prev = r.edge_at(i - 1);
      CHECK(std::pair(prev.anchor.y, prev.anchor.x) <= std::pair(e.anchor.y, e.anchor.x));
    }
  }
  CHECK(seen.size() == r.edge_count());
  CHECK(r.edge_at(0).orientation == Orientation::horizontal);
  CHECK(r.edge_at(1).orientation == Orientation::vertical);
  CHECK_THROWS_AS(r.edge_index(LatticeEdge{{2, 3}, Orientation::horizontal}), std::out_of_range);
  CHECK_FALSE(r.find_edge(LatticeEdge{{2, 5}, Orientation::vertical}).has_value());
}

TEST_CASE("vertex indexing round-trips") {
  const Region r(-2, 1, -1, 1);
  for (std::size_t i = 0; i < r.vertex_count(); ++i) CHECK(r.vertex_index(r.vertex_at(i)) == i);
  CHECK_THROWS(r.vertex_index({5, 5}));
}

TEST_CASE("boundary vertices") {
  CHECK(boundary_vertices(build_region(1, 1)).size() == 8);
  CHECK(boundary_vertices(build_region(2, 2)).size() == 16);
  CHECK(boundary_vertices(Region(0, 0, 0, 0)).size() == 1);
}

TEST_CASE("edge_between") {
  CHECK(edge_between({1, 1}, {0, 1}) == LatticeEdge{{0, 1}, Orientation::horizontal});
  CHECK(edge_between({0, 0}, {0, 1}) == LatticeEdge{{0, 0}, Orientation::vertical});
  CHECK_THROWS(edge_between({0, 0}, {1, 1}));
}

TEST_CASE("symmetries compose and invert") {
  const auto rot = SymmetryTransform::rotation_quarter();
  CHECK(rot.apply(Vertex{1, 0}) == Vertex{0, 1});
  CHECK(rot.then(rot).then(rot).then(rot).is_identity());
  const auto t = SymmetryTransform::reflection_x_axis().then(SymmetryTransform::translation(3, -2)).then(rot);
  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y) {
      const Vertex v{x, y};
      CHECK(t.inverse().apply(t.apply(v)) == v);
      CHECK(t.then(t.inverse()).apply(v) == v);
    }
  CHECK(rot.swaps_axes());
  CHECK_FALSE(SymmetryTransform::reflection_y_axis().swaps_axes());
  CHECK(rot.apply(build_region(2, 1)) == build_region(1, 2));
}

TEST_CASE("apply_symmetry moves edge states") {
  const Region r = build_region(1, 1);
  Configuration c(r.edge_count());
  const LatticeEdge e{{0, 0}, Orientation::horizontal};
  c.set(r.edge_index(e), true);
  const auto rot = SymmetryTransform::rotation_quarter();
  const Configuration d = apply_symmetry(rot, c, r, r);
  CHECK(d.open_count() == 1);
  CHECK(d.open(r.edge_index(LatticeEdge{{0, 0}, Orientation::vertical})));
  CHECK_THROWS(apply_symmetry(SymmetryTransform::translation(1, 0), c, r, r));
}

TEST_CASE("inner dual") {
  const Region r = build_region(1, 1);
  const DualGraph g = dual_graph(r);
  CHECK(g.faces == Region(-1, 0, -1, 0));
  CHECK(g.internal_edge_count() == 4);
  std::size_t outer = 0;
  for (std::size_t e = 0; e < r.edge_count(); ++e) {
    if (g.dual_edge[e] == DualGraph::npos) {
      ++outer;
    } else {
      CHECK(g.primal_edge[g.dual_edge[e]] == e);
    }
  }
  CHECK(outer == 8);
  CHECK_THROWS_AS(dual_graph(Region(0, 3, 0, 0)), std::invalid_argument);
}

TEST_CASE("grid graph adjacency") {
  const Region r(0, 2, 0, 1);
  const GridGraph g(r);
  CHECK(g.vertex_count() == 6);
  CHECK(g.edge_count() == r.edge_count());
  std::size_t degree_sum = 0;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    std::size_t count = 0;
    g.neighbors(v, count);
    degree_sum += count;
  }
  CHECK(degree_sum == 2 * g.edge_count());
  CHECK(g.boundary_list().size() == 6);
}
