#include <cmath>

#include "doctest.h"
#include "rcm/duality.hpp"
#include "rcm/exact_oracle.hpp"
#include "rcm/rng.hpp"

using namespace rcm;

TEST_CASE("dual parameter") {
  CHECK(dual_parameter(0.8, 2.0) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(dual_parameter(2.0 / 3, 4.0) == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(dual_parameter(0.5, 1.0) == doctest::Approx(0.5));
  for (double q : {1.0, 2.0, 4.0, 9.0}) {
    const double ps = self_dual_point(q);
    CHECK(dual_parameter(ps, q) == doctest::Approx(ps).epsilon(1e-14));
    for (double p : {0.1, 0.4, 0.8}) {
      const double d = dual_parameter(p, q);
      CHECK(p * d / ((1 - p) * (1 - d)) == doctest::Approx(q).epsilon(1e-12));
      CHECK(dual_parameter(d, q) == doctest::Approx(p).epsilon(1e-12));
    }
  }
  CHECK_THROWS(dual_parameter(0.0, 2.0));
  CHECK_THROWS(dual_parameter(1.0, 2.0));
  CHECK_THROWS(dual_parameter(0.5, 0.5));
}

TEST_CASE("dual configuration is an involution on internal edges") {
  const Region r = build_region(1, 1);
  const DualGraph g = dual_graph(r);
  const Configuration all(r.edge_count(), true);
  CHECK(dual_configuration(all, g).open_count() == 0);
  CHECK(dual_configuration(Configuration(r.edge_count()), g).open_count() == g.internal_edge_count());
  CHECK(dual_configuration(all, r).size() == g.faces.edge_count());
}

TEST_CASE("wired primal maps to free dual") {
  for (const Region& r : {build_region(1, 1), Region(0, 3, 0, 2)}) {
    const DualGraph g = dual_graph(r);
    for (double p : {0.3, 0.7})
      for (double q : {1.0, 2.0, 4.0}) {
        const auto primal = enumerate_measure(r, {p, q, Boundary::wired});
        const auto dual = enumerate_measure(g.faces, {dual_parameter(p, q), q, Boundary::free});
        const auto law = pushforward(primal, [&](const Configuration& c) { return dual_configuration(c, g).to_bits(); },
                                     dual.size());
        CHECK(tv_distance(law, dual.probabilities()) < 1e-10);
      }
  }
}

TEST_CASE("exactly one of E and E* holds") {
  const auto [e, estar] = dual_crossing_event(1);
  const Region host = dual_host_region(1);
  CHECK(host == Region(0, 3, -1, 3));
  const DualGraph g = dual_graph(host);
  const EventDetector primal(e, host);
  const EventDetector dual(estar, g.faces);
  // The 17 edges of the box of E. Outside it only edges that join two faces on
  // the same side of the box of E* remain, and those change neither event.
  std::vector<std::size_t> shared;
  for (int y = 0; y <= 2; ++y)
    for (int x = 0; x <= 2; ++x) shared.push_back(host.edge_index(LatticeEdge{{x, y}, Orientation::horizontal}));
  for (int y = 0; y <= 1; ++y)
    for (int x = 0; x <= 3; ++x) shared.push_back(host.edge_index(LatticeEdge{{x, y}, Orientation::vertical}));
  REQUIRE(shared.size() == 17);
  int bad = 0;
  for (bool rest : {false, true})
    for (std::uint32_t bits = 0; bits < (1u << 17); ++bits) {
      Configuration c(host.edge_count(), rest);
      for (std::size_t k = 0; k < shared.size(); ++k) c.set(shared[k], (bits >> k) & 1u);
      if (primal(c) == dual(dual_configuration(c, g))) ++bad;
    }
  CHECK(bad == 0);
}
