#include <bit>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "rcm/events.hpp"
#include "rcm/exact_oracle.hpp"

using namespace rcm;

namespace {

const Region kEdge(0, 1, 0, 0);

Event edge0() {
  return [](const Configuration& c) { return c.open(0); };
}

}  // namespace

TEST_CASE("single edge, free boundary") {
  const auto d = enumerate_measure(kEdge, {0.5, 2.0, Boundary::free});
  CHECK(d.size() == 2);
  CHECK(d.probability(1) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(event_probability(d, edge0()) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(influence_exact(d, edge0(), 0) == doctest::Approx(2.0 / 9).epsilon(1e-14));
  CHECK(edge_marginal(d, 0) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(d.partition_function() == doctest::Approx(3.0));
}

TEST_CASE("single edge, wired boundary opens with probability p") {
  for (double p : {0.2, 0.5, 0.9}) {
    const auto d = enumerate_measure(kEdge, {p, 3.0, Boundary::wired});
    CHECK(edge_marginal(d, 0) == doctest::Approx(p).epsilon(1e-14));
  }
}

TEST_CASE("russo on a single edge") {
  const auto r = russo_check(kEdge, {0.5, 2.0, Boundary::free}, edge0(), 1e-4);
  CHECK(r.rhs == doctest::Approx(8.0 / 9).epsilon(1e-12));
  CHECK(r.lhs == doctest::Approx(8.0 / 9).epsilon(1e-7));
  const auto flat = russo_check(kEdge, {0.3, 1.0, Boundary::free}, edge0(), 1e-4);
  CHECK(flat.rhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(flat.lhs == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("russo on the unit square") {
  const Region r(0, 1, 0, 1);
  const auto ev = as_predicate(box_crossing(r, CrossingDirection::left_right), r);
  const auto res = russo_check(r, {0.5, 2.0, Boundary::free}, ev, 1e-4);
  CHECK(std::abs(res.lhs - res.rhs) < 1e-7);
}

TEST_CASE("normalisation and q = 1 product measure") {
  const Region r = build_region(1, 1);
  for (double p : {0.1, 0.5, 0.9})
    for (double q : {1.0, 1.5, 2.0, 4.0})
      for (Boundary bc : {Boundary::free, Boundary::wired}) {
        const auto d = enumerate_measure(r, {p, q, bc});
        double total = 0.0;
        for (double x : d.probabilities()) total += x;
        CHECK(std::abs(total - 1.0) < 1e-12);
        if (q == 1.0) {
          double worst = 0.0;
          for (std::uint64_t i = 0; i < d.size(); ++i) {
            const int k = std::popcount(i);
            const double product = std::pow(p, k) * std::pow(1 - p, 12 - k);
            worst = std::max(worst, std::abs(d.probability(i) - product));
          }
          CHECK(worst < 1e-12);
        }
      }
}

TEST_CASE("cluster counts") {
  const Region r = build_region(1, 1);
  const Configuration closed(r.edge_count());
  const Configuration open(r.edge_count(), true);
  CHECK(cluster_count(closed, r, Boundary::free) == 9);
  CHECK(cluster_count(closed, r, Boundary::wired) == 2);
  CHECK(cluster_count(open, r, Boundary::free) == 1);
  CHECK(cluster_count(open, r, Boundary::wired) == 1);
}

TEST_CASE("enumeration bound") {
  CHECK_THROWS_AS(enumerate_measure(Region(0, 5, 0, 2), {0.5, 2.0, Boundary::free}), EnumerationBoundError);
  CHECK_NOTHROW(enumerate_measure(Region(0, 4, 0, 2), {0.5, 1.0, Boundary::free}));
}

TEST_CASE("extreme p keeps a valid distribution") {
  const Region r = build_region(1, 1);
  const auto d = enumerate_measure(r, {1e-300, 4.0, Boundary::free});
  CHECK(std::isfinite(d.log_partition()));
  CHECK(d.probability(0) == doctest::Approx(1.0));
  const auto one = enumerate_measure(r, {1.0, 4.0, Boundary::free});
  CHECK(one.probability(one.size() - 1) == doctest::Approx(1.0));
}

TEST_CASE("reweight matches a fresh enumeration") {
  const Region r(0, 2, 0, 1);
  const auto base = enumerate_measure(r, {0.5, 2.0, Boundary::wired});
  const auto moved = reweight(base, 0.3, 4.0);
  const auto fresh = enumerate_measure(r, {0.3, 4.0, Boundary::wired});
  CHECK(tv_distance(moved, fresh) < 1e-14);
}

TEST_CASE("tv distance") {
  const std::vector<double> a{2.0 / 3, 1.0 / 3};
  const std::vector<double> b{0.5, 0.5};
  CHECK(tv_distance(a, b) == doctest::Approx(1.0 / 6));
  CHECK(tv_distance(a, a) == 0.0);
  const std::vector<double> x{1, 0}, y{0, 1};
  CHECK(tv_distance(x, y) == 1.0);
  const std::vector<double> z{1, 0, 0};
  CHECK_THROWS(tv_distance(x, z));
}

TEST_CASE("constant events") {
  const auto d = enumerate_measure(build_region(1, 1), {0.4, 2.0, Boundary::free});
  CHECK(event_probability(d, [](const Configuration&) { return true; }) == doctest::Approx(1.0));
  CHECK(event_probability(d, [](const Configuration&) { return false; }) == 0.0);
}

TEST_CASE("hamming expectation") {
  const auto d = enumerate_measure(kEdge, {0.5, 2.0, Boundary::free});
  CHECK(hamming_expectation(d, edge0()) == doctest::Approx(1.0 / 3));
  CHECK(std::isinf(hamming_expectation(d, [](const Configuration&) { return true; })));

  const Region r = build_region(1, 1);
  const auto ev = as_predicate(crossing_h(1, 1), r);
  const auto full = enumerate_measure(r, {0.5, 1.0, Boundary::free});
  const auto table = hamming_table(event_indicator(full, ev), r.edge_count());
  CHECK(table[full.size() - 1] == 3);
  CHECK(table[0] == 0);
}

TEST_CASE("FKG, domination and monotonicity on the catalog") {
  const Region r = build_region(1, 1);
  std::vector<Event> events;
  for (std::size_t e = 0; e < r.edge_count(); e += 3) events.push_back([e](const Configuration& c) { return c.open(e); });
  events.push_back(as_predicate(crossing_h(1, 1), r));
  events.push_back(as_predicate(crossing_v(1, 1), r));
  events.push_back(as_predicate(crossing_h(1, 0), r));

  for (double q : {1.0, 2.0, 4.0}) {
    std::vector<std::vector<std::uint8_t>> ind;
    double prev_free = -1, prev_wired = -1;
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const auto df = enumerate_measure(r, {p, q, Boundary::free});
      const auto dw = enumerate_measure(r, {p, q, Boundary::wired});
      if (ind.empty())
        for (const auto& ev : events) ind.push_back(event_indicator(df, ev));
      for (std::size_t i = 0; i < events.size(); ++i) {
        const double pf = event_probability(df, ind[i]);
        const double pw = event_probability(dw, ind[i]);
        CHECK(pf <= pw + 1e-10);
        for (std::size_t j = 0; j < events.size(); ++j) {
          std::vector<std::uint8_t> both(ind[i].size());
          for (std::size_t k = 0; k < both.size(); ++k) both[k] = ind[i][k] & ind[j][k];
          CHECK(event_probability(df, both) >= pf * event_probability(df, ind[j]) - 1e-10);
        }
        for (double J : influences_exact(dw, ind[i])) CHECK(J >= -1e-12);
      }
      const double f = event_probability(df, ind.back());
      const double w = event_probability(dw, ind.back());
      CHECK(f >= prev_free - 1e-10);
      CHECK(w >= prev_wired - 1e-10);
      prev_free = f;
      prev_wired = w;
    }
  }
}

TEST_CASE("pushforward and csv dump") {
  const auto d = enumerate_measure(kEdge, {0.5, 2.0, Boundary::free});
  const auto law = pushforward(d, [](const Configuration& c) { return c.open(0) ? 0u : 1u; }, 2);
  CHECK(law[0] == doctest::Approx(1.0 / 3));
  std::ostringstream os;
  write_csv(os, d);
  CHECK(os.str().rfind("config,weight,probability\n", 0) == 0);
}
