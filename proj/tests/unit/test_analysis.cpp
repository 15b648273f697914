#include <cmath>

#include "doctest.h"
#include "rcm/analysis.hpp"
#include "rcm/duality.hpp"
#include "rcm/exact_oracle.hpp"

using namespace rcm;

TEST_CASE("margin region") {
  CHECK(margin_region(build_region(2, 1), 2.0) == build_region(4, 2));
  CHECK(margin_region(build_region(2, 1), 1.0) == build_region(2, 1));
  CHECK(margin_region(Region(0, 3, 0, 2), 3.0) == Region(-3, 6, -2, 4));
  CHECK_THROWS(margin_region(build_region(1, 1), 0.5));
}

TEST_CASE("hamming lemma holds exactly on small boxes") {
  const Region r = build_region(1, 1);
  const std::vector<Event> events{as_predicate(crossing_h(1, 1), r), as_predicate(cross_event(1, 0), r),
                                  as_predicate(edge_open({{0, 0}, Orientation::horizontal}), r)};
  for (double q : {1.0, 2.0, 4.0})
    for (double p : {0.2, 0.5})
      for (double delta : {0.1, 0.2})
        for (Boundary bc : {Boundary::free, Boundary::wired})
          for (const auto& ev : events) {
            const auto res = check_hamming_exact(r, {p, q, bc}, ev, delta);
            CHECK(res.exact);
            CHECK(res.holds());
          }
}

TEST_CASE("translation difference bound") {
  for (double q : {1.0, 2.0, 4.0})
    for (Boundary bc : {Boundary::free, Boundary::wired}) {
      const auto rep = translation_difference_check(build_region(2, 1), {self_dual_point(q), q, bc}, 1, 1, 1);
      CHECK(rep.checks == 17);
      CHECK(rep.worst_slack >= -1e-10);
      const auto line = translation_difference_check(build_region(6, 0), {0.5, q, bc}, 0, 1, 5);
      CHECK(line.worst_slack >= -1e-10);
    }
  CHECK_THROWS(translation_difference_check(build_region(2, 1), {0.5, 1.0, Boundary::free}, 1, 0, 1));
}

TEST_CASE("inequality result bookkeeping") {
  InequalityResult r{"x", 0.5, 0.52, 0.01, 0.0, false};
  CHECK(r.combined_se() == doctest::Approx(0.01));
  CHECK(r.holds());
  CHECK_FALSE(r.holds(1.0));
  InequalityResult e{"y", 0.5, 0.5 + 1e-12, 0, 0, true};
  CHECK(e.holds());
  e.rhs = 0.51;
  CHECK_FALSE(e.holds());
}

TEST_CASE("influence estimates match the oracle") {
  const Region r(0, 2, 0, 1);
  const ModelParams params{0.5, 2.0, Boundary::free};
  const auto ev = as_predicate(box_crossing(r, CrossingDirection::left_right), r);
  const auto d = enumerate_measure(r, params);
  const auto exact = influences_exact(d, event_indicator(d, ev));
  const auto mc = influence_profile(r, params, ev, {40100, 100, 1, SamplerKind::heat_bath, 20}, 13);
  REQUIRE(mc.size() == exact.size());
  for (std::size_t e = 0; e < exact.size(); ++e) CHECK(std::abs(mc[e].value - exact[e]) < 4 * mc[e].standard_error + 1e-3);
  const auto one = influence_mc(r, params, ev, 0, {40100, 100, 1, SamplerKind::heat_bath, 20}, 13);
  CHECK(one.value == doctest::Approx(mc[0].value));
}

TEST_CASE("combination and gluing at small sizes") {
  McSettings mc{{4100, 100, 1, SamplerKind::chayes_machta, 20}, 5, 2.0};
  const double p = self_dual_point(2.0) + 0.1;
  const auto comb = check_combination({p, 2.0, Boundary::wired}, 2, 1, 2, 2, mc);
  CHECK(comb.holds());
  CHECK_THROWS(check_combination({p, 2.0, Boundary::wired}, 4, 1, 2, 2, mc));
  const auto glue = check_gluing({p, 2.0, Boundary::wired}, 2, 1, 3, mc);
  CHECK(glue.holds());
  CHECK_THROWS(check_gluing({p, 2.0, Boundary::wired}, 2, 0, 3, mc));
}

TEST_CASE("threshold curve helpers") {
  ThresholdCurve c;
  for (auto [p, v] : {std::pair{0.4, 0.1}, {0.5, 0.3}, {0.6, 0.7}, {0.7, 0.9}}) {
    ThresholdPoint pt;
    pt.p = p;
    pt.estimate.value = v;
    pt.estimate.standard_error = 0.01;
    c.points.push_back(pt);
  }
  CHECK(crossing_level(c, 0.5).value() == doctest::Approx(0.55));
  CHECK(crossing_level(c, 0.25).value() == doctest::Approx(0.475));
  CHECK_FALSE(crossing_level(c, 0.95).has_value());
  CHECK(is_monotone(c));
  c.points[2].estimate.value = 0.2;
  CHECK_FALSE(is_monotone(c));

  const McSettings mc{{200, 100, 1, SamplerKind::heat_bath, 20}, 1, 2.0};
  const std::vector<double> bad{0.5, 0.4};
  CHECK_THROWS(threshold_curve(1.0, 2, bad, mc));
  CHECK_THROWS(threshold_curve(1.0, 2, std::vector<double>{}, mc));
  CHECK_THROWS(threshold_curve(1.0, 2, std::vector<double>{1.0}, mc));
}

TEST_CASE("threshold curve is deterministic and increasing") {
  const McSettings mc{{2100, 100, 1, SamplerKind::heat_bath, 20}, 3, 2.0};
  const std::vector<double> grid{0.3, 0.5, 0.7};
  const auto a = threshold_curve(1.0, 2, grid, mc);
  const auto b = threshold_curve(1.0, 2, grid, mc);
  CHECK(a.region == build_region(8, 4));
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(a.points[i].estimate.value == b.points[i].estimate.value);
  CHECK(is_monotone(a));
  CHECK(a.points.front().estimate.value < a.points.back().estimate.value);
}

TEST_CASE("estimate_pc argument checks") {
  const McSettings mc{{200, 100, 1, SamplerKind::heat_bath, 20}, 1, 2.0};
  CHECK_THROWS_AS(estimate_pc(1.0, 4, 0.02, mc), std::invalid_argument);
  CHECK_THROWS_AS(estimate_pc(1.0, 8, 0.001, mc), std::invalid_argument);
}

TEST_CASE("log-linear fit") {
  DecayFit fit;
  for (int d : {2, 4, 6, 8, 10}) {
    DecayPoint pt;
    pt.distance = d;
    pt.estimate.value = std::exp(-0.5 * d + 0.1);
    pt.estimate.standard_error = pt.estimate.value * 0.01;
    pt.estimate.n_samples = 100000;
    pt.log_probability = std::log(pt.estimate.value);
    pt.used = true;
    fit.points.push_back(pt);
  }
  fit_log_linear(fit);
  CHECK(fit.slope == doctest::Approx(-0.5));
  CHECK(fit.intercept == doctest::Approx(0.1));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  fit.points.resize(3);
  CHECK_THROWS_AS(fit_log_linear(fit), DecayFitError);
}

TEST_CASE("decay is visible in a small subcritical run") {
  const McSettings mc{{3000, 100, 1, SamplerKind::heat_bath, 20}, 2, 2.0};
  const std::vector<int> ds{1, 2, 3, 4};
  const auto fit = fit_decay(1.0, 0.45, ds, mc);
  CHECK(fit.slope < 0.0);
  CHECK(fit.points.size() == 4);
}

TEST_CASE("sharp threshold diagnostic in exact mode") {
  const Region r = build_region(2, 1);
  const auto rep = sharp_threshold_diagnostic(r, {0.5, 1.0, Boundary::free}, 1, 1, 2, 1.0, DiagnosticMode::exact);
  REQUIRE(rep.per_k.size() == 2);
  for (const auto& k : rep.per_k) {
    CHECK(k.influences.size() == r.edge_count());
    double sum = 0, mx = 0;
    for (double j : k.influences) {
      CHECK(j >= -1e-12);
      sum += j;
      mx = std::max(mx, j);
    }
    CHECK(k.sum == doctest::Approx(sum));
    CHECK(k.max == doctest::Approx(mx));
    CHECK(k.f == doctest::Approx(std::max(std::log(1.0 / mx), sum)));
  }
  CHECK(rep.total_f == doctest::Approx(rep.per_k[0].f + rep.per_k[1].f));
}
