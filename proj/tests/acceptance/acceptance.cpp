// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line; the
// process exits nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rcm/analysis.hpp"
#include "rcm/duality.hpp"
#include "rcm/events.hpp"
#include "rcm/exact_oracle.hpp"
#include "rcm/sampler.hpp"

using namespace rcm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;
  std::function<Outcome(std::uint64_t)> body;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const std::vector<double> kP{0.3, 0.5, 0.7};
const std::vector<double> kQ{1.0, 2.0, 4.0};
const std::vector<Boundary> kBc{Boundary::free, Boundary::wired};

// Small regions used by the exhaustive checks, by edge count: the single edge
// and the boxes with at least two rows.
std::vector<Region> catalog(std::size_t max_edges) {
  const std::vector<Region> all{Region(0, 1, 0, 0), Region(0, 1, 0, 1), Region(0, 2, 0, 1),
                                Region(0, 3, 0, 1), Region(0, 2, 0, 2), Region(0, 5, 0, 1)};
  std::vector<Region> out;
  for (const auto& r : all)
    if (r.edge_count() <= max_edges) out.push_back(r);
  return out;
}

// Increasing events on r: every single edge open, and both crossings of r.
std::vector<Event> catalog_events(const Region& r) {
  std::vector<Event> out;
  for (std::size_t e = 0; e < r.edge_count(); ++e) out.push_back([e](const Configuration& c) { return c.open(e); });
  out.push_back(as_predicate(box_crossing(r, CrossingDirection::left_right), r));
  out.push_back(as_predicate(box_crossing(r, CrossingDirection::bottom_top), r));
  return out;
}

// 1. Oracle properties on the catalog.
Outcome oracle_properties(std::uint64_t) {
  constexpr double kNormTol = 1e-12;
  constexpr double kProductTol = 1e-12;
  constexpr double kSlackTol = -1e-10;
  double worst_norm = 0.0, worst_product = 0.0, worst_fkg = 0.0, worst_dom = 0.0, worst_mono = 0.0;
  std::size_t regions = 0, checks = 0;
  for (const Region& r : catalog(16)) {
    ++regions;
    const auto events = catalog_events(r);
    std::vector<std::vector<std::uint8_t>> ind;
    for (double q : kQ) {
      std::vector<std::vector<double>> prob_by_p[2];
      for (double p : kP) {
        for (int b = 0; b < 2; ++b) {
          const auto d = enumerate_measure(r, {p, q, kBc[b]});
          if (ind.empty())
            for (const auto& ev : events) ind.push_back(event_indicator(d, ev));
          const auto probs = d.probabilities();
          long double total = 0.0L;
          for (double x : probs) total += x;
          worst_norm = std::max(worst_norm, static_cast<double>(std::abs(total - 1.0L)));
          if (q == 1.0) {
            const std::size_t m = r.edge_count();
            for (std::uint64_t i = 0; i < d.size(); ++i) {
              const int k = std::popcount(i);
              const double product = std::pow(p, k) * std::pow(1 - p, double(m) - k);
              worst_product = std::max(worst_product, std::abs(probs[i] - product));
            }
          }
          std::vector<double> pe(events.size());
          for (std::size_t a = 0; a < events.size(); ++a) pe[a] = event_probability(d, ind[a]);
          for (std::size_t a = 0; a < events.size(); ++a)
            for (std::size_t c = a; c < events.size(); ++c) {
              double joint = 0.0;
              for (std::uint64_t i = 0; i < d.size(); ++i)
                if (ind[a][i] & ind[c][i]) joint += probs[i];
              worst_fkg = std::min(worst_fkg, joint - pe[a] * pe[c]);
              ++checks;
            }
          prob_by_p[b].push_back(pe);
        }
      }
      for (std::size_t k = 0; k < kP.size(); ++k)
        for (std::size_t a = 0; a < events.size(); ++a) {
          for (int b = 0; b < 2; ++b)
            if (k > 0) worst_mono = std::min(worst_mono, prob_by_p[b][k][a] - prob_by_p[b][k - 1][a]);
          worst_dom = std::min(worst_dom, prob_by_p[1][k][a] - prob_by_p[0][k][a]);
        }
    }
  }
  const bool pass = worst_norm < kNormTol && worst_product < kProductTol && worst_fkg >= kSlackTol &&
                    worst_dom >= kSlackTol && worst_mono >= kSlackTol;
  return {pass, fmt("regions=%zu fkg_pairs=%zu |sum-1|max=%.2e |P-product|max=%.2e fkg_min=%.2e "
                    "domination_min=%.2e monotone_min=%.2e",
                    regions, checks, worst_norm, worst_product, worst_fkg, worst_dom, worst_mono)};
}

// 2. Empirical law of heat-bath samples against the exact measure.
Outcome sampler_vs_oracle(std::uint64_t seed) {
  constexpr double kTvTol = 0.01;
  constexpr std::int64_t kSamples = 1'000'000;
  constexpr std::int64_t kThin = 2;
  constexpr std::int64_t kBurnIn = 1000;
  const Region r = build_region(1, 1);
  double worst_tv = 0.0, floor_at_worst = 0.0, worst_ratio = 0.0;
  std::string worst_label;
  std::uint64_t task = 0;
  for (double p : kP)
    for (double q : kQ)
      for (Boundary bc : kBc) {
        const ModelParams params{p, q, bc};
        const auto exact = enumerate_measure(r, params);
        std::vector<double> freq(exact.size(), 0.0);
        const Schedule s{kBurnIn + kThin * kSamples, kBurnIn, kThin, SamplerKind::heat_bath, 20};
        run_chain(r, params, s, derive_seed(seed, task++),
                  [&](const Configuration& c) { freq[c.to_bits()] += 1.0 / double(kSamples); });
        const double tv = tv_distance(freq, exact.probabilities());
        // Expected TV of an exact iid sample of the same size.
        double floor = 0.0;
        for (double x : exact.probabilities())
          floor += 0.5 * std::min(2.0 * x, std::sqrt(2.0 * x * (1 - x) / (std::numbers::pi * double(kSamples))));
        worst_ratio = std::max(worst_ratio, tv / floor);
        if (tv > worst_tv) {
          worst_tv = tv;
          floor_at_worst = floor;
          worst_label = fmt("p=%g q=%g %s", p, q, std::string(to_string(bc)).c_str());
        }
      }
  return {worst_tv < kTvTol, fmt("max_tv=%.4f at %s (iid noise floor there %.4f), max tv/floor=%.2f, tol %.2g, "
                                 "%lld samples/point",
                                 worst_tv, worst_label.c_str(), floor_at_worst, worst_ratio, kTvTol,
                                 (long long)kSamples)};
}

// 3. Max-flow crossing count equals the exhaustive closure number.
Outcome menger_identity(std::uint64_t) {
  const Region r = build_region(1, 1);
  const auto d = enumerate_measure(r, {0.5, 1.0, Boundary::free});
  const auto table = hamming_table(event_indicator(d, as_predicate(crossing_h(1, 1), r)), r.edge_count());
  std::size_t mismatches = 0;
  for (std::uint64_t i = 0; i < d.size(); ++i)
    if (count_disjoint_crossings(d.configuration(i), r, 1, 1) != table[i]) ++mismatches;
  return {mismatches == 0, fmt("configurations=%zu mismatches=%zu", d.size(), mismatches)};
}

// 4. Dual of the wired measure is the free measure at p*.
Outcome finite_volume_duality(std::uint64_t) {
  constexpr double kTvTol = 1e-10;
  // The boxes whose inner dual has at least one edge, smallest first.
  const std::vector<Region> boxes{Region(0, 2, 0, 1), Region(0, 3, 0, 1), Region(0, 2, 0, 2)};
  double worst = 0.0;
  for (const Region& r : boxes) {
    const DualGraph g = dual_graph(r);
    for (double p : kP)
      for (double q : kQ) {
        const auto primal = enumerate_measure(r, {p, q, Boundary::wired});
        const auto dual = enumerate_measure(g.faces, {dual_parameter(p, q), q, Boundary::free});
        const auto law = pushforward(
            primal, [&](const Configuration& c) { return dual_configuration(c, g).to_bits(); }, dual.size());
        worst = std::max(worst, tv_distance(law, dual.probabilities()));
      }
  }
  return {worst < kTvTol, fmt("boxes=%zu max_tv=%.3e tol %.0e", boxes.size(), worst, kTvTol)};
}

// 5. Exactly one of E and E* on every configuration of the box of E.
Outcome complementary_crossing(std::uint64_t) {
  const auto [e, estar] = dual_crossing_event(1);
  const Region host = dual_host_region(1);
  const DualGraph g = dual_graph(host);
  const EventDetector primal(e, host);
  const EventDetector dual(estar, g.faces);
  const Region box = support(e);
  std::vector<std::size_t> free_edges;
  for (std::size_t i = 0; i < box.edge_count(); ++i) free_edges.push_back(host.edge_index(box.edge_at(i)));
  std::size_t bad = 0, total = 0;
  for (bool rest : {false, true})
    for (std::uint32_t bits = 0; bits < (1u << free_edges.size()); ++bits) {
      Configuration c(host.edge_count(), rest);
      for (std::size_t k = 0; k < free_edges.size(); ++k) c.set(free_edges[k], (bits >> k) & 1u);
      if (primal(c) == dual(dual_configuration(c, g))) ++bad;
      ++total;
    }
  return {bad == 0, fmt("box_edges=%zu configurations=%zu violations=%zu", free_edges.size(), total, bad)};
}

// 6. Crossing probability of the strip at the self-dual point.
Outcome selfdual_crossing(std::uint64_t seed) {
  constexpr double kSigma = 3.0;
  constexpr double kMargin = 2.0;
  bool pass = true;
  std::ostringstream detail;
  std::uint64_t task = 0;
  for (double q : kQ)
    for (int n : {8, 16}) {
      const EventSpec ev = strip_crossing(n);
      EstimateWithError est;
      if (q == 1.0) {
        // Product measure: the support alone is exact and each sweep is an independent draw.
        const Region r = support(ev);
        est = estimate_event(r, {0.5, 1.0, Boundary::free}, as_predicate(ev, r),
                             {10 + 40000, 10, 1, SamplerKind::heat_bath, 20}, derive_seed(seed, task++));
        const bool ok = std::abs(est.value - 0.5) <= kSigma * est.standard_error;
        pass = pass && ok;
      } else {
        const Region r = margin_region(support(ev), kMargin);
        est = estimate_event(r, {self_dual_point(q), q, Boundary::wired}, as_predicate(ev, r),
                             {2000 + 40000, 2000, 1, SamplerKind::chayes_machta, 20}, derive_seed(seed, task++));
        const bool ok = est.value >= 0.5 - kSigma * est.standard_error;
        pass = pass && ok;
      }
      detail << fmt("q=%g n=%d P(E)=%.4f+-%.4f; ", q, n, est.value, est.standard_error);
    }
  return {pass, detail.str()};
}

// 7. Bisection bracket for the level-1/2 point of C_h(2n, n).
Outcome critical_bracket(std::uint64_t seed) {
  constexpr int kN = 16;
  constexpr double kTolerance = 0.02;
  bool pass = true;
  std::ostringstream detail;
  std::uint64_t task = 0;
  for (double q : kQ) {
    McSettings mc;
    mc.seed = derive_seed(seed, task++);
    mc.margin = 2.0;
    mc.schedule = q == 1.0 ? Schedule{10 + 20000, 10, 1, SamplerKind::heat_bath, 20}
                           : Schedule{2000 + 2 * 10000, 2000, 2, SamplerKind::chayes_machta, 20};
    const double target = self_dual_point(q);
    try {
      const PcBracket br = estimate_pc(q, kN, kTolerance, mc);
      const bool ok = br.lo <= target && target <= br.hi;
      pass = pass && ok;
      const auto& first = br.evaluations.front();
      detail << fmt("q=%g [%.5f, %.5f] %s %.4f (P at p=%.3f: %.3f+-%.3f); ", q, br.lo, br.hi,
                    ok ? "contains" : "misses", target, first.p, first.estimate.value, first.estimate.standard_error);
    } catch (const BracketError& e) {
      pass = false;
      detail << fmt("q=%g bracket error: %s; ", q, e.what());
    }
  }
  return {pass, detail.str()};
}

// 8. Finite-difference derivative against the influence sum.
Outcome russo_formula(std::uint64_t) {
  constexpr double kH = 1e-4;
  constexpr double kRelTol = 1e-6;
  constexpr double kAbsTol = 1e-12;
  double worst = 0.0;
  std::string worst_case;
  std::size_t checks = 0;
  for (const Region& r : catalog(12)) {
    const auto events = catalog_events(r);
    for (double p : kP)
      for (double q : kQ)
        for (Boundary bc : kBc) {
          const ModelParams params{p, q, bc};
          const auto lo = enumerate_measure(r, params.with_p(p - kH));
          const auto mid = reweight(lo, p, q);
          const auto hi = reweight(lo, p + kH, q);
          for (const auto& ev : events) {
            const auto ind = event_indicator(mid, ev);
            // A constant event has derivative zero on both sides; only rounding remains.
            if (std::all_of(ind.begin(), ind.end(), [&](auto x) { return x == ind.front(); })) continue;
            const double lhs = (event_probability(hi, ind) - event_probability(lo, ind)) / (2 * kH);
            double sum = 0.0;
            for (double j : influences_exact(mid, ind)) sum += j;
            const double rhs = sum / (p * (1 - p));
            const double ratio = std::abs(lhs - rhs) / (kRelTol * std::abs(rhs) + kAbsTol);
            if (ratio > worst) {
              worst = ratio;
              worst_case = fmt("%s p=%g q=%g %s lhs=%.10g rhs=%.10g", r.to_string().c_str(), p, q,
                               std::string(to_string(bc)).c_str(), lhs, rhs);
            }
            ++checks;
          }
        }
  }
  return {worst <= 1.0, fmt("checks=%zu worst |lhs-rhs|/(%.0e|rhs|+%.0e)=%.3f at %s", checks, kRelTol, kAbsTol, worst,
                           worst_case.c_str())};
}

// 9. Combination, gluing, Hamming and translation-difference inequalities.
Outcome inequality_suite(std::uint64_t seed) {
  constexpr double kSigma = 3.0;
  constexpr double kExactTol = 1e-10;
  constexpr double kDelta = 0.05;
  bool pass = true;
  std::ostringstream detail;
  std::size_t mc_checks = 0, exact_checks = 0;
  double worst_mc_z = std::numeric_limits<double>::infinity();
  std::string worst_mc;
  auto record_mc = [&](const InequalityResult& res, double q, int n) {
    ++mc_checks;
    const double z = res.combined_se() > 0 ? res.slack() / res.combined_se() : (res.slack() >= 0 ? 1e9 : -1e9);
    if (z < worst_mc_z) {
      worst_mc_z = z;
      worst_mc = fmt("%s q=%g n=%d lhs=%.4f rhs=%.4f", res.name.c_str(), q, n, res.lhs, res.rhs);
    }
    pass = pass && res.holds(kSigma, kExactTol);
  };
  std::uint64_t task = 0;
  for (double q : {1.0, 2.0}) {
    const double pc = self_dual_point(q);
    const Schedule s = q == 1.0 ? Schedule{10 + 4000, 10, 1, SamplerKind::heat_bath, 20}
                                : Schedule{1000 + 4000, 1000, 1, SamplerKind::chayes_machta, 20};
    for (int n : {6, 8}) {
      record_mc(check_combination({pc, q, Boundary::wired}, n, n, 1, 3, {s, derive_seed(seed, task++), 2.0}), q, n);
      record_mc(check_combination({pc + 0.1, q, Boundary::wired}, n, n, 1, 3, {s, derive_seed(seed, task++), 2.0}),
                q, n);
      record_mc(check_gluing({pc + 0.15, q, Boundary::wired}, n, 2, 3, {s, derive_seed(seed, task++), 2.0}), q, n);
      const EventSpec ev = crossing_h(n, n);
      const Region r = margin_region(support(ev), 2.0);
      record_mc(check_hamming_mc(r, {pc, q, Boundary::wired}, ev, kDelta, s, derive_seed(seed, task++)), q, n);
    }
  }

  double worst_exact = std::numeric_limits<double>::infinity();
  for (const Region& r : catalog(12))
    for (const auto& ev : catalog_events(r))
      for (double q : kQ)
        for (double p : {0.2, 0.5})
          for (double delta : {0.1, 0.2})
            for (Boundary bc : kBc) {
              const auto res = check_hamming_exact(r, {p, q, bc}, ev, delta);
              worst_exact = std::min(worst_exact, res.slack());
              ++exact_checks;
            }
  double worst_translation = std::numeric_limits<double>::infinity();
  for (double q : kQ)
    for (double p : kP)
      for (Boundary bc : kBc) {
        const auto rep = translation_difference_check(build_region(2, 1), {p, q, bc}, 1, 1, 1);
        worst_translation = std::min(worst_translation, rep.worst_slack);
        exact_checks += rep.checks;
      }
  pass = pass && worst_exact >= -kExactTol && worst_translation >= -kExactTol;
  detail << fmt("mc_checks=%zu worst z=%.2f (%s); exact_checks=%zu hamming_min_slack=%.3e "
                "translation_min_slack=%.3e",
                mc_checks, worst_mc_z, worst_mc.c_str(), exact_checks, worst_exact, worst_translation);
  return {pass, detail.str()};
}

// 10. Log-linear decay of the two-point function below the self-dual point.
Outcome exponential_decay(std::uint64_t seed) {
  constexpr double kSigma = 3.0;
  constexpr double kMinR2 = 0.95;
  const std::vector<int> distances{4, 6, 8, 10, 12};
  bool pass = true;
  std::ostringstream detail;
  std::uint64_t task = 0;
  for (auto [q, p] : {std::pair{1.0, 0.25}, std::pair{2.0, 0.45}}) {
    McSettings mc;
    mc.seed = derive_seed(seed, task++);
    mc.margin = 2.0;
    mc.schedule = q == 1.0 ? Schedule{10 + 2'000'000, 10, 1, SamplerKind::heat_bath, 20}
                           : Schedule{1000 + 200'000, 1000, 1, SamplerKind::chayes_machta, 20};
    try {
      const DecayFit fit = fit_decay(q, p, distances, mc);
      int used = 0;
      for (const auto& pt : fit.points) used += pt.used;
      const bool ok = fit.slope < 0 && std::abs(fit.slope) > kSigma * fit.slope_se && fit.r_squared > kMinR2;
      pass = pass && ok;
      detail << fmt("q=%g p=%g slope=%.4f+-%.4f R2=%.4f points=%d; ", q, p, fit.slope, fit.slope_se, fit.r_squared,
                    used);
    } catch (const DecayFitError& e) {
      pass = false;
      detail << fmt("q=%g p=%g fit error: %s; ", q, p, e.what());
    }
  }
  return {pass, detail.str()};
}

// 11. The 0.25 -> 0.75 window of the crossing curve shrinks with n.
Outcome threshold_steepness(std::uint64_t seed) {
  constexpr double kMaxSe = 0.01;
  constexpr double kShrink = 0.8;
  std::vector<double> grid;
  for (int i = 0; i <= 24; ++i) grid.push_back(0.48 + 0.005 * i);
  double window[2] = {0, 0};
  double worst_se = 0.0;
  bool found = true;
  int idx = 0;
  for (int n : {8, 32}) {
    McSettings mc;
    mc.seed = derive_seed(seed, idx);
    mc.margin = 2.0;
    mc.schedule = {10 + 8000, 10, 1, SamplerKind::heat_bath, 20};
    const auto curve = threshold_curve(1.0, n, grid, mc);
    for (const auto& pt : curve.points) worst_se = std::max(worst_se, pt.estimate.standard_error);
    const auto lo = crossing_level(curve, 0.25), hi = crossing_level(curve, 0.75);
    if (lo && hi)
      window[idx] = *hi - *lo;
    else
      found = false;
    ++idx;
  }
  const bool pass = found && worst_se < kMaxSe && window[1] <= kShrink * window[0];
  return {pass, fmt("window(8)=%.4f window(32)=%.4f ratio=%.3f (need <= %.2f) max_se=%.4f", window[0], window[1],
                    window[0] > 0 ? window[1] / window[0] : 0.0, kShrink, worst_se)};
}

const std::vector<Criterion> kCriteria{
    {1, "oracle properties", 120, oracle_properties},
    {2, "sampler vs oracle", 600, sampler_vs_oracle},
    {3, "Menger identity", 10, menger_identity},
    {4, "finite-volume duality", 120, finite_volume_duality},
    {5, "complementary crossing", 60, complementary_crossing},
    {6, "self-dual crossing level", 900, selfdual_crossing},
    {7, "critical-point bracketing", 1800, critical_bracket},
    {8, "Russo formula", 120, russo_formula},
    {9, "inequality suite", 1200, inequality_suite},
    {10, "exponential decay", 900, exponential_decay},
    {11, "threshold steepness", 1800, threshold_steepness},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> selected;
  std::uint64_t seed = 20240601;
  app.add_option("--criterion", selected, "Criteria to run (default: all)")->check(CLI::Range(1, 11));
  app.add_option("--seed", seed, "Base seed");
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  for (const auto& c : kCriteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.body(seed);
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = elapsed < c.time_limit_s;
    const bool pass = out.pass && in_time;
    all_pass = all_pass && pass;
    std::printf("criterion %d (%s): %s  %s [%.1f s, limit %.0f s%s]\n", c.id, c.title, pass ? "PASS" : "FAIL",
                out.detail.c_str(), elapsed, c.time_limit_s, in_time ? "" : ", over time");
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
