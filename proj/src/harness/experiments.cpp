#include "rcm/harness/experiments.hpp"

#include <chrono>
#include <deque>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "rcm/analysis.hpp"
#include "rcm/duality.hpp"
#include "rcm/events.hpp"
#include "rcm/exact_oracle.hpp"
#include "rcm/parallel.hpp"
#include "rcm/rng.hpp"

namespace rcm::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Record factory for one experiment run. Rows live in a deque so references
// stay valid while more rows are added; they move to the result on destruction.
class Recorder {
 public:
  Recorder(const ExperimentConfig& cfg, RunResult& out) : cfg_(cfg), out_(out) {}
  Recorder(const Recorder&) = delete;
  Recorder& operator=(const Recorder&) = delete;
  ~Recorder() {
    for (auto& r : rows_) out_.records.push_back(std::move(r));
  }

  ResultRecord& exact(const std::string& metric, double value) {
    ResultRecord& r = base("exact", metric, value);
    r.generator = "none";
    return r;
  }

  ResultRecord& derived(const std::string& metric, double value, bool from_mc) {
    ResultRecord& r = base("derived", metric, value);
    r.generator = from_mc ? std::string(Xoshiro256::name) : "none";
    return r;
  }

  ResultRecord& mc(const std::string& metric, const EstimateWithError& est, const Schedule& s) {
    ResultRecord& r = base("mc", metric, est.value);
    r.generator = std::string(Xoshiro256::name);
    r.sweeps = s.sweeps;
    r.burn_in = s.burn_in;
    r.thin = s.thin;
    r.stderr_ = est.standard_error;
    r.n_samples = est.n_samples;
    return r;
  }

 private:
  ResultRecord& base(const char* kind, const std::string& metric, double value) {
    if (metric.find(',') != std::string::npos) throw std::logic_error("metric names must not contain commas");
    ResultRecord r;
    r.experiment = std::string(to_string(*cfg_.experiment));
    r.kind = kind;
    r.seed = *cfg_.seed;
    r.metric = metric;
    r.value = value;
    rows_.push_back(std::move(r));
    return rows_.back();
  }

  const ExperimentConfig& cfg_;
  RunResult& out_;
  std::deque<ResultRecord> rows_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

std::vector<Boundary> boundaries(const ExperimentConfig& cfg) {
  return cfg.bc.empty() ? std::vector<Boundary>{Boundary::wired} : cfg.bc;
}

void set_model(ResultRecord& r, double p, double q, Boundary bc) {
  r.p = p;
  r.q = q;
  r.bc = bc;
}

void set_region(ResultRecord& r, const ExperimentConfig& cfg) {
  r.a = cfg.a;
  r.b = cfg.b;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void run_exact_check(const ExperimentConfig& cfg, RunResult& out) {
  const Region r = cfg.geometry();
  require(!cfg.p.empty(), "p: exact-check needs at least one value");
  require(!cfg.q.empty(), "q: exact-check needs at least one value");
  std::optional<EventSpec> ev;
  if (cfg.event) {
    try {
      ev = parse_event(*cfg.event);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("event: ") + e.what());
    }
  }
  Recorder rec(cfg, out);
  for (double q : cfg.q) {
    for (double p : cfg.p) {
      for (Boundary bc : boundaries(cfg)) {
        const auto start = Clock::now();
        const ExactDistribution d = enumerate_measure(r, {p, q, bc});
        std::vector<ResultRecord*> rows;
        if (r.edge_count() > 0) rows.push_back(&rec.exact("P(open)", edge_marginal(d, 0)));
        rows.push_back(&rec.exact("log_Z", d.log_partition()));
        if (ev) {
          const Event pred = as_predicate(*ev, r);
          rows.push_back(&rec.exact("P(event)", event_probability(d, pred)));
          rows.push_back(&rec.exact("E[H]", hamming_expectation(d, pred)));
          constexpr double h = 1e-4;
          if (p - h > 0.0 && p + h < 1.0) {
            const auto russo = russo_check(r, {p, q, bc}, pred, h);
            rows.push_back(&rec.exact("russo_lhs", russo.lhs));
            rows.push_back(&rec.exact("russo_rhs", russo.rhs));
          }
        }
        const double wall = seconds_since(start);
        for (auto* row : rows) {
          set_model(*row, p, q, bc);
          set_region(*row, cfg);
          row->wallclock_s = wall;
        }
      }
    }
  }
}

void run_duality_check(const ExperimentConfig& cfg, RunResult& out) {
  const Region r = cfg.geometry();
  require(!cfg.p.empty(), "p: duality-check needs at least one value");
  require(!cfg.q.empty(), "q: duality-check needs at least one value");
  const DualGraph g = [&] {
    try {
      return dual_graph(r);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("geometry: ") + e.what());
    }
  }();
  Recorder rec(cfg, out);
  constexpr double kTolerance = 1e-10;
  for (double q : cfg.q) {
    for (double p : cfg.p) {
      require(p > 0.0 && p < 1.0, "p: duality-check needs 0 < p < 1");
      const auto start = Clock::now();
      const ExactDistribution primal = enumerate_measure(r, {p, q, Boundary::wired});
      const double p_star = dual_parameter(p, q);
      const ExactDistribution dual = enumerate_measure(g.faces, {p_star, q, Boundary::free});
      const auto law = pushforward(
          primal, [&](const Configuration& c) { return dual_configuration(c, g).to_bits(); }, dual.size());
      const double tv = tv_distance(law, dual.probabilities());
      const double wall = seconds_since(start);
      for (auto* row : {&rec.exact("p_star", p_star), &rec.exact("tv_dual", tv)}) {
        set_model(*row, p, q, Boundary::wired);
        set_region(*row, cfg);
        row->wallclock_s = wall;
      }
      if (!(tv < kTolerance))
        out.failures.push_back("duality: TV " + fmt(tv) + " at p=" + fmt(p) + " q=" + fmt(q));
    }
  }
}

void run_selfdual_crossing(const ExperimentConfig& cfg, RunResult& out) {
  require(!cfg.n.empty(), "n: selfdual-crossing needs at least one value");
  require(!cfg.q.empty(), "q: selfdual-crossing needs at least one value");
  Recorder rec(cfg, out);
  std::uint64_t task = 0;
  for (double q : cfg.q) {
    const std::vector<double> ps = cfg.p.empty() ? std::vector<double>{self_dual_point(q)} : cfg.p;
    for (int n : cfg.n) {
      const EventSpec e = strip_crossing(n);
      const Region r = margin_region(support(e), cfg.margin);
      const Schedule s = cfg.schedule_for(r);
      for (double p : ps) {
        for (Boundary bc : boundaries(cfg)) {
          const auto start = Clock::now();
          const auto est = estimate_event(r, {p, q, bc}, as_predicate(e, r), s, derive_seed(*cfg.seed, task++));
          auto& row = rec.mc("P(E)", est, s);
          set_model(row, p, q, bc);
          row.n = n;
          row.margin = cfg.margin;
          row.wallclock_s = seconds_since(start);
          if (std::abs(p - self_dual_point(q)) < 1e-12) {
            // q = 1: P(E) = 1/2 exactly. q > 1, wired: at least 1/2 up to noise.
            const bool ok = q == 1.0 ? std::abs(est.value - 0.5) <= 3.0 * est.standard_error
                                     : bc == Boundary::free || est.value >= 0.5 - 3.0 * est.standard_error;
            if (!ok)
              out.failures.push_back("selfdual-crossing: P(E) = " + fmt(est.value) + " +- " + fmt(est.standard_error) +
                                     " at q=" + fmt(q) + " n=" + std::to_string(n));
          }
        }
      }
    }
  }
}

void run_threshold(const ExperimentConfig& cfg, RunResult& out) {
  require(!cfg.p.empty(), "p: threshold needs a nonempty p grid");
  require(!cfg.q.empty(), "q: threshold needs at least one value");
  require(!cfg.n.empty(), "n: threshold needs at least one value");
  Recorder rec(cfg, out);
  std::uint64_t task = 0;
  for (double q : cfg.q) {
    for (int n : cfg.n) {
      for (Boundary bc : boundaries(cfg)) {
        const Region r = margin_region(support(crossing_h(2 * n, n)), cfg.margin);
        McSettings mc{cfg.schedule_for(r), derive_seed(*cfg.seed, task++), cfg.margin};
        const auto start = Clock::now();
        ThresholdCurve curve;
        try {
          curve = threshold_curve(q, n, cfg.p, mc, bc);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string("p: ") + e.what());
        }
        const double wall = seconds_since(start);
        auto tag = [&](ResultRecord& row) {
          row.q = q;
          row.bc = bc;
          row.n = n;
          row.a = 2 * n;
          row.b = n;
          row.margin = cfg.margin;
          row.wallclock_s = wall;
        };
        for (const auto& pt : curve.points) {
          auto& row = rec.mc("P(C_h)", pt.estimate, mc.schedule);
          tag(row);
          row.p = pt.p;
        }
        const auto lo = crossing_level(curve, 0.25), hi = crossing_level(curve, 0.75);
        if (lo) tag(rec.derived("p_at_0.25", *lo, true));
        if (hi) tag(rec.derived("p_at_0.75", *hi, true));
        if (lo && hi) tag(rec.derived("window", *hi - *lo, true));
        const bool monotone = is_monotone(curve);
        tag(rec.derived("monotone", monotone ? 1.0 : 0.0, true));
        if (!monotone)
          out.failures.push_back("threshold: curve decreases beyond 3 SE at q=" + fmt(q) + " n=" + std::to_string(n));
      }
    }
  }
}

void run_decay(const ExperimentConfig& cfg, RunResult& out) {
  require(!cfg.p.empty(), "p: decay needs at least one value");
  require(!cfg.q.empty(), "q: decay needs at least one value");
  require(cfg.distances.size() >= 4, "distances: decay needs at least 4 distances");
  Recorder rec(cfg, out);
  int d_max = 0;
  for (int d : cfg.distances) {
    require(d >= 1, "distances: values must be >= 1");
    d_max = std::max(d_max, d);
  }
  const Region r = margin_region(Region(-d_max, d_max, -d_max, d_max), cfg.margin);
  const Schedule s = cfg.schedule_for(r);
  std::uint64_t task = 0;
  for (double q : cfg.q) {
    for (double p : cfg.p) {
      const auto start = Clock::now();
      McSettings mc{s, derive_seed(*cfg.seed, task++), cfg.margin};
      DecayFit fit;
      fit.p = p;
      fit.q = q;
      std::string error;
      try {
        fit = fit_decay(q, p, cfg.distances, mc);
      } catch (const DecayFitError& e) {
        error = e.what();
      }
      const double wall = seconds_since(start);
      auto tag = [&](ResultRecord& row) {
        set_model(row, p, q, Boundary::free);
        row.margin = cfg.margin;
        row.wallclock_s = wall;
      };
      if (!error.empty()) {
        out.failures.push_back("decay at p=" + fmt(p) + " q=" + fmt(q) + ": " + error);
        continue;
      }
      for (const auto& pt : fit.points) {
        auto& row = rec.mc("P(0<->x)", pt.estimate, s);
        tag(row);
        row.n = pt.distance;
        if (!pt.used) {
          auto& flag = rec.derived("excluded_distance", pt.distance, true);
          tag(flag);
          flag.n = pt.distance;
        }
      }
      auto& slope = rec.derived("slope", fit.slope, true);
      tag(slope);
      slope.stderr_ = fit.slope_se;
      tag(rec.derived("intercept", fit.intercept, true));
      tag(rec.derived("r_squared", fit.r_squared, true));
      if (!(fit.slope < 0.0 && std::abs(fit.slope) > 3.0 * fit.slope_se))
        out.failures.push_back("decay: slope " + fmt(fit.slope) + " +- " + fmt(fit.slope_se) +
                               " is not significantly negative at p=" + fmt(p) + " q=" + fmt(q));
    }
  }
}

void run_menger_check(const ExperimentConfig& cfg, RunResult& out) {
  require(cfg.a && cfg.b && !cfg.region, "a, b: menger-check needs a and b");
  require(*cfg.a >= 1 && *cfg.b >= 0, "a: menger-check needs a >= 1");
  const Region r = cfg.geometry();
  if (r.edge_count() > kEnumerationBound)
    throw EnumerationBoundError("menger-check: " + std::to_string(r.edge_count()) +
                                " edges exceed the enumeration bound of " + std::to_string(kEnumerationBound));
  Recorder rec(cfg, out);
  const auto start = Clock::now();
  const EventDetector detector(crossing_h(*cfg.a, *cfg.b), r);
  const std::size_t m = r.edge_count();
  const std::uint64_t count = std::uint64_t{1} << m;
  std::vector<std::uint8_t> indicator(count);
  Configuration c(m);
  for (std::uint64_t i = 0; i < count; ++i) {
    c.assign_bits(i);
    indicator[i] = detector(c);
  }
  // Brute force: the fewest closures, by dynamic programming over subsets.
  const auto brute = hamming_table(indicator, m);
  std::uint64_t mismatches = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    c.assign_bits(i);
    if (detector.hamming(c) != static_cast<int>(brute[i])) ++mismatches;
  }
  const double wall = seconds_since(start);
  for (auto* row : {&rec.exact("configurations", static_cast<double>(count)),
                    &rec.exact("mismatches", static_cast<double>(mismatches))}) {
    set_region(*row, cfg);
    row->wallclock_s = wall;
  }
  if (mismatches) out.failures.push_back("menger: " + std::to_string(mismatches) + " configurations disagree");
}

// Influences of A_k = C_h(k, b) for k in [k_min, k_max] and the per-k
// diagnostic f; the row's `a` column holds k.
void run_sharp_threshold(const ExperimentConfig& cfg, const Region& r, RunResult& out) {
  require(cfg.k_min && cfg.k_max, "k_min, k_max: both are needed for the per-k diagnostic");
  require(cfg.b.has_value(), "b: the per-k diagnostic needs the box height b");
  require(*cfg.k_min >= 1 && *cfg.k_max >= *cfg.k_min, "k_min, k_max: need 1 <= k_min <= k_max");
  const bool exact = cfg.mode == "exact";
  Recorder rec(cfg, out);
  std::uint64_t task = 0;
  for (double q : cfg.q) {
    for (double p : cfg.p) {
      for (Boundary bc : boundaries(cfg)) {
        const auto start = Clock::now();
        const Schedule s = cfg.schedule_for(r);
        SharpThresholdReport report;
        try {
          report = sharp_threshold_diagnostic(r, {p, q, bc}, *cfg.b, *cfg.k_min, *cfg.k_max, cfg.c,
                                              exact ? DiagnosticMode::exact : DiagnosticMode::mc, s,
                                              derive_seed(*cfg.seed, task++));
        } catch (const EventSupportError& e) {
          throw ConfigError(std::string("k_max: ") + e.what());
        }
        std::vector<std::pair<ResultRecord*, std::optional<int>>> rows;
        for (const auto& k : report.per_k) {
          for (std::size_t e = 0; e < k.influences.size(); ++e)
            rows.emplace_back(&rec.derived("J(e=" + std::to_string(e) + ")", k.influences[e], !exact), k.k);
          rows.emplace_back(&rec.derived("sum_J", k.sum, !exact), k.k);
          rows.emplace_back(&rec.derived("max_J", k.max, !exact), k.k);
          rows.emplace_back(&rec.derived("f", k.f, !exact), k.k);
        }
        rows.emplace_back(&rec.derived("total_f", report.total_f, !exact), std::nullopt);
        const double wall = seconds_since(start);
        for (auto& [row, k] : rows) {
          set_model(*row, p, q, bc);
          row->a = k;
          row->b = cfg.b;
          row->wallclock_s = wall;
          if (!exact) {
            row->sweeps = s.sweeps;
            row->burn_in = s.burn_in;
            row->thin = s.thin;
          }
        }
      }
    }
  }
}

void run_influence_profile(const ExperimentConfig& cfg, RunResult& out) {
  const Region r = cfg.geometry();
  require(!cfg.p.empty(), "p: influence-profile needs at least one value");
  require(!cfg.q.empty(), "q: influence-profile needs at least one value");
  if (cfg.k_min || cfg.k_max) {
    require(!cfg.event, "event: not used together with k_min and k_max");
    run_sharp_threshold(cfg, r, out);
    return;
  }
  EventSpec ev;
  try {
    if (cfg.event)
      ev = parse_event(*cfg.event);
    else if (cfg.a && cfg.b)
      ev = crossing_h(*cfg.a, *cfg.b);
    else
      throw ConfigError("event: required when the region is not given by a and b");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("event: ") + e.what());
  }
  Event pred;
  try {
    pred = as_predicate(ev, r);
  } catch (const EventSupportError& e) {
    throw ConfigError(std::string("event: ") + e.what());
  }
  const bool exact = cfg.mode == "exact";
  Recorder rec(cfg, out);
  std::uint64_t task = 0;
  for (double q : cfg.q) {
    for (double p : cfg.p) {
      for (Boundary bc : boundaries(cfg)) {
        const auto start = Clock::now();
        std::vector<double> j;
        std::vector<ResultRecord*> rows;
        if (exact) {
          const ExactDistribution d = enumerate_measure(r, {p, q, bc});
          j = influences_exact(d, event_indicator(d, pred));
          for (std::size_t e = 0; e < j.size(); ++e) rows.push_back(&rec.exact("J(e=" + std::to_string(e) + ")", j[e]));
        } else {
          const Schedule s = cfg.schedule_for(r);
          const auto est = influence_profile(r, {p, q, bc}, pred, s, derive_seed(*cfg.seed, task++));
          for (std::size_t e = 0; e < est.size(); ++e) {
            j.push_back(est[e].value);
            rows.push_back(&rec.mc("J(e=" + std::to_string(e) + ")", est[e], s));
          }
        }
        double sum = 0.0, max = 0.0;
        for (double v : j) {
          sum += v;
          max = std::max(max, v);
        }
        const double f = max > 0.0 ? std::max(std::log(cfg.c / max), sum) : std::numeric_limits<double>::infinity();
        rows.push_back(&rec.derived("sum_J", sum, !exact));
        rows.push_back(&rec.derived("max_J", max, !exact));
        rows.push_back(&rec.derived("f", f, !exact));
        const double wall = seconds_since(start);
        for (auto* row : rows) {
          set_model(*row, p, q, bc);
          set_region(*row, cfg);
          row->wallclock_s = wall;
        }
      }
    }
  }
}

void run_inequality_suite(const ExperimentConfig& cfg, RunResult& out) {
  require(!cfg.q.empty(), "q: inequality-suite needs at least one value");
  require(!cfg.n.empty(), "n: inequality-suite needs at least one value");
  Recorder rec(cfg, out);
  std::uint64_t task = 0;
  auto report = [&](const InequalityResult& res, double p, double q, int n, const Schedule* s) {
    const auto start = Clock::now();
    auto tag = [&](ResultRecord& row) {
      set_model(row, p, q, Boundary::wired);
      row.n = n;
      row.margin = cfg.margin;
      row.wallclock_s = seconds_since(start);
      if (s) {
        row.sweeps = s->sweeps;
        row.burn_in = s->burn_in;
        row.thin = s->thin;
      }
    };
    if (res.exact) {
      tag(rec.exact(res.name + "_lhs", res.lhs));
      tag(rec.exact(res.name + "_rhs", res.rhs));
    } else {
      EstimateWithError l, r;
      l.value = res.lhs;
      l.standard_error = res.lhs_se;
      l.n_samples = s->sample_count();
      r.value = res.rhs;
      r.standard_error = res.rhs_se;
      r.n_samples = s->sample_count();
      tag(rec.mc(res.name + "_lhs", l, *s));
      tag(rec.mc(res.name + "_rhs", r, *s));
    }
    tag(rec.derived(res.name + "_holds", res.holds() ? 1.0 : 0.0, !res.exact));
    if (!res.holds())
      out.failures.push_back(res.name + ": lhs " + fmt(res.lhs) + " < rhs " + fmt(res.rhs) + " at q=" + fmt(q) +
                             " n=" + std::to_string(n));
  };

  for (double q : cfg.q) {
    const double pc = self_dual_point(q);
    for (int n : cfg.n) {
      const std::vector<double> ps = cfg.p.empty() ? std::vector<double>{} : cfg.p;
      const double p_comb = ps.empty() ? std::min(pc + 0.1, 0.99) : ps.front();
      const double p_glue = ps.empty() ? std::min(pc + 0.15, 0.99) : ps.front();
      const double p_ham = ps.empty() ? pc : ps.front();

      const Region comb_region = margin_region(support(crossing_h(3 * n, n)), cfg.margin);
      const Schedule s = cfg.schedule_for(comb_region);
      report(check_combination({p_comb, q, Boundary::wired}, n, n, 1, 3,
                               McSettings{s, derive_seed(*cfg.seed, task++), cfg.margin}),
             p_comb, q, n, &s);
      report(check_gluing({p_glue, q, Boundary::wired}, n, 2, 3,
                          McSettings{s, derive_seed(*cfg.seed, task++), cfg.margin}),
             p_glue, q, n, &s);
      if (p_ham + cfg.delta <= 1.0) {
        const EventSpec ev = crossing_h(n, n);
        const Region r = margin_region(support(ev), cfg.margin);
        const Schedule sh = cfg.schedule_for(r);
        report(check_hamming_mc(r, {p_ham, q, Boundary::wired}, ev, cfg.delta, sh, derive_seed(*cfg.seed, task++)),
               p_ham, q, n, &sh);
      }
    }
    // Exact companions on the enumerable boxes.
    const Region small = build_region(1, 1);
    for (Boundary bc : {Boundary::free, Boundary::wired}) {
      const auto res = check_hamming_exact(small, {0.5, q, bc}, as_predicate(crossing_h(1, 1), small), cfg.delta);
      report(res, 0.5, q, 1, nullptr);
    }
    const auto tdc = translation_difference_check(build_region(2, 1), {pc, q, Boundary::wired}, 1, 1, 1);
    InequalityResult aaab;
    aaab.name = "translation_difference";
    aaab.exact = true;
    aaab.lhs = tdc.worst_slack;
    aaab.rhs = 0.0;
    report(aaab, pc, q, 1, nullptr);
  }
}

void run_estimate_pc(const ExperimentConfig& cfg, RunResult& out) {
  require(!cfg.q.empty(), "q: estimate-pc needs at least one value");
  require(!cfg.n.empty(), "n: estimate-pc needs at least one value");
  require(cfg.tolerance >= 0.005, "tolerance: must be >= 0.005");
  Recorder rec(cfg, out);
  std::uint64_t task = 0;
  for (double q : cfg.q) {
    for (int n : cfg.n) {
      require(n >= 8, "n: estimate-pc needs n >= 8");
      const Region r = margin_region(support(crossing_h(2 * n, n)), cfg.margin);
      McSettings mc{cfg.schedule_for(r), derive_seed(*cfg.seed, task++), cfg.margin};
      const auto start = Clock::now();
      auto tag = [&](ResultRecord& row) {
        row.q = q;
        row.bc = Boundary::wired;
        row.n = n;
        row.a = 2 * n;
        row.b = n;
        row.margin = cfg.margin;
        row.wallclock_s = seconds_since(start);
      };
      try {
        const PcBracket br = estimate_pc(q, n, cfg.tolerance, mc);
        for (const auto& ev : br.evaluations) {
          auto& row = rec.mc("P(C_h)", ev.estimate, mc.schedule);
          tag(row);
          row.p = ev.p;
        }
        tag(rec.derived("pc_lo", br.lo, true));
        tag(rec.derived("pc_hi", br.hi, true));
        tag(rec.derived("pc_theory", self_dual_point(q), false));
        const double pc = self_dual_point(q);
        if (!(br.lo <= pc && pc <= br.hi))
          out.failures.push_back("estimate-pc: [" + fmt(br.lo) + ", " + fmt(br.hi) + "] misses " + fmt(pc) +
                                 " at q=" + fmt(q) + " n=" + std::to_string(n));
      } catch (const BracketError& e) {
        out.failures.push_back(e.what());
      }
    }
  }
}

}  // namespace

RunResult run(const ExperimentConfig& cfg) {
  if (!cfg.experiment) throw ConfigError("experiment: required");
  cfg.validate();
  RunResult out;
  switch (*cfg.experiment) {
    case ExperimentKind::exact_check: run_exact_check(cfg, out); break;
    case ExperimentKind::duality_check: run_duality_check(cfg, out); break;
    case ExperimentKind::selfdual_crossing: run_selfdual_crossing(cfg, out); break;
    case ExperimentKind::threshold: run_threshold(cfg, out); break;
    case ExperimentKind::decay: run_decay(cfg, out); break;
    case ExperimentKind::menger_check: run_menger_check(cfg, out); break;
    case ExperimentKind::influence_profile: run_influence_profile(cfg, out); break;
    case ExperimentKind::inequality_suite: run_inequality_suite(cfg, out); break;
    case ExperimentKind::estimate_pc: run_estimate_pc(cfg, out); break;
  }
  sort_records(out.records);
  return out;
}

int execute(ExperimentKind kind, const std::string& config_path, const RunOptions& options, std::ostream& log) {
  try {
    ExperimentConfig cfg = load_config(config_path);
    if (cfg.experiment && *cfg.experiment != kind)
      throw ConfigError("experiment: config names '" + std::string(to_string(*cfg.experiment)) +
                        "' but the command is '" + std::string(to_string(kind)) + "'");
    cfg.experiment = kind;
    if (options.seed) cfg.seed = options.seed;
    if (options.threads) set_thread_count(*options.threads);

    const RunResult result = run(cfg);
    namespace fs = std::filesystem;
    fs::create_directories(options.out_dir);
    const fs::path path = fs::path(options.out_dir) / (cfg.output.empty() ? std::string(to_string(kind)) + ".csv" : cfg.output);
    std::ofstream os(path);
    if (!os) {
      log << "error: cannot write " << path.string() << '\n';
      return kExitConfigError;
    }
    write_csv(os, result.records);
    log << "wrote " << result.records.size() << " records to " << path.string() << '\n';
    for (const auto& f : result.failures) log << "check failed: " << f << '\n';
    return result.status();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const EnumerationBoundError& e) {
    log << "bound exceeded: " << e.what() << '\n';
    return kExitBoundExceeded;
  } catch (const std::length_error& e) {
    log << "bound exceeded: " << e.what() << '\n';
    return kExitBoundExceeded;
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace rcm::harness
