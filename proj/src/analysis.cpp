#include "rcm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcm/exact_oracle.hpp"
#include "rcm/parallel.hpp"

namespace rcm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Batch sums for Cov(1_A, omega_e) over a chosen list of edges.
class CovarianceAccumulator {
 public:
  CovarianceAccumulator(std::vector<std::size_t> edges, const Schedule& s)
      : edges_(std::move(edges)),
        batches_(s.batches),
        batch_size_(s.sample_count() / s.batches),
        a_(static_cast<std::size_t>(s.batches) + 1, 0.0),
        x_((static_cast<std::size_t>(s.batches) + 1) * edges_.size(), 0.0),
        ax_((static_cast<std::size_t>(s.batches) + 1) * edges_.size(), 0.0) {}

  void add(bool a, const Configuration& c) {
    // Samples past the last full batch go to the spare slot at index `batches_`.
    const auto b = static_cast<std::size_t>(std::min<std::int64_t>(count_ / batch_size_, batches_));
    ++count_;
    double* x = &x_[b * edges_.size()];
    double* ax = &ax_[b * edges_.size()];
    if (a) a_[b] += 1.0;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (!c.open(edges_[i])) continue;
      x[i] += 1.0;
      if (a) ax[i] += 1.0;
    }
  }

  std::size_t size() const noexcept { return edges_.size(); }

  EstimateWithError finish(std::size_t i, const Schedule& s, std::uint64_t seed) const {
    const std::size_t m = edges_.size();
    double a = 0.0, x = 0.0, ax = 0.0;
    for (int b = 0; b <= batches_; ++b) {
      a += a_[b];
      x += x_[b * m + i];
      ax += ax_[b * m + i];
    }
    const double n = static_cast<double>(count_);
    EstimateWithError out;
    out.n_samples = count_;
    out.seed = seed;
    out.burn_in = s.burn_in;
    out.thin = s.thin;
    const double ma = a / n, mx = x / n;
    out.value = ax / n - ma * mx;

    // Sample variance of (A - mean A)(X - mean X) from the 2x2 table of counts.
    const double counts[4] = {n - a - x + ax, x - ax, a - ax, ax};  // (A,X) = 00, 01, 10, 11
    double var = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double d = ((k >> 1) - ma) * ((k & 1) - mx) - out.value;
      var += counts[k] * d * d;
    }
    var = n > 1.0 ? var / (n - 1.0) : 0.0;

    const double bs = static_cast<double>(batch_size_);
    std::vector<double> jb(static_cast<std::size_t>(batches_));
    double mean = 0.0;
    for (int b = 0; b < batches_; ++b) {
      jb[b] = ax_[b * m + i] / bs - (a_[b] / bs) * (x_[b * m + i] / bs);
      mean += jb[b];
    }
    mean /= batches_;
    double bvar = 0.0;
    for (double j : jb) bvar += (j - mean) * (j - mean);
    bvar = batches_ > 1 ? bvar / (batches_ - 1) : 0.0;
    out.standard_error = std::max(std::sqrt(bvar / batches_), std::sqrt(var / n));
    out.n_effective =
        out.standard_error > 0.0 ? std::min(n, var / (out.standard_error * out.standard_error)) : n;
    return out;
  }

 private:
  std::vector<std::size_t> edges_;
  int batches_;
  std::int64_t batch_size_;
  std::int64_t count_ = 0;
  std::vector<double> a_, x_, ax_;
};

std::vector<std::size_t> all_edges(const Region& r) {
  std::vector<std::size_t> out(r.edge_count());
  for (std::size_t e = 0; e < out.size(); ++e) out[e] = e;
  return out;
}

double powered_se(double value, double se, double power) {
  // Delta method on the log scale: SE(P^K) = P^K * K * SE(P) / P.
  if (value <= 0.0) return 0.0;
  return std::pow(value, power) * power * se / value;
}

Region combined_margin_region(const std::vector<EventSpec>& events, double margin) {
  Region box = support(events.front());
  for (const auto& ev : events) box = bounding_region(box, support(ev));
  return margin_region(box, margin);
}

}  // namespace

Region margin_region(const Region& support, double margin) {
  if (!(margin >= 1.0)) throw std::invalid_argument("margin must be >= 1");
  const int dx = static_cast<int>(std::ceil((margin - 1.0) * (support.x_max() - support.x_min()) / 2.0 - 1e-9));
  const int dy = static_cast<int>(std::ceil((margin - 1.0) * (support.y_max() - support.y_min()) / 2.0 - 1e-9));
  return {support.x_min() - dx, support.x_max() + dx, support.y_min() - dy, support.y_max() + dy};
}

EstimateWithError influence_mc(const Region& r, const ModelParams& params, const Event& ev, std::size_t e,
                               const Schedule& schedule, std::uint64_t seed) {
  if (e >= r.edge_count()) throw std::out_of_range("influence_mc: edge index out of range");
  schedule.validate();
  CovarianceAccumulator acc({e}, schedule);
  run_chain(r, params, schedule, seed, [&](const Configuration& c) { acc.add(ev(c), c); });
  return acc.finish(0, schedule, seed);
}

std::vector<EstimateWithError> influence_profile(const Region& r, const ModelParams& params, const Event& ev,
                                                 const Schedule& schedule, std::uint64_t seed) {
  schedule.validate();
  CovarianceAccumulator acc(all_edges(r), schedule);
  run_chain(r, params, schedule, seed, [&](const Configuration& c) { acc.add(ev(c), c); });
  std::vector<EstimateWithError> out;
  out.reserve(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out.push_back(acc.finish(i, schedule, seed));
  return out;
}

double InequalityResult::combined_se() const { return std::sqrt(lhs_se * lhs_se + rhs_se * rhs_se); }

bool InequalityResult::holds(double nsigma, double exact_tol) const {
  if (exact) return slack() >= -exact_tol;
  return slack() >= -nsigma * combined_se();
}

InequalityResult check_combination(const ModelParams& params, int n, int m, int k, int l, const McSettings& mc) {
  if (n < 1 || m < 1 || k < 1 || l < 1) throw std::invalid_argument("check_combination: n, m, k, l must be >= 1");
  if (static_cast<long long>(m) * k < n)
    throw std::invalid_argument("check_combination: the hypothesis m >= n/k does not hold");
  const std::vector<EventSpec> events{crossing_h(l * n, n), crossing_h(n + m, n)};
  const Region r = combined_margin_region(events, mc.margin);
  const std::vector<Event> preds{as_predicate(events[0], r), as_predicate(events[1], r)};
  const auto est = estimate_events(r, params, preds, mc.schedule, mc.seed);
  const double power = 2.0 * k * l;
  InequalityResult out;
  out.name = "combination";
  out.lhs = est[0].value;
  out.lhs_se = est[0].standard_error;
  out.rhs = std::pow(est[1].value, power);
  out.rhs_se = powered_se(est[1].value, est[1].standard_error, power);
  return out;
}

InequalityResult check_gluing(const ModelParams& params, int n, int u, int l, const McSettings& mc) {
  if (l < 2 || u < 1 || n < 1) throw std::invalid_argument("check_gluing: need l >= 2, u >= 1 and n >= 1");
  const std::vector<EventSpec> events{crossing_h(l * n, n), crossing_h(2 * n, n)};
  const Region r = combined_margin_region(events, mc.margin);
  const EventDetector long_box(events[0], r), short_box(events[1], r);
  mc.schedule.validate();
  BatchMeans lhs(mc.schedule.sample_count(), mc.schedule.batches);
  BatchMeans rhs(mc.schedule.sample_count(), mc.schedule.batches);
  run_chain(r, params, mc.schedule, mc.seed, [&](const Configuration& c) {
    lhs.add(long_box.hamming(c) >= u ? 1.0 : 0.0);
    rhs.add(short_box.hamming(c) >= u ? 1.0 : 0.0);
  });
  const auto el = lhs.finish(mc.seed, mc.schedule.burn_in, mc.schedule.thin);
  const auto er = rhs.finish(mc.seed, mc.schedule.burn_in, mc.schedule.thin);
  const double power = 2.0 * (l - 2) + 1.0;
  InequalityResult out;
  out.name = "gluing";
  out.lhs = el.value;
  out.lhs_se = el.standard_error;
  out.rhs = std::pow(er.value, power);
  out.rhs_se = powered_se(er.value, er.standard_error, power);
  return out;
}

namespace {
void check_delta(const ModelParams& params, double delta) {
  params.validate();
  if (!(delta >= 0.0)) throw std::invalid_argument("hamming check: delta must be >= 0");
  if (params.p + delta > 1.0) throw std::invalid_argument("hamming check: p + delta exceeds 1");
}

double hamming_rhs(double delta, double expected_h) {
  if (delta == 0.0) return 0.0;
  if (std::isinf(expected_h)) return 1.0;
  return 1.0 - std::exp(-4.0 * delta * expected_h);
}
}  // namespace

InequalityResult check_hamming_exact(const Region& r, const ModelParams& params, const Event& ev, double delta) {
  check_delta(params, delta);
  const ExactDistribution d = enumerate_measure(r, params);
  const auto indicator = event_indicator(d, ev);
  const ExactDistribution shifted = reweight(d, params.p + delta, params.q);
  InequalityResult out;
  out.name = "hamming";
  out.exact = true;
  out.lhs = event_probability(shifted, indicator);
  out.rhs = hamming_rhs(delta, hamming_expectation(d, ev));
  return out;
}

InequalityResult check_hamming_mc(const Region& r, const ModelParams& params, const EventSpec& ev, double delta,
                                  const Schedule& schedule, std::uint64_t seed) {
  check_delta(params, delta);
  schedule.validate();
  const EventDetector detector(ev, r);
  const auto lhs = estimate_event(r, params.with_p(params.p + delta), [&](const Configuration& c) { return detector(c); },
                                  schedule, derive_seed(seed, 0));
  BatchMeans h(schedule.sample_count(), schedule.batches);
  bool unbounded = false;
  run_chain(r, params, schedule, derive_seed(seed, 1), [&](const Configuration& c) {
    const int d = detector.hamming(c);
    if (d == kNoComplement) unbounded = true;
    h.add(unbounded ? 0.0 : static_cast<double>(d));
  });
  const auto eh = h.finish(seed, schedule.burn_in, schedule.thin);
  InequalityResult out;
  out.name = "hamming";
  out.lhs = lhs.value;
  out.lhs_se = lhs.standard_error;
  out.rhs = hamming_rhs(delta, unbounded ? kInf : eh.value);
  // d/dE [1 - exp(-4 delta E)] = 4 delta exp(-4 delta E)
  out.rhs_se = unbounded ? 0.0 : 4.0 * delta * std::exp(-4.0 * delta * eh.value) * eh.standard_error;
  return out;
}

TranslationDifferenceReport translation_difference_check(const Region& g, const ModelParams& params, int b,
                                                         int k_lo, int k_hi) {
  if (k_lo < 1 || k_hi < k_lo) throw std::invalid_argument("translation_difference_check: need 1 <= k_lo <= k_hi");
  const ExactDistribution d = enumerate_measure(g, params);
  auto probability = [&](int k) { return event_probability(d, as_predicate(crossing_h(k, b), g)); };
  const auto shift = SymmetryTransform::translation(1, 0);
  TranslationDifferenceReport report;
  report.worst_slack = kInf;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double bound = probability(k - 1) - probability(k + 1);
    const auto j = influences_exact(d, event_indicator(d, as_predicate(crossing_h(k, b), g)));
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const auto te = g.find_edge(shift.apply(g.edge_at(e)));
      if (!te) continue;
      const double slack = bound - std::abs(j[e] - j[*te]);
      ++report.checks;
      if (slack < report.worst_slack) {
        report.worst_slack = slack;
        report.worst_k = k;
        report.worst_edge = e;
      }
    }
  }
  return report;
}

ThresholdCurve threshold_curve(double q, int n, std::span<const double> p_grid, const McSettings& mc, Boundary bc) {
  if (n < 1) throw std::invalid_argument("threshold_curve: n must be >= 1");
  if (p_grid.empty()) throw std::invalid_argument("threshold_curve: empty p grid");
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] > 0.0 && p_grid[i] < 1.0)) throw std::invalid_argument("threshold_curve: p values must lie in (0,1)");
    if (i > 0 && !(p_grid[i] > p_grid[i - 1]))
      throw std::invalid_argument("threshold_curve: p grid must be strictly increasing");
  }
  mc.schedule.validate();
  ThresholdCurve curve;
  curve.q = q;
  curve.n = n;
  curve.bc = bc;
  curve.margin = mc.margin;
  const EventSpec ev = crossing_h(2 * n, n);
  curve.region = margin_region(support(ev), mc.margin);
  const Event pred = as_predicate(ev, curve.region);
  curve.points.resize(p_grid.size());
  parallel_for(p_grid.size(), [&](std::size_t i) {
    const ModelParams params{p_grid[i], q, bc};
    curve.points[i] = {p_grid[i], estimate_event(curve.region, params, pred, mc.schedule, derive_seed(mc.seed, i))};
  });
  return curve;
}

std::optional<double> crossing_level(const ThresholdCurve& curve, double level) {
  const auto& pts = curve.points;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double v0 = pts[i - 1].estimate.value, v1 = pts[i].estimate.value;
    if (v0 < level && v1 >= level)
      return pts[i - 1].p + (level - v0) / (v1 - v0) * (pts[i].p - pts[i - 1].p);
  }
  return std::nullopt;
}

bool is_monotone(const ThresholdCurve& curve, double nsigma) {
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1].estimate;
    const auto& b = curve.points[i].estimate;
    const double se = std::sqrt(a.standard_error * a.standard_error + b.standard_error * b.standard_error);
    if (b.value - a.value < -nsigma * se) return false;
  }
  return true;
}

PcBracket estimate_pc(double q, int n, double tolerance, const McSettings& mc) {
  if (!(q >= 1.0)) throw std::invalid_argument("estimate_pc: q must be >= 1");
  if (n < 8) throw std::invalid_argument("estimate_pc: n must be >= 8");
  if (!(tolerance >= 0.005)) throw std::invalid_argument("estimate_pc: tolerance must be >= 0.005");
  mc.schedule.validate();
  const EventSpec ev = crossing_h(2 * n, n);
  const Region r = margin_region(support(ev), mc.margin);
  const Event pred = as_predicate(ev, r);

  PcBracket out;
  EstimateWithError at_lo, at_hi;  // exact: 0 at p = 0 and 1 at p = 1
  at_hi.value = 1.0;
  for (std::uint64_t step = 0; out.hi - out.lo > tolerance; ++step) {
    const double mid = 0.5 * (out.lo + out.hi);
    const auto est = estimate_event(r, ModelParams{mid, q, Boundary::wired}, pred, mc.schedule, derive_seed(mc.seed, step));
    out.evaluations.push_back({mid, est});
    if (est.value >= 0.5) {
      out.hi = mid;
      at_hi = est;
    } else {
      out.lo = mid;
      at_lo = est;
    }
  }
  const double se = std::sqrt(at_lo.standard_error * at_lo.standard_error + at_hi.standard_error * at_hi.standard_error);
  if (at_hi.value - at_lo.value < 3.0 * se)
    throw BracketError("estimate_pc: the crossing probability is flat within noise on [" + std::to_string(out.lo) +
                       ", " + std::to_string(out.hi) + "]; use a larger n or more sweeps");
  return out;
}

void fit_log_linear(DecayFit& fit) {
  std::vector<double> xs, ys;
  for (auto& pt : fit.points) {
    const double successes = pt.estimate.value * static_cast<double>(pt.estimate.n_samples);
    pt.used = successes >= kMinDecaySuccesses - 1e-9;
    pt.log_probability = pt.estimate.value > 0.0 ? std::log(pt.estimate.value) : -kInf;
    if (pt.used) {
      xs.push_back(pt.distance);
      ys.push_back(pt.log_probability);
    }
  }
  if (xs.size() < 4)
    throw DecayFitError("fit_decay: only " + std::to_string(xs.size()) +
                        " distances have enough successes; at least 4 are needed");
  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw DecayFitError("fit_decay: distances must not all be equal");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ssr += r * r;
  }
  fit.slope_se = std::sqrt(ssr / (m - 2.0) / sxx);
  fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
}

DecayFit fit_decay(double q, double p, std::span<const int> distances, const McSettings& mc) {
  if (distances.size() < 4) throw std::invalid_argument("fit_decay: at least 4 distances are needed");
  int d_max = 0;
  for (int d : distances) {
    if (d < 1) throw std::invalid_argument("fit_decay: distances must be >= 1");
    d_max = std::max(d_max, d);
  }
  const ModelParams params{p, q, Boundary::free};
  params.validate();
  const Region r = margin_region(Region(-d_max, d_max, -d_max, d_max), mc.margin);
  std::vector<Event> preds;
  for (int d : distances) preds.push_back(as_predicate(point_to_origin({d, 0}), r));
  const auto est = estimate_events(r, params, preds, mc.schedule, mc.seed);
  DecayFit fit;
  fit.p = p;
  fit.q = q;
  for (std::size_t i = 0; i < distances.size(); ++i) fit.points.push_back({distances[i], est[i], 0.0, false});
  fit_log_linear(fit);
  return fit;
}

SharpThresholdReport sharp_threshold_diagnostic(const Region& r, const ModelParams& params, int n, int k_lo,
                                                int k_hi, double c_user, DiagnosticMode mode,
                                                const Schedule& schedule, std::uint64_t seed) {
  if (!(c_user > 0.0)) throw std::invalid_argument("sharp_threshold_diagnostic: c must be > 0");
  if (n < 0 || k_lo < 0 || k_hi < k_lo) throw std::invalid_argument("sharp_threshold_diagnostic: need 0 <= k_lo <= k_hi");
  std::vector<Event> events;
  for (int k = k_lo; k <= k_hi; ++k) events.push_back(as_predicate(crossing_h(k, n), r));

  std::vector<std::vector<double>> influences(events.size());
  if (mode == DiagnosticMode::exact) {
    const ExactDistribution d = enumerate_measure(r, params);
    for (std::size_t i = 0; i < events.size(); ++i) influences[i] = influences_exact(d, event_indicator(d, events[i]));
  } else {
    schedule.validate();
    std::vector<CovarianceAccumulator> acc(events.size(), CovarianceAccumulator(all_edges(r), schedule));
    run_chain(r, params, schedule, seed, [&](const Configuration& c) {
      for (std::size_t i = 0; i < events.size(); ++i) acc[i].add(events[i](c), c);
    });
    for (std::size_t i = 0; i < events.size(); ++i)
      for (std::size_t e = 0; e < acc[i].size(); ++e) influences[i].push_back(acc[i].finish(e, schedule, seed).value);
  }

  SharpThresholdReport report;
  report.c_user = c_user;
  for (std::size_t i = 0; i < events.size(); ++i) {
    SharpThresholdDiagnostic diag;
    diag.k = k_lo + static_cast<int>(i);
    diag.influences = std::move(influences[i]);
    for (double j : diag.influences) {
      diag.sum += j;
      diag.max = std::max(diag.max, j);
    }
    diag.degenerate = !(diag.max > 0.0);
    diag.f = diag.degenerate ? kInf : std::max(std::log(c_user / diag.max), diag.sum);
    report.total_f += diag.f;
    report.per_k.push_back(std::move(diag));
  }
  return report;
}

}  // namespace rcm
