#include "rcm/exact_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "rcm/disjoint_set.hpp"

namespace rcm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// n * log(x) with the convention 0 * log(0) = 0.
double weighted_log(std::size_t n, double x) {
  if (n == 0) return 0.0;
  return x > 0.0 ? static_cast<double>(n) * std::log(x) : kNegInf;
}

}  // namespace

int cluster_count(const Configuration& c, const Region& r, Boundary bc) {
  if (c.size() != r.edge_count())
    throw std::invalid_argument("cluster_count: configuration does not match region");
  const GridGraph g(r);
  DisjointSet ds(g.vertex_count());
  if (bc == Boundary::wired) {
    const auto& b = g.boundary_list();
    for (std::size_t i = 1; i < b.size(); ++i) ds.unite(b[0], b[i]);
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    if (c.open(e)) ds.unite(g.ends(e)[0], g.ends(e)[1]);
  return static_cast<int>(ds.components());
}

double ExactDistribution::log_weight(std::uint64_t config) const {
  const std::size_t m = edge_count();
  const auto open = static_cast<std::size_t>(std::popcount(config));
  return weighted_log(open, params_.p) + weighted_log(m - open, 1.0 - params_.p) +
         static_cast<double>(clusters_.at(config)) * std::log(params_.q);
}

double ExactDistribution::weight(std::uint64_t config) const { return std::exp(log_weight(config)); }

double ExactDistribution::partition_function() const { return std::exp(log_partition_); }

void ExactDistribution::normalise() {
  const std::size_t m = edge_count();
  const double lp = params_.p > 0.0 ? std::log(params_.p) : kNegInf;
  const double lq = params_.p < 1.0 ? std::log1p(-params_.p) : kNegInf;
  const double lk = std::log(params_.q);
  probability_.resize(clusters_.size());

  // log-weights, then exponentiate against the running maximum
  double max_lw = kNegInf;
  for (std::uint64_t i = 0; i < clusters_.size(); ++i) {
    const auto open = static_cast<std::size_t>(std::popcount(i));
    const double a = open == 0 ? 0.0 : static_cast<double>(open) * lp;
    const double b = open == m ? 0.0 : static_cast<double>(m - open) * lq;
    const double lw = a + b + static_cast<double>(clusters_[i]) * lk;
    probability_[i] = lw;
    max_lw = std::max(max_lw, lw);
  }
  long double total = 0.0L;
  for (double& v : probability_) {
    v = std::isfinite(v) ? std::exp(v - max_lw) : 0.0;
    total += v;
  }
  for (double& v : probability_) v = static_cast<double>(v / total);
  log_partition_ = max_lw + std::log(static_cast<double>(total));
}

ExactDistribution enumerate_measure(const Region& r, const ModelParams& params) {
  params.validate();
  const std::size_t m = r.edge_count();
  if (m > kEnumerationBound)
    throw EnumerationBoundError("enumerate_measure: region " + r.to_string() + " has " +
                                std::to_string(m) + " edges; the enumeration bound is " +
                                std::to_string(kEnumerationBound));
  ExactDistribution d(r, params);
  const GridGraph g(r);
  const std::size_t nv = g.vertex_count();
  const std::uint64_t count = std::uint64_t{1} << m;
  d.clusters_.resize(count);

  std::vector<std::uint32_t> base(nv);
  for (std::size_t v = 0; v < nv; ++v) base[v] = static_cast<std::uint32_t>(v);
  std::size_t base_components = nv;
  if (params.bc == Boundary::wired && !g.boundary_list().empty()) {
    const auto root = g.boundary_list().front();
    for (auto b : g.boundary_list()) base[b] = root;
    base_components = nv - g.boundary_list().size() + 1;
  }

  std::vector<std::uint32_t> parent(nv);
  auto find = [&parent](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::uint64_t config = 0; config < count; ++config) {
    std::copy(base.begin(), base.end(), parent.begin());
    std::size_t k = base_components;
    for (std::uint64_t bits = config; bits != 0; bits &= bits - 1) {
      const auto e = static_cast<std::size_t>(std::countr_zero(bits));
      const auto a = find(g.ends(e)[0]);
      const auto b = find(g.ends(e)[1]);
      if (a != b) {
        parent[a] = b;
        --k;
      }
    }
    d.clusters_[config] = static_cast<std::uint8_t>(k);
  }
  d.normalise();
  return d;
}

ExactDistribution reweight(const ExactDistribution& d, double p, double q) {
  ExactDistribution out(d.region_, ModelParams{p, q, d.params_.bc});
  out.params_.validate();
  out.clusters_ = d.clusters_;
  out.normalise();
  return out;
}

std::vector<std::uint8_t> event_indicator(const ExactDistribution& d, const Event& ev) {
  std::vector<std::uint8_t> out(d.size());
  Configuration c(d.edge_count());
  for (std::uint64_t i = 0; i < d.size(); ++i) {
    c.assign_bits(i);
    out[i] = ev(c) ? 1 : 0;
  }
  return out;
}

double event_probability(const ExactDistribution& d, std::span<const std::uint8_t> indicator) {
  if (indicator.size() != d.size()) throw std::invalid_argument("event_probability: indicator size mismatch");
  const auto prob = d.probabilities();
  double total = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i)
    if (indicator[i]) total += prob[i];
  return total;
}

double event_probability(const ExactDistribution& d, const Event& ev) {
  return event_probability(d, event_indicator(d, ev));
}

double edge_marginal(const ExactDistribution& d, std::size_t e) {
  if (e >= d.edge_count()) throw std::out_of_range("edge_marginal: edge index out of range");
  const auto prob = d.probabilities();
  double total = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i)
    if ((i >> e) & 1u) total += prob[i];
  return total;
}

std::vector<double> influences_exact(const ExactDistribution& d, std::span<const std::uint8_t> indicator) {
  if (indicator.size() != d.size()) throw std::invalid_argument("influences_exact: indicator size mismatch");
  const std::size_t m = d.edge_count();
  const auto prob = d.probabilities();
  std::vector<double> joint(m, 0.0), marginal(m, 0.0);
  double p_event = 0.0;
  for (std::uint64_t i = 0; i < prob.size(); ++i) {
    const double w = prob[i];
    if (indicator[i]) p_event += w;
    for (std::uint64_t bits = i; bits != 0; bits &= bits - 1) {
      const auto e = static_cast<std::size_t>(std::countr_zero(bits));
      marginal[e] += w;
      if (indicator[i]) joint[e] += w;
    }
  }
  std::vector<double> out(m);
  for (std::size_t e = 0; e < m; ++e) out[e] = joint[e] - p_event * marginal[e];
  return out;
}

double influence_exact(const ExactDistribution& d, const Event& ev, std::size_t e) {
  if (e >= d.edge_count()) throw std::out_of_range("influence_exact: edge index out of range");
  return influences_exact(d, event_indicator(d, ev))[e];
}

RussoComparison russo_check(const Region& r, const ModelParams& params, const Event& ev, double h) {
  if (!(h > 0.0) || !(params.p - h > 0.0) || !(params.p + h < 1.0))
    throw std::invalid_argument("russo_check: need 0 < p - h and p + h < 1");
  const ExactDistribution mid = enumerate_measure(r, params);
  const auto indicator = event_indicator(mid, ev);
  const ExactDistribution lo = reweight(mid, params.p - h, params.q);
  const ExactDistribution hi = reweight(mid, params.p + h, params.q);
  RussoComparison out;
  out.lhs = (event_probability(hi, indicator) - event_probability(lo, indicator)) / (2.0 * h);
  double sum = 0.0;
  for (double j : influences_exact(mid, indicator)) sum += j;
  out.rhs = sum / (params.p * (1.0 - params.p));
  return out;
}

std::vector<std::uint8_t> hamming_table(std::span<const std::uint8_t> indicator, std::size_t edge_count) {
  if (edge_count > kEnumerationBound) throw EnumerationBoundError("hamming_table: too many edges");
  if (indicator.size() != (std::size_t{1} << edge_count))
    throw std::invalid_argument("hamming_table: indicator size mismatch");
  // An increasing event containing the empty configuration is certain: no
  // closure leaves it.
  if (indicator[0]) return std::vector<std::uint8_t>(indicator.size(), kHammingUnreachable);
  std::vector<std::uint8_t> h(indicator.size(), 0);
  // Subsets precede supersets in increasing index order.
  for (std::uint64_t i = 0; i < indicator.size(); ++i) {
    if (!indicator[i]) continue;
    std::uint8_t best = std::numeric_limits<std::uint8_t>::max();
    for (std::uint64_t bits = i; bits != 0; bits &= bits - 1) {
      const std::uint64_t below = i & ~(bits & (~bits + 1));
      best = std::min(best, h[below]);
    }
    h[i] = static_cast<std::uint8_t>(best + 1);
  }
  return h;
}

double hamming_expectation(const ExactDistribution& d, const Event& ev) {
  const auto indicator = event_indicator(d, ev);
  const auto h = hamming_table(indicator, d.edge_count());
  if (indicator[0]) return std::numeric_limits<double>::infinity();
  const auto prob = d.probabilities();
  double total = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) total += prob[i] * h[i];
  return total;
}

double tv_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("tv_distance: distributions live on different spaces");
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
  return 0.5 * total;
}

double tv_distance(const ExactDistribution& a, const ExactDistribution& b) {
  if (a.region() != b.region()) throw std::invalid_argument("tv_distance: distributions live on different regions");
  return tv_distance(a.probabilities(), b.probabilities());
}

std::vector<double> pushforward(const ExactDistribution& d,
                                const std::function<std::uint64_t(const Configuration&)>& f,
                                std::size_t target_size) {
  std::vector<double> out(target_size, 0.0);
  Configuration c(d.edge_count());
  for (std::uint64_t i = 0; i < d.size(); ++i) {
    c.assign_bits(i);
    const std::uint64_t j = f(c);
    if (j >= target_size) throw std::out_of_range("pushforward: image index out of range");
    out[j] += d.probabilities()[i];
  }
  return out;
}

void write_csv(std::ostream& os, const ExactDistribution& d) {
  os << "config,weight,probability\n";
  char buf[96];
  for (std::uint64_t i = 0; i < d.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g\n", static_cast<unsigned long long>(i), d.weight(i),
                  d.probabilities()[i]);
    os << buf;
  }
}

}  // namespace rcm
