#include "rcm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

namespace rcm {

std::string_view to_string(SamplerKind kind) {
  return kind == SamplerKind::heat_bath ? "heat-bath" : "chayes-machta";
}

SamplerKind parse_sampler(std::string_view name) {
  if (name == "heat-bath") return SamplerKind::heat_bath;
  if (name == "chayes-machta") return SamplerKind::chayes_machta;
  throw std::invalid_argument("unknown sampler '" + std::string(name) + "'");
}

void Schedule::validate() const {
  if (burn_in < 0) throw std::invalid_argument("schedule: burn_in must be >= 0");
  if (sweeps <= burn_in) throw std::invalid_argument("schedule: sweeps must exceed burn_in");
  if (thin < 1) throw std::invalid_argument("schedule: thin must be >= 1");
  if (batches < 1) throw std::invalid_argument("schedule: batches must be >= 1");
  if (sample_count() < batches)
    throw std::invalid_argument("schedule: " + std::to_string(sample_count()) + " samples cannot fill " +
                                std::to_string(batches) + " batches");
}

Schedule default_schedule(const Region& r, SamplerKind sampler) {
  Schedule s;
  s.burn_in = 100 * static_cast<std::int64_t>(r.width());
  s.thin = 10;
  s.batches = 20;
  s.sweeps = s.burn_in + s.thin * 20 * 50;
  s.sampler = sampler;
  return s;
}

bool connected(const Configuration& c, Vertex u, Vertex v, const Region& r, Boundary bc) {
  if (!r.contains(u) || !r.contains(v)) throw std::out_of_range("connected: vertex outside region");
  if (c.size() != r.edge_count()) throw std::invalid_argument("connected: configuration does not match region");
  if (u == v) return true;
  if (bc == Boundary::wired && r.on_boundary(u) && r.on_boundary(v)) return true;
  const GridGraph g(r);
  const std::size_t ghost = g.vertex_count();
  std::vector<std::uint8_t> seen(ghost + 1, 0);
  std::vector<std::uint32_t> stack{static_cast<std::uint32_t>(r.vertex_index(u))};
  const auto target = static_cast<std::uint32_t>(r.vertex_index(v));
  seen[stack.back()] = 1;
  auto visit = [&](std::uint32_t y) {
    if (!seen[y]) {
      seen[y] = 1;
      stack.push_back(y);
    }
  };
  while (!stack.empty()) {
    const std::uint32_t x = stack.back();
    stack.pop_back();
    if (x == target) return true;
    if (x == ghost) {
      for (auto b : g.boundary_list()) visit(b);
      continue;
    }
    std::size_t deg = 0;
    const auto* nb = g.neighbors(x, deg);
    for (std::size_t i = 0; i < deg; ++i)
      if (c.open(nb[i].edge)) visit(nb[i].vertex);
    if (bc == Boundary::wired && g.is_boundary(x)) visit(static_cast<std::uint32_t>(ghost));
  }
  return false;
}

double conditional_open_probability(const Configuration& c, std::size_t e, const Region& r,
                                    const ModelParams& params) {
  params.validate();
  if (e >= r.edge_count()) throw std::out_of_range("conditional_open_probability: edge index out of range");
  Configuration without = c;
  without.set(e, false);
  const LatticeEdge le = r.edge_at(e);
  if (params.q == 1.0 || connected(without, le.tail(), le.head(), r, params.bc)) return params.p;
  return params.p / (params.p + params.q * (1.0 - params.p));
}

ChainState::ChainState(const Region& r, const ModelParams& params, std::uint64_t seed, std::uint64_t stream)
    : ChainState(std::make_shared<const GridGraph>(r), params, Xoshiro256::stream(seed, stream),
                 Configuration(r.edge_count())) {}

ChainState::ChainState(std::shared_ptr<const GridGraph> graph, const ModelParams& params, Xoshiro256 rng,
                       Configuration initial)
    : graph_(std::move(graph)), params_(params), rng_(rng), config_(std::move(initial)) {
  params_.validate();
  if (config_.size() != graph_->edge_count())
    throw std::invalid_argument("ChainState: configuration does not match region");
  isolated_prob_ = params_.p / (params_.p + params_.q * (1.0 - params_.p));
  mark_.assign(graph_->vertex_count() + 1, 0);
  queue_a_.reserve(graph_->vertex_count() + 1);
  queue_b_.reserve(graph_->vertex_count() + 1);
}

void ChainState::set_configuration(Configuration c) {
  if (c.size() != graph_->edge_count())
    throw std::invalid_argument("set_configuration: configuration does not match region");
  config_ = std::move(c);
}

// Bidirectional search from both endpoints of e, ignoring e. Alternating one
// expansion per side bounds the cost by roughly twice the smaller cluster.
bool ChainState::linked_without(std::size_t e) {
  const GridGraph& g = *graph_;
  const auto [u, v] = g.ends(e);
  const bool wired = params_.bc == Boundary::wired;
  if (wired && g.is_boundary(u) && g.is_boundary(v)) return true;

  if (stamp_ >= std::numeric_limits<std::uint32_t>::max() - 2) {
    std::fill(mark_.begin(), mark_.end(), 0);
    stamp_ = 0;
  }
  const std::uint32_t side_a = ++stamp_;
  const std::uint32_t side_b = ++stamp_;
  const auto ghost = static_cast<std::uint32_t>(g.vertex_count());
  const auto states = config_.states();

  queue_a_.clear();
  queue_b_.clear();
  queue_a_.push_back(u);
  queue_b_.push_back(v);
  mark_[u] = side_a;
  mark_[v] = side_b;
  std::size_t head_a = 0;
  std::size_t head_b = 0;

  // Returns true when the expansion touches the other side.
  auto expand = [&](std::vector<std::uint32_t>& queue, std::size_t& head, std::uint32_t mine,
                    std::uint32_t other) {
    const std::uint32_t x = queue[head++];
    auto visit = [&](std::uint32_t y) {
      if (mark_[y] == other) return true;
      if (mark_[y] != mine) {
        mark_[y] = mine;
        queue.push_back(y);
      }
      return false;
    };
    if (x == ghost) {
      for (auto b : g.boundary_list())
        if (visit(b)) return true;
      return false;
    }
    std::size_t deg = 0;
    const auto* nb = g.neighbors(x, deg);
    for (std::size_t i = 0; i < deg; ++i)
      if (nb[i].edge != e && states[nb[i].edge] && visit(nb[i].vertex)) return true;
    if (wired && g.is_boundary(x) && visit(ghost)) return true;
    return false;
  };

  for (;;) {
    if (head_a == queue_a_.size()) return false;
    if (expand(queue_a_, head_a, side_a, side_b)) return true;
    if (head_b == queue_b_.size()) return false;
    if (expand(queue_b_, head_b, side_b, side_a)) return true;
  }
}

double ChainState::conditional_open_probability(std::size_t e) {
  if (params_.q == 1.0) return params_.p;
  return linked_without(e) ? params_.p : isolated_prob_;
}

void ChainState::heat_bath_sweep() {
  const std::size_t m = graph_->edge_count();
  if (params_.q == 1.0) {
    for (std::size_t e = 0; e < m; ++e) config_.set(e, rng_.bernoulli(params_.p));
  } else {
    for (std::size_t e = 0; e < m; ++e) {
      // One uniform per edge keeps the stream aligned with the q = 1 path.
      const double u = rng_.uniform();
      config_.set(e, u < conditional_open_probability(e));
    }
  }
  ++sweeps_;
}

void ChainState::chayes_machta_sweep() {
  const GridGraph& g = *graph_;
  const std::size_t m = g.edge_count();
  if (params_.q == 1.0) {
    // Every cluster is active: all edges are resampled independently.
    for (std::size_t e = 0; e < m; ++e) config_.set(e, rng_.bernoulli(params_.p));
    ++sweeps_;
    return;
  }
  const std::size_t nv = g.vertex_count();
  clusters_.reset(nv);
  if (params_.bc == Boundary::wired) {
    const auto& b = g.boundary_list();
    for (std::size_t i = 1; i < b.size(); ++i) clusters_.unite(b[0], b[i]);
  }
  for (std::size_t e = 0; e < m; ++e)
    if (config_.open(e)) clusters_.unite(g.ends(e)[0], g.ends(e)[1]);

  const double activation = 1.0 / params_.q;
  active_.assign(nv, -1);
  for (std::size_t v = 0; v < nv; ++v) {
    const auto root = clusters_.find(static_cast<std::uint32_t>(v));
    if (active_[root] < 0) active_[root] = rng_.bernoulli(activation) ? 1 : 0;
  }
  for (std::size_t e = 0; e < m; ++e) {
    const auto [a, b] = g.ends(e);
    if (active_[clusters_.find(a)] == 1 && active_[clusters_.find(b)] == 1)
      config_.set(e, rng_.bernoulli(params_.p));
  }
  ++sweeps_;
}

void run_chain(const Region& r, const ModelParams& params, const Schedule& schedule, std::uint64_t seed,
               const SampleSink& sink, std::uint64_t stream) {
  schedule.validate();
  ChainState chain(r, params, seed, stream);
  for (std::int64_t s = 1; s <= schedule.sweeps; ++s) {
    chain.sweep(schedule.sampler);
    if (s > schedule.burn_in && (s - schedule.burn_in) % schedule.thin == 0) sink(chain.configuration());
  }
}

BatchMeans::BatchMeans(std::int64_t total, int batches)
    : total_(total), batches_(batches), batch_size_(batches > 0 ? total / batches : 0) {
  if (batches < 1 || batch_size_ < 1)
    throw std::invalid_argument("BatchMeans: need at least one sample per batch");
  batch_sum_.assign(static_cast<std::size_t>(batches), 0.0);
}

void BatchMeans::add(double x) {
  const std::int64_t b = count_ / batch_size_;
  if (b < batches_) batch_sum_[static_cast<std::size_t>(b)] += x;
  sum_ += x;
  sum_sq_ += x * x;
  ++count_;
}

EstimateWithError BatchMeans::finish(std::uint64_t seed, std::int64_t burn_in, std::int64_t thin) const {
  if (count_ < static_cast<std::int64_t>(batches_) * batch_size_)
    throw std::logic_error("BatchMeans: fewer samples than announced");
  EstimateWithError out;
  out.n_samples = count_;
  out.seed = seed;
  out.burn_in = burn_in;
  out.thin = thin;
  const double n = static_cast<double>(count_);
  out.value = sum_ / n;
  const double sample_var = count_ > 1 ? std::max(0.0, (sum_sq_ - n * out.value * out.value) / (n - 1.0)) : 0.0;

  double bm_mean = 0.0;
  for (double s : batch_sum_) bm_mean += s / static_cast<double>(batch_size_);
  bm_mean /= batches_;
  double bm_var = 0.0;
  for (double s : batch_sum_) {
    const double d = s / static_cast<double>(batch_size_) - bm_mean;
    bm_var += d * d;
  }
  bm_var = batches_ > 1 ? bm_var / (batches_ - 1) : 0.0;
  const double se_batch = std::sqrt(bm_var / batches_);
  const double se_iid = std::sqrt(sample_var / n);
  out.standard_error = std::max(se_batch, se_iid);
  out.n_effective = out.standard_error > 0.0 ? std::min(n, sample_var / (out.standard_error * out.standard_error)) : n;
  return out;
}

EstimateWithError estimate_from_samples(std::span<const double> samples, int batches, std::uint64_t seed,
                                        std::int64_t burn_in, std::int64_t thin) {
  BatchMeans bm(static_cast<std::int64_t>(samples.size()), batches);
  for (double x : samples) bm.add(x);
  return bm.finish(seed, burn_in, thin);
}

std::vector<EstimateWithError> estimate_events(const Region& r, const ModelParams& params,
                                               std::span<const Event> events, const Schedule& schedule,
                                               std::uint64_t seed) {
  schedule.validate();
  std::vector<BatchMeans> acc;
  acc.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) acc.emplace_back(schedule.sample_count(), schedule.batches);
  run_chain(r, params, schedule, seed, [&](const Configuration& c) {
    for (std::size_t i = 0; i < events.size(); ++i) acc[i].add(events[i](c) ? 1.0 : 0.0);
  });
  std::vector<EstimateWithError> out;
  out.reserve(events.size());
  for (const auto& a : acc) out.push_back(a.finish(seed, schedule.burn_in, schedule.thin));
  return out;
}

EstimateWithError estimate_event(const Region& r, const ModelParams& params, const Event& ev,
                                 const Schedule& schedule, std::uint64_t seed) {
  return estimate_events(r, params, std::span<const Event>(&ev, 1), schedule, seed).front();
}

EstimateWithError pool(std::span<const EstimateWithError> parts) {
  if (parts.empty()) throw std::invalid_argument("pool: no estimates");
  EstimateWithError out = parts.front();
  double n_total = 0.0, weighted = 0.0, var = 0.0, n_eff = 0.0;
  for (const auto& e : parts) {
    const double n = static_cast<double>(e.n_samples);
    n_total += n;
    weighted += n * e.value;
    var += n * n * e.standard_error * e.standard_error;
    n_eff += e.n_effective;
  }
  out.value = weighted / n_total;
  out.standard_error = std::sqrt(var) / n_total;
  out.n_samples = static_cast<std::int64_t>(n_total);
  out.n_effective = std::min(n_eff, n_total);
  return out;
}

}  // namespace rcm
