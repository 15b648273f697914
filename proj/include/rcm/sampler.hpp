#pragma once

// Markov chain Monte Carlo for the random-cluster measure on a region.
//
// The reference dynamics is single-edge heat-bath, valid for every real q >= 1.
// The Chayes-Machta cluster update (also valid for real q >= 1; for integer q
// it is the one-colour Swendsen-Wang move) sits behind the same interface and
// is what large near-critical runs should use.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "rcm/configuration.hpp"
#include "rcm/disjoint_set.hpp"
#include "rcm/lattice.hpp"
#include "rcm/model.hpp"
#include "rcm/rng.hpp"

namespace rcm {

enum class SamplerKind { heat_bath, chayes_machta };

std::string_view to_string(SamplerKind kind);
SamplerKind parse_sampler(std::string_view name);

/// Sweeps are counted from 1; samples are emitted after sweeps
/// burn_in + thin, burn_in + 2 thin, ... up to `sweeps`.
struct Schedule {
  std::int64_t sweeps = 0;
  std::int64_t burn_in = 0;
  std::int64_t thin = 1;
  SamplerKind sampler = SamplerKind::heat_bath;
  int batches = 20;

  /// Throws std::invalid_argument unless sweeps > burn_in >= 0, thin >= 1 and
  /// at least one sample per batch is emitted.
  void validate() const;
  std::int64_t sample_count() const noexcept { return thin > 0 ? (sweeps - burn_in) / thin : 0; }
};

/// burn_in = 100 * width, thin = 10, 20 batches of 50 samples.
Schedule default_schedule(const Region& r, SamplerKind sampler = SamplerKind::heat_bath);

/// Law of edge e given all other edges: p when its endpoints are joined
/// without e (the wired boundary counts as one vertex), else p / (p + q(1-p)).
double conditional_open_probability(const Configuration& c, std::size_t e, const Region& r,
                                    const ModelParams& params);

/// Whether u and v are joined by open edges; under wired boundary conditions
/// all boundary vertices are one class. Throws std::out_of_range for vertices outside r.
bool connected(const Configuration& c, Vertex u, Vertex v, const Region& r, Boundary bc);

class ChainState {
 public:
  /// Starts from the all-closed configuration.
  ChainState(const Region& r, const ModelParams& params, std::uint64_t seed, std::uint64_t stream = 0);
  ChainState(std::shared_ptr<const GridGraph> graph, const ModelParams& params, Xoshiro256 rng,
             Configuration initial);

  const Region& region() const noexcept { return graph_->region(); }
  const GridGraph& graph() const noexcept { return *graph_; }
  const ModelParams& params() const noexcept { return params_; }
  const Configuration& configuration() const noexcept { return config_; }
  std::int64_t sweeps() const noexcept { return sweeps_; }
  const Xoshiro256& rng() const noexcept { return rng_; }

  void set_configuration(Configuration c);

  /// Resamples every edge once, in canonical order, from its conditional law.
  void heat_bath_sweep();
  /// One Chayes-Machta move: each cluster is activated with probability 1/q and
  /// every edge with both endpoints active is resampled as Bernoulli(p).
  void chayes_machta_sweep();
  void sweep(SamplerKind kind) {
    if (kind == SamplerKind::heat_bath)
      heat_bath_sweep();
    else
      chayes_machta_sweep();
  }

  /// Conditional open probability of e in the current state.
  double conditional_open_probability(std::size_t e);

 private:
  bool linked_without(std::size_t e);

  std::shared_ptr<const GridGraph> graph_;
  ModelParams params_;
  Xoshiro256 rng_;
  Configuration config_;
  std::int64_t sweeps_ = 0;
  double isolated_prob_ = 0.0;

  std::vector<std::uint32_t> mark_;
  std::uint32_t stamp_ = 0;
  std::vector<std::uint32_t> queue_a_;
  std::vector<std::uint32_t> queue_b_;
  DisjointSet clusters_;
  std::vector<std::int8_t> active_;
};

using SampleSink = std::function<void(const Configuration&)>;

/// Runs one chain from the all-closed state and hands every emitted sample to
/// `sink`. Deterministic in (r, params, schedule, seed, stream).
void run_chain(const Region& r, const ModelParams& params, const Schedule& schedule, std::uint64_t seed,
               const SampleSink& sink, std::uint64_t stream = 0);

/// Monte Carlo estimate with a batch-means standard error.
struct EstimateWithError {
  double value = 0.0;
  double standard_error = 0.0;
  std::int64_t n_samples = 0;
  /// sample variance / standard_error^2, never above n_samples
  double n_effective = 0.0;
  std::uint64_t seed = 0;
  std::int64_t burn_in = 0;
  std::int64_t thin = 1;
};

/// Streaming batch-means accumulator for a known number of samples. Samples
/// past the last full batch enter the point estimate only.
class BatchMeans {
 public:
  BatchMeans(std::int64_t total, int batches);

  void add(double x);
  std::int64_t count() const noexcept { return count_; }
  EstimateWithError finish(std::uint64_t seed, std::int64_t burn_in, std::int64_t thin) const;

 private:
  std::int64_t total_;
  int batches_;
  std::int64_t batch_size_;
  std::int64_t count_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  std::vector<double> batch_sum_;
};

/// Standard error from batch means of a sequence that is already in memory.
EstimateWithError estimate_from_samples(std::span<const double> samples, int batches, std::uint64_t seed = 0,
                                        std::int64_t burn_in = 0, std::int64_t thin = 1);

EstimateWithError estimate_event(const Region& r, const ModelParams& params, const Event& ev,
                                 const Schedule& schedule, std::uint64_t seed);

/// Several events from one chain.
std::vector<EstimateWithError> estimate_events(const Region& r, const ModelParams& params,
                                               std::span<const Event> events, const Schedule& schedule,
                                               std::uint64_t seed);

/// Combines independent estimates weighted by sample count. Associative and
/// order-independent up to floating-point rounding.
EstimateWithError pool(std::span<const EstimateWithError> parts);

}  // namespace rcm
