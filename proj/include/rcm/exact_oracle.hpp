#pragma once

// Exact finite-volume random-cluster measure by full enumeration.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "rcm/configuration.hpp"
#include "rcm/lattice.hpp"
#include "rcm/model.hpp"

namespace rcm {

/// Maximum number of edges the enumerator accepts (2^24 configurations).
inline constexpr std::size_t kEnumerationBound = 24;

class EnumerationBoundError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Number of clusters of (vertices of r, open edges). Isolated vertices count;
/// under wired boundary conditions all boundary vertices are merged first.
int cluster_count(const Configuration& c, const Region& r, Boundary bc);

/// Full probability table of a random-cluster measure on a small region.
/// Configuration i has edge e open iff bit e of i is set.
class ExactDistribution {
 public:
  const Region& region() const noexcept { return region_; }
  const ModelParams& params() const noexcept { return params_; }
  std::size_t edge_count() const noexcept { return region_.edge_count(); }
  std::size_t size() const noexcept { return probability_.size(); }

  double probability(std::uint64_t config) const { return probability_.at(config); }
  std::span<const double> probabilities() const noexcept { return probability_; }
  int clusters(std::uint64_t config) const { return clusters_.at(config); }

  /// log of p^{#open} (1-p)^{#closed} q^{k}; -inf for weight zero.
  double log_weight(std::uint64_t config) const;
  double weight(std::uint64_t config) const;
  double log_partition() const noexcept { return log_partition_; }
  double partition_function() const;

  Configuration configuration(std::uint64_t config) const {
    return Configuration::from_bits(config, edge_count());
  }

 private:
  friend ExactDistribution enumerate_measure(const Region&, const ModelParams&);
  friend ExactDistribution reweight(const ExactDistribution&, double, double);
  ExactDistribution(Region r, ModelParams params) : region_(r), params_(params) {}
  void normalise();

  Region region_;
  ModelParams params_;
  std::vector<std::uint8_t> clusters_;
  std::vector<double> probability_;
  double log_partition_ = 0.0;
};

/// Throws EnumerationBoundError above kEnumerationBound edges.
ExactDistribution enumerate_measure(const Region& r, const ModelParams& params);

/// Same region and boundary condition at new (p, q), reusing the cluster counts.
ExactDistribution reweight(const ExactDistribution& d, double p, double q);

/// indicator[i] = ev(configuration i).
std::vector<std::uint8_t> event_indicator(const ExactDistribution& d, const Event& ev);

double event_probability(const ExactDistribution& d, const Event& ev);
double event_probability(const ExactDistribution& d, std::span<const std::uint8_t> indicator);

/// Probability that edge e is open.
double edge_marginal(const ExactDistribution& d, std::size_t e);

/// J(e) = E[1_A w_e] - P(A) P(w_e).
double influence_exact(const ExactDistribution& d, const Event& ev, std::size_t e);
/// Influences of every edge of the region.
std::vector<double> influences_exact(const ExactDistribution& d, std::span<const std::uint8_t> indicator);

struct RussoComparison {
  double lhs = 0.0;  ///< central difference (P_{p+h} - P_{p-h}) / 2h
  double rhs = 0.0;  ///< (1 / p(1-p)) sum_e J(e) at p
};

RussoComparison russo_check(const Region& r, const ModelParams& params, const Event& ev, double h);

inline constexpr std::uint8_t kHammingUnreachable = 255;

/// H[i] = minimal number of open edges of configuration i to close so that the
/// increasing event fails; 0 outside the event. Exact dynamic programme over
/// subsets, independent of any path or flow argument. A certain event gives
/// kHammingUnreachable everywhere.
std::vector<std::uint8_t> hamming_table(std::span<const std::uint8_t> indicator, std::size_t edge_count);

/// +infinity for a certain event.
double hamming_expectation(const ExactDistribution& d, const Event& ev);

/// Half the L1 distance between two probability vectors on the same index space.
double tv_distance(std::span<const double> a, std::span<const double> b);
double tv_distance(const ExactDistribution& a, const ExactDistribution& b);

/// Law of f(configuration) under d, as a probability vector of length target_size.
std::vector<double> pushforward(const ExactDistribution& d,
                                const std::function<std::uint64_t(const Configuration&)>& f,
                                std::size_t target_size);

/// Debug dump: header "config,weight,probability", one row per configuration.
void write_csv(std::ostream& os, const ExactDistribution& d);

}  // namespace rcm
