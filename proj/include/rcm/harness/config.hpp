#pragma once

// Flat "key = value" experiment files. Lines starting with '#' are comments;
// lists are comma separated and numeric lists also accept lo:hi:step ranges.
// Unknown keys are errors, and seed and geometry have no defaults.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rcm/lattice.hpp"
#include "rcm/model.hpp"
#include "rcm/sampler.hpp"

namespace rcm::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
  exact_check,
  duality_check,
  selfdual_crossing,
  threshold,
  decay,
  menger_check,
  influence_profile,
  inequality_suite,
  estimate_pc,
};

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment(std::string_view name);

struct ExperimentConfig {
  std::optional<ExperimentKind> experiment;
  std::vector<double> p;
  std::vector<double> q;
  std::vector<Boundary> bc;
  std::vector<int> n;
  std::optional<int> a;
  std::optional<int> b;
  /// x_min, x_max, y_min, y_max; alternative to a and b
  std::optional<Region> region;
  double margin = 2.0;

  std::optional<std::int64_t> sweeps;
  std::optional<std::int64_t> burn_in;
  std::optional<std::int64_t> thin;
  std::optional<int> batches;
  SamplerKind sampler = SamplerKind::heat_bath;

  std::optional<std::uint64_t> seed;
  std::string output;

  std::vector<int> distances;
  std::optional<std::string> event;
  double tolerance = 0.02;
  double delta = 0.05;
  double c = 1.0;
  std::optional<int> k_min;
  std::optional<int> k_max;
  std::string mode = "mc";

  /// The region named by `region` or by a and b; throws ConfigError if neither.
  Region geometry() const;
  /// Schedule from the config, falling back to default_schedule(r) for unset parts.
  Schedule schedule_for(const Region& r) const;
  /// Field-level checks that do not depend on the experiment kind.
  void validate() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig load_config(const std::string& path);

}  // namespace rcm::harness
