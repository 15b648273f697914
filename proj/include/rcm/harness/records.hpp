#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rcm/model.hpp"

namespace rcm::harness {

inline constexpr std::string_view kCsvHeader =
    "experiment,kind,p,q,bc,n,a,b,margin,sweeps,burnin,thin,seed,generator,metric,value,stderr,nsamples,"
    "wallclock_s,version";
inline constexpr std::string_view kVersion = "0.1.0";

/// One CSV row. Optional fields are written as empty cells.
struct ResultRecord {
  std::string experiment;
  /// exact, mc, or derived (computed from other rows)
  std::string kind;
  std::optional<double> p;
  std::optional<double> q;
  std::optional<Boundary> bc;
  std::optional<int> n;
  std::optional<int> a;
  std::optional<int> b;
  std::optional<double> margin;
  std::optional<std::int64_t> sweeps;
  std::optional<std::int64_t> burn_in;
  std::optional<std::int64_t> thin;
  std::uint64_t seed = 0;
  std::string generator;
  std::string metric;
  double value = 0.0;
  std::optional<double> stderr_;
  std::optional<std::int64_t> n_samples;
  double wallclock_s = 0.0;
  std::string version{kVersion};
};

/// Orders records by parameter tuple; rows sharing a tuple keep their order.
void sort_records(std::vector<ResultRecord>& records);

void write_csv(std::ostream& os, const std::vector<ResultRecord>& records);
std::string format_row(const ResultRecord& r);

/// Parses a CSV written by write_csv; throws std::runtime_error on bad input.
std::vector<ResultRecord> read_csv(std::istream& is);

/// Problems found in a CSV (empty when it conforms to the schema).
std::vector<std::string> validate_csv(std::istream& is);

}  // namespace rcm::harness
