#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rcm {

/// Boundary condition: free (superscript 0) or wired (superscript 1).
enum class Boundary { free, wired };

inline std::string_view to_string(Boundary bc) { return bc == Boundary::free ? "free" : "wired"; }

inline Boundary parse_boundary(std::string_view s) {
  if (s == "free") return Boundary::free;
  if (s == "wired") return Boundary::wired;
  throw std::invalid_argument("unknown boundary condition '" + std::string(s) + "'");
}

/// The (p, q, bc) triple indexing a random-cluster measure.
struct ModelParams {
  double p = 0.5;
  double q = 1.0;
  Boundary bc = Boundary::wired;

  void validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
    if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
  }

  ModelParams with_p(double new_p) const { return {new_p, q, bc}; }
  ModelParams with_bc(Boundary new_bc) const { return {p, q, new_bc}; }
};

}  // namespace rcm
