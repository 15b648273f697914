#include "rcm/duality.hpp"

#include <cmath>
#include <stdexcept>

namespace rcm {

double dual_parameter(double p, double q) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("dual_parameter: p must lie strictly between 0 and 1");
  if (!(q >= 1.0)) throw std::invalid_argument("dual_parameter: q must be >= 1");
  const double a = q * (1.0 - p);
  return a / (a + p);
}

double self_dual_point(double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("self_dual_point: q must be >= 1");
  const double s = std::sqrt(q);
  return s / (1.0 + s);
}

Configuration dual_configuration(const Configuration& c, const DualGraph& g) {
  if (c.size() != g.primal.edge_count())
    throw std::invalid_argument("dual_configuration: configuration does not match region");
  Configuration out(g.primal_edge.size());
  for (std::size_t k = 0; k < g.primal_edge.size(); ++k) out.set(k, !c.open(g.primal_edge[k]));
  return out;
}

Configuration dual_configuration(const Configuration& c, const Region& r) {
  return dual_configuration(c, dual_graph(r));
}

std::pair<EventSpec, EventSpec> dual_crossing_event(int n) {
  if (n < 1) throw std::invalid_argument("dual_crossing_event: n must be >= 1");
  return {strip_crossing(n), dual_strip_crossing(n)};
}

Region dual_host_region(int n) {
  if (n < 1) throw std::invalid_argument("dual_host_region: n must be >= 1");
  return {0, 2 * n + 1, -1, 2 * n + 1};
}

}  // namespace rcm
