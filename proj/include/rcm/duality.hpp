#pragma once

#include <utility>

#include "rcm/configuration.hpp"
#include "rcm/events.hpp"
#include "rcm/lattice.hpp"

namespace rcm {

/// p* = q(1-p) / (q(1-p) + p), the solution of p p* / ((1-p)(1-p*)) = q.
/// Throws std::invalid_argument unless 0 < p < 1 and q >= 1.
double dual_parameter(double p, double q);

/// sqrt(q) / (1 + sqrt(q)), the fixed point of dual_parameter.
double self_dual_point(double q);

/// Configuration on the inner dual of r (edges of dual_graph(r).faces): each
/// dual edge is open exactly when the primal edge it crosses is closed.
Configuration dual_configuration(const Configuration& c, const Region& r);
Configuration dual_configuration(const Configuration& c, const DualGraph& g);

/// Primal event E (left-right crossing of [0,2n+1] x [0,2n]) and dual event E*
/// (bottom-top crossing of the faces [0,2n] x [-1,2n]). For every primal
/// configuration on dual_host_region(n), exactly one of E(c), E*(c*) holds.
std::pair<EventSpec, EventSpec> dual_crossing_event(int n);

/// [0,2n+1] x [-1,2n+1]: the primal region whose inner dual carries E*.
Region dual_host_region(int n);

}  // namespace rcm
