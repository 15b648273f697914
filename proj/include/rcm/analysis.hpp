#pragma once

// Estimators and inequality diagnostics built on the oracle and the sampler:
// influences, crossing-probability curves, decay fits, and checks of the
// combination, gluing, Hamming and translation-difference inequalities.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcm/configuration.hpp"
#include "rcm/events.hpp"
#include "rcm/lattice.hpp"
#include "rcm/model.hpp"
#include "rcm/sampler.hpp"

namespace rcm {

/// Monte Carlo settings shared by the estimators below.
struct McSettings {
  Schedule schedule;
  std::uint64_t seed = 0;
  /// Simulation box = event support scaled by this factor about its centre.
  double margin = 2.0;
};

/// The support grown by ceil((M - 1) * side / 2) on every side, side being
/// measured in edges. M = 1 returns the support itself.
Region margin_region(const Region& support, double margin);

/// Covariance of 1_A and the state of edge e, with batch-means error.
EstimateWithError influence_mc(const Region& r, const ModelParams& params, const Event& ev, std::size_t e,
                               const Schedule& schedule, std::uint64_t seed);

/// Influence of every edge of r from a single chain.
std::vector<EstimateWithError> influence_profile(const Region& r, const ModelParams& params, const Event& ev,
                                                 const Schedule& schedule, std::uint64_t seed);

/// lhs >= rhs is the claim. Monte Carlo sides carry standard errors; exact
/// sides have zero error.
struct InequalityResult {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double lhs_se = 0.0;
  double rhs_se = 0.0;
  bool exact = false;

  double slack() const noexcept { return lhs - rhs; }
  double combined_se() const;
  /// Exact: slack >= -exact_tol. Monte Carlo: slack >= -nsigma * combined SE.
  bool holds(double nsigma = 3.0, double exact_tol = 1e-10) const;
};

/// phi[C_h(l n, n)] >= phi[C_h(n + m, n)]^{2 k l}. Requires m k >= n.
InequalityResult check_combination(const ModelParams& params, int n, int m, int k, int l, const McSettings& mc);

/// phi[N(l n, n) >= u] >= phi[N(2n, n) >= u]^{2(l - 2) + 1}. Requires l >= 2, u >= 1.
InequalityResult check_gluing(const ModelParams& params, int n, int u, int l, const McSettings& mc);

/// phi_{p+delta}[A] >= 1 - exp(-4 delta E_p[H]) on the exact measure of r.
InequalityResult check_hamming_exact(const Region& r, const ModelParams& params, const Event& ev, double delta);
/// Same, with both sides estimated on r by Monte Carlo.
InequalityResult check_hamming_mc(const Region& r, const ModelParams& params, const EventSpec& ev, double delta,
                                  const Schedule& schedule, std::uint64_t seed);

/// Exact check of |J_{A_k}(e) - J_{A_k}(e + (1,0))| <= phi[A_{k-1}] - phi[A_{k+1}]
/// with A_k = C_h(k, b), over k in [k_lo, k_hi] and every edge e of g whose
/// translate also lies in g.
struct TranslationDifferenceReport {
  std::size_t checks = 0;
  double worst_slack = 0.0;
  int worst_k = 0;
  std::size_t worst_edge = 0;
};
TranslationDifferenceReport translation_difference_check(const Region& g, const ModelParams& params, int b,
                                                         int k_lo, int k_hi);

struct ThresholdPoint {
  double p = 0.0;
  EstimateWithError estimate;
};

/// Estimates of phi[C_h(2n, n)] along a grid of p.
struct ThresholdCurve {
  double q = 1.0;
  int n = 0;
  Boundary bc = Boundary::wired;
  double margin = 2.0;
  Region region{0, 0, 0, 0};
  std::vector<ThresholdPoint> points;
};

/// Throws std::invalid_argument unless p_grid is nonempty and strictly
/// increasing inside (0, 1).
ThresholdCurve threshold_curve(double q, int n, std::span<const double> p_grid, const McSettings& mc,
                               Boundary bc = Boundary::wired);

/// First p at which the curve reaches `level`, by linear interpolation
/// between grid points; nullopt when the curve never brackets the level.
std::optional<double> crossing_level(const ThresholdCurve& curve, double level);

/// Adjacent points never decrease by more than nsigma combined standard errors.
bool is_monotone(const ThresholdCurve& curve, double nsigma = 3.0);

class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PcBracket {
  double lo = 0.0;
  double hi = 1.0;
  /// Every evaluated midpoint, in evaluation order.
  std::vector<ThresholdPoint> evaluations;
};

/// Bisection on p for phi[C_h(2n, n)] = 1/2 from the bracket [0, 1], until the
/// bracket is at most `tolerance` wide. Throws BracketError when the final
/// bracket's endpoints are not separated by 3 standard errors.
PcBracket estimate_pc(double q, int n, double tolerance, const McSettings& mc);

class DecayFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DecayPoint {
  int distance = 0;
  EstimateWithError estimate;
  double log_probability = 0.0;
  /// false when the point has fewer than kMinDecaySuccesses successes
  bool used = false;
};

inline constexpr double kMinDecaySuccesses = 10.0;

struct DecayFit {
  double p = 0.0;
  double q = 1.0;
  std::vector<DecayPoint> points;
  double slope = 0.0;
  double slope_se = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least-squares line through (distance, log probability) of the usable
/// points. Throws DecayFitError with fewer than 4 usable points.
void fit_log_linear(DecayFit& fit);

/// phi^0[0 <-> (d, 0) inside [-d, d]^2] for each d from one free-boundary
/// chain on the margin box of the largest distance, then fit_log_linear.
DecayFit fit_decay(double q, double p, std::span<const int> distances, const McSettings& mc);

enum class DiagnosticMode { exact, mc };

struct SharpThresholdDiagnostic {
  int k = 0;
  std::vector<double> influences;
  double sum = 0.0;
  double max = 0.0;
  /// max(log(c / max J), sum J); +inf when every influence is zero
  double f = 0.0;
  bool degenerate = false;
};

struct SharpThresholdReport {
  double c_user = 1.0;
  std::vector<SharpThresholdDiagnostic> per_k;
  double total_f = 0.0;
};

/// Influence profile and f for A_k = C_h(k, n), k in [k_lo, k_hi], on region r.
/// Non-normative: the constant c is a user choice. Monte Carlo mode runs one
/// chain for all k.
SharpThresholdReport sharp_threshold_diagnostic(const Region& r, const ModelParams& params, int n, int k_lo,
                                                int k_hi, double c_user, DiagnosticMode mode,
                                                const Schedule& schedule = {}, std::uint64_t seed = 0);

}  // namespace rcm
