#pragma once

// Entanglement bookkeeping in ebits (base-2 von Neumann entropy).

#include "crot/model.hpp"

namespace crot {

/// Binary entropy in bits with 0 log 0 = 0. Throws std::domain_error outside [0, 1].
double binary_entropy(double p);

/// Entropy of entanglement of cos(alpha/2)|00> + i sin(alpha/2)|11>.
double e_alpha(double alpha);

struct EntanglementReport {
  double theta;
  double alpha;
  double e_alpha;
  double p_max;
  double avg_cost;  // 1 - p_max + e_alpha
};

/// Average ebits per gate when failures are repaired with one Bell pair:
/// p E_alpha + (1 - p)(1 + E_alpha) = 1 - p + E_alpha, with p the optimum.
EntanglementReport avg_cost(const ProtocolParams& params);

enum class AlphaRange {
  WithBell,     // (0, pi/2]
  PartialOnly,  // (0, pi/2): excludes the Bell resource, whose cost is exactly 1
};

struct CostMinimum {
  double alpha_star;
  double cost_star;
};

/// Minimizes avg_cost over alpha: 1000-point grid, then golden-section search
/// on the bracket around the best grid point down to width `tol`
/// (in [1e-8, 1e-3]).
CostMinimum min_cost_over_alpha(double theta, double tol, AlphaRange range = AlphaRange::WithBell);

/// min over partial resources of (avg_cost - 1) = min (E_alpha - p_max).
/// Negative iff some partial resource beats one ebit on average.
double cost_margin(double theta, double tol = 1e-8);

/// Bisection for the angle below which some partial resource costs less than
/// one ebit on average, over theta in (0.1 pi, 0.4 pi), to width tol * pi
/// (tol in [1e-6, 1e-3]). Throws std::runtime_error without a sign change.
double threshold_theta(double tol);

}  // namespace crot
