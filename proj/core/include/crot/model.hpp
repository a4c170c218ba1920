#pragma once

// Three-outcome POVM on Bob's ancilla and its optimal success probability.
//
// With half angles ct = cos(theta/2), st = sin(theta/2), ca = cos(alpha/2),
// sa = sin(alpha/2), the POVM is
//
//   E1 = x |phi1><phi1|,  phi1 = (ct/ca,  st/sa)
//   E2 = y |phi2><phi2|,  phi2 = (st/ca, -ct/sa)
//   E3 = I - E1 - E2
//
// and the success probability x + y is maximized subject to E3 >= 0.

#include <array>
#include <string_view>

#include "crot/qmath.hpp"

namespace crot {

/// Rotation angle theta of U(theta) = exp(i theta/2 Z_A Z_B) and resource
/// parameter alpha of cos(alpha/2)|00> + i sin(alpha/2)|11>.
///
/// Valid domain: alpha in (0, pi/2]; theta in (0, pi/2], widened to
/// (-pi, pi] when alpha = pi/2 (a Bell resource, used for recovery).
class ProtocolParams {
 public:
  /// Throws std::domain_error naming the violated range.
  ProtocolParams(double theta, double alpha);

  static ProtocolParams bell(double theta);

  double theta() const { return theta_; }
  double alpha() const { return alpha_; }
  bool is_bell() const;

 private:
  double theta_;
  double alpha_;
};

struct PovmWeights {
  double x = 0.0;
  double y = 0.0;
};

struct PhiVectors {
  std::array<double, 2> phi1;
  std::array<double, 2> phi2;
};

struct PovmSet {
  Mat2 e1;
  Mat2 e2;
  Mat2 e3;
  PovmWeights weights;
  ProtocolParams params;
  double e3_min_eigenvalue = 0.0;
  bool valid = false;  // x, y >= 0 and E3 eigenvalues >= -1e-12
};

enum class CaseLabel { CaseI, CaseII, Boundary };

std::string_view case_name(CaseLabel c);

struct OptimumResult {
  CaseLabel case_label;
  double x;
  double y;
  double p_max;
};

struct OracleResult {
  double x;
  double y;
  double p;
};

PhiVectors phi_vectors(const ProtocolParams& params);

/// Never throws on infeasible weights; the result is flagged `valid = false`.
PovmSet build_povm(const ProtocolParams& params, PovmWeights weights);

/// Closed-form trace of E3.
double tr_e3(const ProtocolParams& params, PovmWeights weights);
/// Closed-form determinant of E3 (factored hyperbola form).
double det_e3(const ProtocolParams& params, PovmWeights weights);
/// Determinant of E3 written as Tr E3 - 1 + 4xy / sin^2(alpha).
double det_e3_via_trace(const ProtocolParams& params, PovmWeights weights);

/// cos(alpha) sin(theta) [cos(alpha)(sin(theta) + cos(theta)) - 1] / (2 (1 - cos(theta) cos(alpha))).
double delta(const ProtocolParams& params);

/// cos(alpha)(sin(theta) + cos(theta)); below 1 is case I, above 1 case II.
double case_indicator(const ProtocolParams& params);
CaseLabel classify(const ProtocolParams& params);

/// p_max = 1 - sin(theta) cos(alpha).
double pmax_case_one(const ProtocolParams& params);
/// p_max = sin^2(alpha) / (2 (1 - cos(theta) cos(alpha))).
double pmax_case_two(const ProtocolParams& params);

OptimumResult optimum(const ProtocolParams& params);

/// Brute-force maximization of x + y over [0, 1.2]^2 using eigenvalues of E3
/// for feasibility: for each x on a grid, the largest feasible y is found by
/// bisection, and the x grid is refined around the incumbent until its step
/// drops below `resolution` (in [1e-7, 1e-2]).
OracleResult pmax_oracle(const ProtocolParams& params, double resolution);

/// Best probability of converting the resource into a Bell pair: 1 - cos(alpha).
double bell_conversion_prob(double alpha);

/// U(theta) = cos(theta/2) I + i sin(theta/2) Z_A Z_B on (A, B).
Matrix target_gate(double theta);

}  // namespace crot
