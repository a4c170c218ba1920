#include "crot/entanglement.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace crot {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr int kGridPoints = 1000;

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// avg_cost - 1, evaluated without forming 1 - p + E and subtracting 1 again.
double excess_cost(double theta, double alpha) {
  const ProtocolParams params(theta, alpha);
  return e_alpha(params.alpha()) - optimum(params).p_max;
}

struct Candidate {
  double alpha;
  double excess;
};

Candidate minimize_excess(double theta, double tol, AlphaRange range) {
  if (!(theta > 0.0) || theta > kHalfPi + 1e-12) throw std::domain_error("theta outside (0, pi/2]");
  if (!(tol >= 1e-8 && tol <= 1e-3)) throw std::invalid_argument("tol must lie in [1e-8, 1e-3]");

  // Grid nodes k * h for k = 1..kGridPoints; with the Bell point the last node is pi/2.
  const bool with_bell = range == AlphaRange::WithBell;
  const double h = kHalfPi / (with_bell ? kGridPoints : kGridPoints + 1);
  auto node = [&](int k) { return (with_bell && k == kGridPoints) ? kHalfPi : k * h; };

  Candidate best{node(1), excess_cost(theta, node(1))};
  int best_k = 1;
  for (int k = 2; k <= kGridPoints; ++k) {
    const double a = node(k);
    const double e = excess_cost(theta, a);
    if (e < best.excess) {
      best = {a, e};
      best_k = k;
    }
  }

  // Golden-section on the neighbouring cells; only interior points are evaluated.
  double lo = (best_k - 1) * h;
  double hi = best_k == kGridPoints ? (with_bell ? kHalfPi : (kGridPoints + 1) * h) : node(best_k + 1);
  hi = std::min(hi, kHalfPi);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = excess_cost(theta, c);
  double fd = excess_cost(theta, d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = excess_cost(theta, c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = excess_cost(theta, d);
    }
  }
  if (fc < best.excess) best = {c, fc};
  if (fd < best.excess) best = {d, fd};
  return best;
}

}  // namespace

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p outside [0, 1]");
  return -plogp(p) - plogp(1.0 - p);
}

double e_alpha(double alpha) {
  if (!(alpha > 0.0) || alpha > kHalfPi + 1e-12) throw std::domain_error("e_alpha: alpha outside (0, pi/2]");
  if (alpha >= kHalfPi) return 1.0;
  const double c2 = std::pow(std::cos(alpha / 2.0), 2);
  const double s2 = std::pow(std::sin(alpha / 2.0), 2);
  return -plogp(c2) - plogp(s2);
}

EntanglementReport avg_cost(const ProtocolParams& params) {
  const double e = e_alpha(params.alpha());
  const double p = optimum(params).p_max;
  return {params.theta(), params.alpha(), e, p, 1.0 - p + e};
}

CostMinimum min_cost_over_alpha(double theta, double tol, AlphaRange range) {
  const Candidate c = minimize_excess(theta, tol, range);
  return {c.alpha, 1.0 + c.excess};
}

double cost_margin(double theta, double tol) { return minimize_excess(theta, tol, AlphaRange::PartialOnly).excess; }

double threshold_theta(double tol) {
  if (!(tol >= 1e-6 && tol <= 1e-3)) throw std::invalid_argument("threshold tol must lie in [1e-6, 1e-3]");
  double lo = 0.1 * std::numbers::pi;
  double hi = 0.4 * std::numbers::pi;
  if (!(cost_margin(lo) < 0.0) || !(cost_margin(hi) > 0.0))
    throw std::runtime_error("threshold_theta: cost margin does not change sign on (0.1pi, 0.4pi)");
  while (hi - lo > tol * std::numbers::pi) {
    const double mid = 0.5 * (lo + hi);
    if (cost_margin(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace crot
