#include "crot/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace crot {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kAngleSlack = 1e-12;
constexpr double kCaseBand = 1e-12;
constexpr double kPsdTol = 1e-12;
constexpr double kOracleBox = 1.2;

std::string fmt_angle(double v) { return std::to_string(v / std::numbers::pi) + "pi"; }

// cos(alpha), exactly zero for a Bell resource.
double cos_alpha(const ProtocolParams& p) { return p.is_bell() ? 0.0 : std::cos(p.alpha()); }

}  // namespace

ProtocolParams::ProtocolParams(double theta, double alpha) : theta_(theta), alpha_(alpha) {
  if (!std::isfinite(theta) || !std::isfinite(alpha)) throw std::domain_error("angles must be finite");
  if (!(alpha > 0.0) || alpha > kHalfPi + kAngleSlack)
    throw std::domain_error("alpha = " + fmt_angle(alpha) + " outside (0, pi/2]");
  if (alpha > kHalfPi) alpha_ = kHalfPi;

  if (is_bell()) {
    if (!(theta > -std::numbers::pi) || theta > std::numbers::pi + kAngleSlack)
      throw std::domain_error("theta = " + fmt_angle(theta) + " outside (-pi, pi] for a Bell resource");
    theta_ = std::min(theta, std::numbers::pi);
  } else {
    if (!(theta > 0.0) || theta > kHalfPi + kAngleSlack)
      throw std::domain_error("theta = " + fmt_angle(theta) + " outside (0, pi/2]");
    theta_ = std::min(theta, kHalfPi);
  }
}

ProtocolParams ProtocolParams::bell(double theta) { return ProtocolParams(theta, kHalfPi); }

bool ProtocolParams::is_bell() const { return alpha_ == kHalfPi; }

std::string_view case_name(CaseLabel c) {
  switch (c) {
    case CaseLabel::CaseI: return "I";
    case CaseLabel::CaseII: return "II";
    case CaseLabel::Boundary: return "boundary";
  }
  return "?";
}

PhiVectors phi_vectors(const ProtocolParams& params) {
  const double ct = std::cos(params.theta() / 2.0);
  const double st = std::sin(params.theta() / 2.0);
  const double ca = std::cos(params.alpha() / 2.0);
  const double sa = std::sin(params.alpha() / 2.0);
  return {{ct / ca, st / sa}, {st / ca, -ct / sa}};
}

PovmSet build_povm(const ProtocolParams& params, PovmWeights weights) {
  const PhiVectors phi = phi_vectors(params);
  auto projector = [](const std::array<double, 2>& v, double w) {
    Mat2 m;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) m(i, j) = w * v[i] * v[j];
    return m;
  };

  PovmSet set{projector(phi.phi1, weights.x), projector(phi.phi2, weights.y), Mat2::identity(), weights, params};
  set.e3 = Mat2::identity() - set.e1 - set.e2;
  set.e3_min_eigenvalue = hermitian_eig2(set.e3).values[0];
  set.valid = weights.x >= 0.0 && weights.y >= 0.0 && set.e3_min_eigenvalue >= -kPsdTol;
  return set;
}

double tr_e3(const ProtocolParams& params, PovmWeights w) {
  const double ct2 = std::pow(std::cos(params.theta() / 2.0), 2);
  const double st2 = std::pow(std::sin(params.theta() / 2.0), 2);
  const double ca2 = std::pow(std::cos(params.alpha() / 2.0), 2);
  const double sa2 = std::pow(std::sin(params.alpha() / 2.0), 2);
  return 2.0 - w.x * (ct2 / ca2 + st2 / sa2) - w.y * (st2 / ca2 + ct2 / sa2);
}

double det_e3(const ProtocolParams& params, PovmWeights w) {
  // The bracket is a small difference of O(1) terms scaled by 4/sin^2(alpha).
  using ld = long double;
  const ld theta = params.theta(), alpha = params.alpha();
  const ld ca = params.is_bell() ? 0.0L : std::cos(alpha);
  const ld ct = std::cos(theta), st = std::sin(theta);
  const ld sa = std::sin(alpha);
  const ld one_minus_cc = 2.0L * std::pow(std::sin(theta / 2.0L), 2) + 2.0L * ct * std::pow(std::sin(alpha / 2.0L), 2);
  const ld one_plus_cc = 1.0L + ct * ca;
  const ld cross = ca * ca * st * st / 4.0L;
  const ld bracket = (w.x - one_plus_cc / 2.0L) * (w.y - one_minus_cc / 2.0L) - cross;
  return static_cast<double>(4.0L / (sa * sa) * bracket);
}

double det_e3_via_trace(const ProtocolParams& params, PovmWeights w) {
  return tr_e3(params, w) - 1.0 + 4.0 * w.x * w.y / std::pow(std::sin(params.alpha()), 2);
}

double delta(const ProtocolParams& params) {
  if (params.is_bell()) return 0.0;
  const double ca = std::cos(params.alpha());
  const double st = std::sin(params.theta());
  const double ct = std::cos(params.theta());
  return ca * st * (ca * (st + ct) - 1.0) / (2.0 * (1.0 - ct * ca));
}

double case_indicator(const ProtocolParams& params) {
  return cos_alpha(params) * (std::sin(params.theta()) + std::cos(params.theta()));
}

CaseLabel classify(const ProtocolParams& params) {
  const double k = case_indicator(params);
  if (k < 1.0 - kCaseBand) return CaseLabel::CaseI;
  if (k > 1.0 + kCaseBand) return CaseLabel::CaseII;
  return CaseLabel::Boundary;
}

double pmax_case_one(const ProtocolParams& params) {
  return 1.0 - std::sin(params.theta()) * cos_alpha(params);
}

double pmax_case_two(const ProtocolParams& params) {
  return std::pow(std::sin(params.alpha()), 2) /
         (2.0 * (1.0 - std::cos(params.theta()) * cos_alpha(params)));
}

OptimumResult optimum(const ProtocolParams& params) {
  const CaseLabel label = classify(params);
  const double ca = cos_alpha(params);
  const double ct = std::cos(params.theta());
  const double st = std::sin(params.theta());
  if (label == CaseLabel::CaseII) {
    const double x = pmax_case_two(params);
    return {label, x, 0.0, x};
  }
  // Case I and the boundary band share the tangent-point solution.
  const double x = (1.0 + ct * ca - st * ca) / 2.0;
  const double y = std::max(0.0, (1.0 - ct * ca - st * ca) / 2.0);
  return {label, x, y, x + y};
}

OracleResult pmax_oracle(const ProtocolParams& params, double resolution) {
  if (!(resolution >= 1e-7 && resolution <= 1e-2))
    throw std::invalid_argument("pmax_oracle: resolution must lie in [1e-7, 1e-2]");

  auto feasible = [&](double x, double y) {
    return hermitian_eig2(build_povm(params, {x, y}).e3).values[0] >= -kPsdTol;
  };
  // Largest feasible y at fixed x; the feasible set is convex, so {y} is an interval from 0.
  auto best_at = [&](double x) -> OracleResult {
    if (x < 0.0 || x > kOracleBox || !feasible(x, 0.0)) return {x, 0.0, -1.0};
    double lo = 0.0, hi = kOracleBox;
    if (feasible(x, hi)) lo = hi;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
      const double mid = 0.5 * (lo + hi);
      (feasible(x, mid) ? lo : hi) = mid;
    }
    return {x, lo, x + lo};
  };

  OracleResult best = best_at(0.0);
  auto consider = [&](double x) {
    const OracleResult r = best_at(x);
    if (r.p > best.p || (r.p == best.p && x < best.x)) best = r;
  };

  // x + y_max(x) is concave, so each level only needs the neighbourhood of the incumbent.
  double step = 0.005;
  const int coarse = static_cast<int>(std::lround(kOracleBox / step));
  for (int i = 1; i <= coarse; ++i) consider(i * step);

  constexpr int kShrink = 8;
  while (step >= resolution) {
    const double fine = step / kShrink;
    const double cx = best.x;
    for (int i = -kShrink; i <= kShrink; ++i) consider(cx + i * fine);
    step = fine;
  }
  return best;
}

double bell_conversion_prob(double alpha) {
  if (!(alpha > 0.0) || alpha > kHalfPi + kAngleSlack)
    throw std::domain_error("alpha = " + fmt_angle(alpha) + " outside (0, pi/2]");
  return 2.0 * std::pow(std::sin(alpha / 2.0), 2);
}

Matrix target_gate(double theta) {
  const Complex c = std::cos(theta / 2.0);
  const Complex is = Complex(0.0, std::sin(theta / 2.0));
  const std::array<Complex, 4> d = {c + is, c - is, c - is, c + is};
  return Matrix::diagonal(d);
}

}  // namespace crot
