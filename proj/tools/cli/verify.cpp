#include "cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cli/angles.hpp"
#include "crot/entanglement.hpp"
#include "crot/protocol.hpp"

namespace crot::cli {
namespace {

constexpr double pi = std::numbers::pi;

ProtocolParams random_params(CounterRng& rng) {
  return ProtocolParams(0.01 + (pi / 2 - 0.01) * rng.uniform(), 0.01 + (pi / 2 - 0.01) * rng.uniform());
}

// Entry scale of E3: the closed forms are compared relative to it.
double e3_scale(const ProtocolParams& p, PovmWeights w) {
  const PhiVectors v = phi_vectors(p);
  const double n1 = v.phi1[0] * v.phi1[0] + v.phi1[1] * v.phi1[1];
  const double n2 = v.phi2[0] * v.phi2[0] + v.phi2[1] * v.phi2[1];
  return 1.0 + w.x * n1 + w.y * n2;
}

CheckResult result(std::string name, double worst, double limit) {
  return {std::move(name), worst <= limit, "max err " + format_number(worst) + " (limit " + format_number(limit) + ")"};
}

template <class ClosedForm, class Direct>
CheckResult matrix_agreement(std::string name, int power, ClosedForm closed, Direct direct) {
  CounterRng rng(0x7e3);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const ProtocolParams p = random_params(rng);
    const PovmWeights w{rng.uniform(), rng.uniform()};
    const PovmSet povm = build_povm(p, w);
    const double err = std::abs(closed(p, w) - direct(povm)) / std::pow(e3_scale(p, w), power);
    worst = std::max(worst, err);
  }
  return result(std::move(name), worst, 1e-12);
}

CheckResult optimum_feasible() {
  double worst = 0.0;
  for (int i = 1; i <= 40; ++i)
    for (int j = 1; j <= 40; ++j) {
      const ProtocolParams p(i * (pi / 2) / 40, j * (pi / 2) / 40);
      const OptimumResult opt = optimum(p);
      const PovmSet povm = build_povm(p, {opt.x, opt.y});
      if (!povm.valid) return {"optimum_feasible", false, "infeasible optimum at (" + format_number(p.theta()) + ", " + format_number(p.alpha()) + ")"};
      worst = std::max(worst, std::abs(opt.x + opt.y - opt.p_max));
    }
  return result("optimum_feasible", worst, 1e-15);
}

CheckResult boundary_continuity() {
  double worst = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double theta = k * (pi / 2) / 101;
    const double alpha = std::acos(1.0 / (std::sin(theta) + std::cos(theta)));
    const ProtocolParams p(theta, alpha);
    worst = std::max(worst, std::abs(pmax_case_one(p) - pmax_case_two(p)));
  }
  return result("boundary_continuity", worst, 1e-12);
}

CheckResult landmarks() {
  double worst = 0.0;
  for (int k = 1; k <= 50; ++k) {
    const double alpha = k * (pi / 2) / 50;
    worst = std::max(worst, std::abs(optimum(ProtocolParams(pi / 2, alpha)).p_max - (1 - std::cos(alpha))));
    const ProtocolParams bell(k * (pi / 2) / 50, pi / 2);
    if (optimum(bell).p_max != 1.0) return {"landmarks", false, "p_max != 1 for a Bell resource"};
    const OptimumResult o = optimum(bell);
    const Mat2 e3 = build_povm(bell, {o.x, o.y}).e3;
    for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(e3.m[i]));
  }
  worst = std::max(worst, std::abs(optimum(ProtocolParams(pi / 4, pi / 6)).p_max - 0.32247448713915890));
  return result("landmarks", worst, 1e-12);
}

CheckResult oracle_grid() {
  double worst = 0.0;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const ProtocolParams p(0.05 * pi + i * (0.45 * pi) / 19, 0.05 * pi + j * (0.45 * pi) / 19);
      worst = std::max(worst, std::abs(pmax_oracle(p, 1e-6).p - optimum(p).p_max));
    }
  return result("pmax_oracle_grid", worst, 1e-5);
}

CheckResult monte_carlo_z() {
  const std::pair<double, double> points[] = {{pi / 2, pi / 3}, {pi / 4, pi / 6}, {pi / 4, pi / 3}};
  double worst = 0.0;
  for (const auto& [theta, alpha] : points)
    for (std::uint64_t seed : {1, 2, 3})
      worst = std::max(worst, std::abs(monte_carlo(ProtocolParams(theta, alpha), 100000, seed, false).z_score));
  return result("monte_carlo_z", worst, 4.0);
}

CheckResult residual_reconstruction() {
  CounterRng rng(0x5e5);
  double worst = 0.0;
  int failures = 0;
  for (std::uint64_t t = 0; failures < 100 && t < 100000; ++t) {
    const ProtocolParams p = random_params(rng);
    const OptimumResult opt = optimum(p);
    const PovmWeights w{opt.x * rng.uniform(), opt.y * rng.uniform()};
    const StateVector phi = random_target_state(rng);
    CounterRng run_rng(0x5e5, t);
    const RunOutcome out = run_once(p, w, phi, run_rng, {.deterministic = true});
    worst = std::max(worst, 1.0 - fidelity(out.final_state, apply_gate(phi, target_gate(p.theta()), {Qubit::AliceTarget, Qubit::BobTarget})));
    if (out.success()) continue;
    ++failures;
    if (out.bell_pairs_consumed != 1) return {"residual_reconstruction", false, "recovery used more than one Bell pair"};
    const StateVector expected = apply_gate(phi, target_gate(out.residual->theta_f), {Qubit::AliceTarget, Qubit::BobTarget});
    worst = std::max(worst, 1.0 - fidelity(*out.residual_state, expected));
  }
  if (failures < 100) return {"residual_reconstruction", false, "too few failure branches sampled"};
  return result("residual_reconstruction", worst, 1e-10);
}

CheckResult threshold() {
  const double t = threshold_theta(1e-4) / pi;
  return {"threshold", t >= 0.232 && t <= 0.236, "theta*/pi = " + format_number(t) + " (expected [0.232, 0.236])"};
}

}  // namespace

std::vector<CheckResult> run_verify(VerifyLevel level, const VerifyHooks& hooks) {
  std::vector<CheckResult> out;
  out.push_back(matrix_agreement("tr_e3", 1, hooks.tr_e3, [](const PovmSet& s) { return s.e3.trace().real(); }));
  out.push_back(matrix_agreement("det_e3", 2, hooks.det_e3, [](const PovmSet& s) { return s.e3.det().real(); }));
  out.push_back(matrix_agreement("det_e3_via_trace", 2, crot::det_e3_via_trace,
                                 [](const PovmSet& s) { return s.e3.det().real(); }));
  out.push_back(optimum_feasible());
  out.push_back(boundary_continuity());
  out.push_back(landmarks());
  if (level == VerifyLevel::Full) {
    out.push_back(oracle_grid());
    out.push_back(monte_carlo_z());
    out.push_back(residual_reconstruction());
    out.push_back(threshold());
  }
  return out;
}

}  // namespace crot::cli
