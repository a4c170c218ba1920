#include "crot/protocol.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "crot/entanglement.hpp"

namespace crot {

namespace {

constexpr Qubit kA = Qubit::AliceAncilla;
constexpr Qubit kTA = Qubit::AliceTarget;
constexpr Qubit kTB = Qubit::BobTarget;
constexpr Qubit kB = Qubit::BobAncilla;

constexpr std::array<Qubit, 4> kRegisterOrder = {kA, kTA, kTB, kB};
constexpr std::array<Qubit, 2> kTargets = {kTA, kTB};

// |0><0| (x) I + |1><1| (x) Z; symmetric in its two qubits.
const Matrix& controlled_phase() {
  static const Matrix cz = [] {
    const std::array<Complex, 4> d = {1.0, 1.0, 1.0, -1.0};
    return Matrix::diagonal(d);
  }();
  return cz;
}

const Matrix& pauli_z() {
  static const Matrix z(gates::pauli_z());
  return z;
}

std::array<Complex, 2> normalized(const std::array<double, 2>& v) {
  const double n = std::hypot(v[0], v[1]);
  return {v[0] / n, v[1] / n};
}

}  // namespace

PartyRole owner_of(Qubit q) {
  return (q == Qubit::AliceAncilla || q == Qubit::AliceTarget) ? PartyRole::Alice : PartyRole::Bob;
}

std::string_view role_name(PartyRole r) { return r == PartyRole::Alice ? "Alice" : "Bob"; }

std::string describe(const ClassicalMessage& m) {
  std::string s(role_name(m.from));
  s += "->";
  s += role_name(m.to);
  s += ' ';
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, XResult>) {
          s += "x:" + std::string(p.sign > 0 ? "+1" : "-1");
        } else if constexpr (std::is_same_v<T, PovmResult>) {
          s += "povm:" + std::to_string(p.branch);
        } else {
          s += "z:" + std::to_string(p.bit);
        }
      },
      m.payload);
  return s;
}

// ---- SharedRegister / Party -------------------------------------------------

void SharedRegister::share_pair(const StateVector& pair) {
  const std::vector<Qubit> ab = {kA, kB};
  if (pair.labels() != ab) throw std::invalid_argument("share_pair: pair must be on (a, b)");
  const StateVector targets = state_.reordered(kTargets);
  state_ = tensor(pair, targets).reordered(kRegisterOrder);
}

void Party::check_owned(std::span<const Qubit> qs) const {
  for (Qubit q : qs) {
    if (owner_of(q) != role_) {
      throw std::logic_error(std::string(role_name(role_)) + " cannot act on qubit '" + qubit_char(q) + "'");
    }
  }
}

void Party::log(std::string name, std::vector<Qubit> qs) {
  reg_->audit_.push_back({role_, std::move(name), std::move(qs)});
}

void Party::apply(std::string name, const Matrix& gate, std::initializer_list<Qubit> targets) {
  const std::span<const Qubit> ts(targets.begin(), targets.size());
  check_owned(ts);
  reg_->state_ = apply_gate(reg_->state_, gate, ts);
  log(std::move(name), std::vector<Qubit>(targets));
}

int Party::measure_and_discard(std::string name, Qubit q, const std::array<std::array<Complex, 2>, 2>& basis,
                               CounterRng& rng) {
  const std::array<Qubit, 1> qs = {q};
  check_owned(qs);
  StateVector b0 = reg_->state_.contract(q, basis[0]);
  StateVector b1 = reg_->state_.contract(q, basis[1]);
  const double p0 = b0.norm_squared();
  const double p1 = b1.norm_squared();
  const int outcome = rng.uniform() * (p0 + p1) < p0 ? 0 : 1;
  reg_->state_ = (outcome == 0 ? b0 : b1).normalized();
  log(std::move(name), {q});
  return outcome;
}

void Party::apply_kraus(std::string name, const Mat2& kraus, Qubit q) {
  const std::array<Qubit, 1> qs = {q};
  check_owned(qs);
  reg_->state_ = apply_gate(reg_->state_, Matrix(kraus), qs).normalized();
  log(std::move(name), {q});
}

void Party::discard(std::string name, Qubit q, const std::array<Complex, 2>& ket) {
  const std::array<Qubit, 1> qs = {q};
  check_owned(qs);
  reg_->state_ = reg_->state_.contract(q, ket).normalized();
  log(std::move(name), {q});
}

const ClassicalMessage& Party::send(MessagePayload payload) {
  const bool from_alice = std::holds_alternative<XResult>(payload);
  if (from_alice != (role_ == PartyRole::Alice))
    throw std::logic_error(std::string(role_name(role_)) + " cannot send this message kind");
  const PartyRole to = role_ == PartyRole::Alice ? PartyRole::Bob : PartyRole::Alice;
  reg_->transcript_.push_back({role_, to, payload});
  return reg_->transcript_.back();
}

const MessagePayload& Party::receive(const ClassicalMessage& m) const {
  if (m.to != role_) throw std::logic_error(std::string(role_name(role_)) + " received a message for the other party");
  return m.payload;
}

// ---- States -----------------------------------------------------------------

StateVector prepare_resource(double alpha) {
  if (!(alpha > 0.0) || alpha > std::numbers::pi / 2.0 + 1e-12)
    throw std::domain_error("prepare_resource: alpha outside (0, pi/2]");
  const double c = std::cos(alpha / 2.0);
  const double s = std::sin(alpha / 2.0);
  return StateVector({kA, kB}, {c, 0.0, 0.0, Complex(0.0, s)});
}

StateVector initial_register(double alpha, const StateVector& input) {
  return tensor(prepare_resource(alpha), input.reordered(kTargets)).reordered(kRegisterOrder);
}

StateVector random_target_state(CounterRng& rng) {
  std::vector<Complex> amps(4);
  for (Complex& c : amps) {
    const double re = rng.normal();
    const double im = rng.normal();
    c = Complex(re, im);
  }
  return StateVector({kTA, kTB}, std::move(amps)).normalized();
}

// ---- Protocol steps ---------------------------------------------------------

ClassicalMessage step1_alice(SharedRegister& reg, CounterRng& rng) {
  Party alice(PartyRole::Alice, reg);
  alice.apply("cphase", controlled_phase(), {kA, kTA});
  const double h = std::numbers::sqrt2 / 2.0;
  const int k = alice.measure_and_discard("measure_x", kA, {{{h, h}, {h, -h}}}, rng);
  return alice.send(XResult{k == 0 ? +1 : -1});
}

void step2_bob(SharedRegister& reg, const ClassicalMessage& msg) {
  Party bob(PartyRole::Bob, reg);
  const auto* x = std::get_if<XResult>(&bob.receive(msg));
  if (x == nullptr) throw std::invalid_argument("step2_bob: expected Alice's X-measurement result");
  if (x->sign < 0) bob.apply("z", pauli_z(), {kB});
}

void step3_bob(SharedRegister& reg) {
  Party bob(PartyRole::Bob, reg);
  bob.apply("cphase", controlled_phase(), {kB, kTB});
}

int step4_bob_povm(SharedRegister& reg, const PovmSet& povm, CounterRng& rng) {
  if (!povm.valid) throw std::invalid_argument("step4_bob_povm: POVM elements are not all positive");
  const std::array<Mat2, 3> kraus = {psd_sqrt2(povm.e1), psd_sqrt2(povm.e2), psd_sqrt2(povm.e3)};
  const std::array<Qubit, 1> b = {kB};
  std::array<double, 3> p{};
  for (std::size_t k = 0; k < 3; ++k) p[k] = apply_gate(reg.state(), Matrix(kraus[k]), b).norm_squared();

  const double u = rng.uniform() * (p[0] + p[1] + p[2]);
  const int branch = u < p[0] ? 1 : (u < p[0] + p[1] ? 2 : 3);

  Party bob(PartyRole::Bob, reg);
  bob.apply_kraus("povm_" + std::to_string(branch), kraus[static_cast<std::size_t>(branch - 1)], kB);
  if (branch != 3) {
    // E1 and E2 are rank one, so b is left in phi1 or phi2 and factors out.
    const PhiVectors phi = phi_vectors(povm.params);
    bob.discard("discard", kB, normalized(branch == 1 ? phi.phi1 : phi.phi2));
  }
  return branch;
}

void finish_success(SharedRegister& reg, int branch) {
  if (branch != 1 && branch != 2) throw std::invalid_argument("finish_success: branch must be 1 or 2");
  Party bob(PartyRole::Bob, reg);
  Party alice(PartyRole::Alice, reg);
  const ClassicalMessage msg = bob.send(PovmResult{branch});
  if (branch == 2) bob.apply("z", pauli_z(), {kTB});
  const auto& payload = std::get<PovmResult>(alice.receive(msg));
  if (payload.branch == 2) alice.apply("z", pauli_z(), {kTA});
}

ResidualGate failure_residual(SharedRegister& reg, const PovmSet& povm, CounterRng& rng) {
  if (!reg.state().has(kB)) throw std::invalid_argument("failure_residual: qubit b is gone; branch 3 did not occur");
  Party bob(PartyRole::Bob, reg);
  Party alice(PartyRole::Alice, reg);
  alice.receive(bob.send(PovmResult{3}));

  const int j = bob.measure_and_discard("measure_z", kB, {{{1.0, 0.0}, {0.0, 1.0}}}, rng);
  alice.receive(bob.send(BasisResult{j}));

  // <j| sqrt(E3) |Psi'> = r_j0 cos(alpha/2) Phi + i r_j1 sin(alpha/2) ZZ Phi with
  // real r, i.e. a controlled rotation up to normalization.
  const Mat2 root = psd_sqrt2(povm.e3);
  const auto ju = static_cast<std::size_t>(j);
  const double a = root(ju, 0).real() * std::cos(povm.params.alpha() / 2.0);
  const double b = root(ju, 1).real() * std::sin(povm.params.alpha() / 2.0);
  return {wrap_angle(2.0 * std::atan2(b, a)), j};
}

double wrap_angle(double angle) {
  double r = std::remainder(angle, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

double remaining_angle(double theta, double theta_f) { return wrap_angle(theta - theta_f); }

int recover_with_bell(SharedRegister& reg, double theta_remaining, CounterRng& rng) {
  int pairs = 0;
  double angle = wrap_angle(theta_remaining);
  while (std::abs(angle) > 1e-14) {
    const ProtocolParams bell = ProtocolParams::bell(angle);
    const OptimumResult opt = optimum(bell);
    const PovmSet povm = build_povm(bell, {opt.x, opt.y});

    reg.share_pair(prepare_resource(bell.alpha()));
    ++pairs;
    const ClassicalMessage m = step1_alice(reg, rng);
    step2_bob(reg, m);
    step3_bob(reg);
    const int branch = step4_bob_povm(reg, povm, rng);
    if (branch != 3) {
      finish_success(reg, branch);
      break;
    }
    // Only reachable through rounding in E3 = I - E1 - E2.
    angle = remaining_angle(angle, failure_residual(reg, povm, rng).theta_f);
  }
  return pairs;
}

RunOutcome run_once(const ProtocolParams& params, PovmWeights weights, const StateVector& input,
                    CounterRng& rng, RunOptions options) {
  const PovmSet povm = build_povm(params, weights);
  if (!povm.valid) throw std::invalid_argument("run_once: infeasible POVM weights");

  SharedRegister reg(initial_register(params.alpha(), input));
  const ClassicalMessage m = step1_alice(reg, rng);
  step2_bob(reg, m);
  step3_bob(reg);

  RunOutcome out;
  out.rng_seed = rng.seed();
  out.rng_stream = rng.stream();
  out.branch = step4_bob_povm(reg, povm, rng);
  if (out.success()) {
    finish_success(reg, out.branch);
  } else {
    out.residual = failure_residual(reg, povm, rng);
    out.residual_state = reg.state().reordered(kTargets);
    if (options.deterministic) {
      out.bell_pairs_consumed =
          recover_with_bell(reg, remaining_angle(params.theta(), out.residual->theta_f), rng);
    }
  }
  out.final_state = reg.state().reordered(kTargets);
  out.transcript = reg.transcript();
  out.audit = reg.audit();
  return out;
}

// ---- Monte Carlo ------------------------------------------------------------

MonteCarloSummary monte_carlo(const ProtocolParams& params, PovmWeights weights, std::size_t trials,
                              std::uint64_t seed, bool deterministic, InputSpec input) {
  if (trials == 0) throw std::invalid_argument("monte_carlo: trials must be >= 1");
  const Matrix gate = target_gate(params.theta());

  MonteCarloSummary s;
  s.trials = trials;
  s.seed = seed;
  s.analytic_p = weights.x + weights.y;

  double fidelity_sum = 0.0;
  std::size_t fidelity_count = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    CounterRng rng(seed, i);
    const StateVector phi =
        input.basis_index ? StateVector::basis({kTA, kTB}, *input.basis_index) : random_target_state(rng);
    const RunOutcome run = run_once(params, weights, phi, rng, {deterministic});
    const StateVector ideal = apply_gate(phi, gate, kTargets);

    ++s.branch_counts[static_cast<std::size_t>(run.branch - 1)];
    pairs += static_cast<std::size_t>(run.bell_pairs_consumed);
    if (run.success()) ++s.success_count;
    if (run.success() || deterministic) {
      const double f = fidelity(ideal, run.final_state);
      fidelity_sum += f;
      ++fidelity_count;
      s.min_fidelity = std::min(s.min_fidelity, f);
    }
    if (run.residual) {
      const StateVector predicted = apply_gate(phi, target_gate(run.residual->theta_f), kTargets);
      s.min_residual_fidelity = std::min(s.min_residual_fidelity, fidelity(predicted, *run.residual_state));
    }
  }

  const double n = static_cast<double>(trials);
  s.empirical_p = static_cast<double>(s.success_count) / n;
  const double sigma = std::sqrt(s.analytic_p * (1.0 - s.analytic_p) / n);
  const double diff = s.empirical_p - s.analytic_p;
  if (sigma > 0.0) {
    s.z_score = diff / sigma;
  } else {
    s.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  s.mean_fidelity = fidelity_count ? fidelity_sum / static_cast<double>(fidelity_count) : 0.0;
  if (fidelity_count == 0) s.min_fidelity = 0.0;
  s.mean_bell_pairs = static_cast<double>(pairs) / n;
  s.mean_ebits = e_alpha(params.alpha()) + s.mean_bell_pairs;
  return s;
}

MonteCarloSummary monte_carlo(const ProtocolParams& params, std::size_t trials, std::uint64_t seed,
                              bool deterministic, InputSpec input) {
  const OptimumResult opt = optimum(params);
  return monte_carlo(params, {opt.x, opt.y}, trials, seed, deterministic, input);
}

}  // namespace crot
