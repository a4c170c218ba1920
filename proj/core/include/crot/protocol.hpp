#pragma once

// Four-step LOCC protocol implementing U(theta) on (A, B) with one shared
// partially entangled pair (a, b):
//
//   1. Alice: controlled-phase a -> A, measure X on a, send the sign.
//   2. Bob:   Z on b if the sign was -1.
//   3. Bob:   controlled-phase b -> B.
//   4. Bob:   three-outcome POVM on b. Outcome 1 leaves U(theta), outcome 2
//             leaves -i Z_A Z_B U(theta) (fixed by local Z on each side),
//             outcome 3 leaves a known controlled rotation U(theta_f).
//
// Both parties share one simulated StateVector, but every gate goes through a
// Party handle that rejects qubits owned by the other side, and every
// cross-party dependency travels as a ClassicalMessage.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "crot/model.hpp"
#include "crot/qmath.hpp"
#include "crot/rng.hpp"

namespace crot {

enum class PartyRole { Alice, Bob };

PartyRole owner_of(Qubit q);
std::string_view role_name(PartyRole r);

struct XResult {
  int sign;  // +1 or -1
  bool operator==(const XResult&) const = default;
};
struct PovmResult {
  int branch;  // 1, 2 or 3
  bool operator==(const PovmResult&) const = default;
};
struct BasisResult {
  int bit;  // 0 or 1
  bool operator==(const BasisResult&) const = default;
};

using MessagePayload = std::variant<XResult, PovmResult, BasisResult>;

struct ClassicalMessage {
  PartyRole from;
  PartyRole to;
  MessagePayload payload;
  bool operator==(const ClassicalMessage&) const = default;
};

std::string describe(const ClassicalMessage& m);

/// One local action recorded for the LOCC audit.
struct LocalOp {
  PartyRole party;
  std::string name;
  std::vector<Qubit> qubits;
  bool operator==(const LocalOp&) const = default;
};

/// Residual controlled rotation left on (A, B) after outcome 3, given the
/// computational-basis outcome on b.
struct ResidualGate {
  double theta_f;  // in (-pi, pi]
  int b_outcome;
};

/// Simulation-side container: the joint state, the message transcript and
/// the audit trail. Only Party handles mutate the state.
class SharedRegister {
 public:
  explicit SharedRegister(StateVector state) : state_(std::move(state)) {}

  const StateVector& state() const { return state_; }
  const std::vector<ClassicalMessage>& transcript() const { return transcript_; }
  const std::vector<LocalOp>& audit() const { return audit_; }

  /// Distributes a fresh pair on (a, b) to a register holding only (A, B);
  /// the result is ordered (a, A, B, b).
  void share_pair(const StateVector& pair);

 private:
  friend class Party;
  StateVector state_;
  std::vector<ClassicalMessage> transcript_;
  std::vector<LocalOp> audit_;
};

class Party {
 public:
  Party(PartyRole role, SharedRegister& reg) : role_(role), reg_(&reg) {}

  PartyRole role() const { return role_; }

  /// Throws std::logic_error if a target belongs to the other party.
  void apply(std::string name, const Matrix& gate, std::initializer_list<Qubit> targets);

  /// Measures `q` in the orthonormal basis {basis[0], basis[1]} (Born rule),
  /// removes it from the register and returns the outcome index.
  int measure_and_discard(std::string name, Qubit q, const std::array<std::array<Complex, 2>, 2>& basis,
                          CounterRng& rng);

  /// Replaces the state with (K_q state)/||K_q state|| for a local Kraus operator.
  void apply_kraus(std::string name, const Mat2& kraus, Qubit q);

  /// Removes `q`, assuming it factors out as `ket` (it is projected onto ket).
  void discard(std::string name, Qubit q, const std::array<Complex, 2>& ket);

  const ClassicalMessage& send(MessagePayload payload);

  /// Throws std::logic_error if `m` was not addressed to this party.
  const MessagePayload& receive(const ClassicalMessage& m) const;

 private:
  void check_owned(std::span<const Qubit> qs) const;
  void log(std::string name, std::vector<Qubit> qs);

  PartyRole role_;
  SharedRegister* reg_;
};

/// cos(alpha/2)|00> + i sin(alpha/2)|11> on (a, b).
StateVector prepare_resource(double alpha);

/// Register (a, A, B, b) holding resource(alpha) and `input` on (A, B).
StateVector initial_register(double alpha, const StateVector& input);

/// Haar-random pure state on (A, B).
StateVector random_target_state(CounterRng& rng);

/// Step 1: Alice's controlled phase and X measurement; `a` is discarded and
/// the sign message is sent to Bob.
ClassicalMessage step1_alice(SharedRegister& reg, CounterRng& rng);

/// Step 2: Bob applies I or Z on b. Throws std::invalid_argument unless the
/// message is an XResult.
void step2_bob(SharedRegister& reg, const ClassicalMessage& msg);

/// Step 3: Bob's controlled phase b -> B.
void step3_bob(SharedRegister& reg);

/// Step 4: samples a POVM branch with Kraus operators sqrt(E_k) on b. On
/// branches 1 and 2 qubit b is discarded. Throws std::invalid_argument if the
/// POVM is not valid.
int step4_bob_povm(SharedRegister& reg, const PovmSet& povm, CounterRng& rng);

/// Bob announces the branch; on branch 2 both sides apply Z to their target.
/// Throws std::invalid_argument for branch 3.
void finish_success(SharedRegister& reg, int branch);

/// After branch 3: Bob announces the failure, measures b in the computational
/// basis and reports the bit. Returns the residual rotation on (A, B).
ResidualGate failure_residual(SharedRegister& reg, const PovmSet& povm, CounterRng& rng);

/// Runs the protocol again on a fresh Bell pair with angle `theta_remaining`
/// (skipped when it is zero). Returns the number of Bell pairs consumed.
int recover_with_bell(SharedRegister& reg, double theta_remaining, CounterRng& rng);

/// theta - theta_f wrapped into (-pi, pi].
double remaining_angle(double theta, double theta_f);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

struct RunOutcome {
  int branch = 0;
  std::vector<ClassicalMessage> transcript;
  std::vector<LocalOp> audit;
  StateVector final_state = StateVector::basis({Qubit::AliceTarget, Qubit::BobTarget}, 0);  // on (A, B)
  std::optional<ResidualGate> residual;
  std::optional<StateVector> residual_state;  // (A, B) right after the failure measurement
  int bell_pairs_consumed = 0;
  std::uint64_t rng_seed = 0;
  std::uint64_t rng_stream = 0;

  bool success() const { return branch == 1 || branch == 2; }
};

struct RunOptions {
  bool deterministic = false;  // recover failures with a Bell pair
};

RunOutcome run_once(const ProtocolParams& params, PovmWeights weights, const StateVector& input,
                    CounterRng& rng, RunOptions options = {});

/// Target state for the Monte Carlo driver: a computational basis index on
/// (A, B), or a fresh Haar-random state per trial.
struct InputSpec {
  std::optional<std::size_t> basis_index;
  static InputSpec random() { return {}; }
  static InputSpec basis(std::size_t index) { return {index}; }
};

struct MonteCarloSummary {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t success_count = 0;
  std::array<std::size_t, 3> branch_counts{};
  double empirical_p = 0.0;
  double analytic_p = 0.0;
  double z_score = 0.0;
  /// Fidelity against U(theta)|input> over runs that reached the target
  /// (success branches, or every run in deterministic mode).
  double mean_fidelity = 0.0;
  double min_fidelity = 1.0;
  /// Over failure branches: fidelity of U(theta_f)|input> vs the actual state.
  double min_residual_fidelity = 1.0;
  double mean_bell_pairs = 0.0;
  double mean_ebits = 0.0;  // E_alpha + mean Bell pairs
};

/// Trial i draws from stream i of `seed`; aggregation is in trial order.
MonteCarloSummary monte_carlo(const ProtocolParams& params, PovmWeights weights, std::size_t trials,
                              std::uint64_t seed, bool deterministic, InputSpec input = InputSpec::random());

/// Same, with the optimal weights for `params`.
MonteCarloSummary monte_carlo(const ProtocolParams& params, std::size_t trials, std::uint64_t seed,
                              bool deterministic, InputSpec input = InputSpec::random());

}  // namespace crot
