#pragma once

#include <string>
#include <vector>

#include "nonsig/network.hpp"
#include "nonsig/resource.hpp"

namespace nonsig {

/// Party slots of tripartite inequalities.
inline constexpr std::size_t kA = 0, kB = 1, kC = 2;

/// coefficient * <prod_{i} P_i(setting_i)>. Parties are kept sorted, with
/// settings (alphabet indices) in the same order. Outcome index 0 is read as
/// +1 and index 1 as -1.
struct CorrelatorTerm {
  Rational coefficient;
  std::vector<std::size_t> parties;
  std::vector<std::size_t> settings;

  friend bool operator==(const CorrelatorTerm&, const CorrelatorTerm&) = default;
};

/// sum of terms <= bound, over behaviors with `settings_per_party[p]`
/// settings and two outcomes for every party.
struct LinearInequality {
  std::string name;
  std::vector<std::size_t> settings_per_party;
  std::vector<CorrelatorTerm> terms;
  Rational bound;
};

/// Term with parties sorted; throws InputError on repeated parties.
CorrelatorTerm make_term(Rational coefficient, std::vector<std::size_t> parties, std::vector<std::size_t> settings);

/// Expectation of the product of +-1 outcomes of `parties` at `settings`, with
/// every other party's setting held at its first value. Signaling behaviors are
/// refused.
template <class Scalar>
Scalar correlator(const BasicResource<Scalar>& b, std::span<const std::size_t> parties,
                  std::span<const std::size_t> settings, double tolerance = 1e-9);

template <class Scalar>
struct Evaluation {
  Scalar value;
  bool satisfied = false;
};

/// Throws InputError when the behavior does not match the inequality's
/// signature.
template <class Scalar>
Evaluation<Scalar> evaluate(const LinearInequality& ineq, const BasicResource<Scalar>& b, double tolerance = 1e-9);

/// Value of the left-hand side on a behavior already known to be nonsignaling
/// and of matching signature (no checks); used by exhaustive sweeps.
Rational lhs_unchecked(const LinearInequality& ineq, const Behavior& b);

// ---- the tripartite inequalities ---------------------------------------------

/// <A0B0> + <A0B1> + <A1B0C1> - <A1B1C1> + 2<A0C0> <= 4
LinearInequality mao_inequality();
/// <A0B0> + <A0B1> + <A1B0C1> - <A1B1C1> + 4<A0C0> <= 6
LinearInequality chao_reichardt_correlator();
/// <A0B0> - <A0B1> + <A1B0C1> + <A1B1C1> + 2<A0C0> <= 4
LinearInequality relabeled_mao();
/// <A0B0> + <B0C0> - <A0B1> - <B1C0> + 4<A0C0> + 2<A1B0C1> + 2<A1B1C1> <= 8
LinearInequality cao_inequality();
/// <A0B0> + <A0B1> + <A1B0C1> - <A1B1C1> + <A0B2> + <B2C0> <= 6 on settings
/// (2,3,2): the form obtained by expanding the conditional terms.
LinearInequality cao_s14_linearized();

/// 4P(A!=C|x=0,z=0) + P(A!=B|00) + P(A!=B|01) + P(ABC=-1|101) + P(ABC=+1|111),
/// satisfied when >= 1. Computed from probabilities directly.
template <class Scalar>
Evaluation<Scalar> chao_reichardt_probability_form(const BasicResource<Scalar>& b, double tolerance = 1e-9);

/// Settings (2,3,2):
///   P(C=-1|Z=1) (<A0B0> + <A0B1> - <A1B0> + <A1B1>)_{C=-1,Z=1}
/// + P(C=+1|Z=1) (<A0B0> + <A0B1> + <A1B0> - <A1B1>)_{C=+1,Z=1}
/// + <A0B2> + <B2C0>,  satisfied when <= 6.
/// A product whose prefactor P(C=c|Z=1) vanishes is taken as 0.
template <class Scalar>
Evaluation<Scalar> evaluate_cao_s14(const BasicResource<Scalar>& b, double tolerance = 1e-9);

/// The two conditional lines of `evaluate_cao_s14` alone.
template <class Scalar>
Scalar cao_s14_conditional_part(const BasicResource<Scalar>& b);

// ---- transforms -----------------------------------------------------------------

/// Negates every term that involves `party` at `setting`.
LinearInequality relabel_output(const LinearInequality& ineq, std::size_t party, std::size_t setting);
/// Exchanges the roles of parties p and q.
LinearInequality swap_parties(const LinearInequality& ineq, std::size_t p, std::size_t q);
/// Sum of both sides; terms with equal support are merged, zero terms dropped.
LinearInequality add(const LinearInequality& a, const LinearInequality& b);
LinearInequality scale(const LinearInequality& ineq, const Rational& factor);
/// <prod parties(settings)> <= 1.
LinearInequality correlator_bound(std::vector<std::size_t> settings_per_party, std::vector<std::size_t> parties,
                                  std::vector<std::size_t> settings);
/// No terms, bound 0.
LinearInequality zero_inequality(std::vector<std::size_t> settings_per_party);

/// Behavior counterparts of the transforms (for the commutation law).
Behavior relabel_behavior(const Behavior& b, std::size_t party, std::size_t setting);
Behavior swap_behavior_parties(const Behavior& b, std::size_t p, std::size_t q);

/// Signature of a behavior with the given settings counts and two outcomes
/// per party; parties are named A, B, C, ...
Signature binary_signature(const std::vector<std::size_t>& settings_per_party);

/// Every deterministic behavior of that signature (64 for (2,2,2) settings on
/// three parties, 128 for (2,3,2)).
std::vector<Behavior> deterministic_behaviors(const std::vector<std::size_t>& settings_per_party);

// ---- derivation chain -------------------------------------------------------------

/// Literal transcriptions checked by the chain; replace any of them to run a
/// negative control.
struct DerivationInputs {
  LinearInequality mao = mao_inequality();
  LinearInequality mao_relabeled = relabeled_mao();
  LinearInequality cao = cao_inequality();
  LinearInequality cr_correlator = chao_reichardt_correlator();
  LinearInequality cao_linear = cao_s14_linearized();
};

struct DerivationStep {
  std::string id;
  std::string description;
  bool passed = false;
  std::size_t vertices_checked = 0;
  /// Largest discrepancy (identity steps) or smallest slack (step f).
  Rational extreme;
  /// Index of the deterministic behavior attaining `extreme`.
  std::size_t witness = 0;
  std::string detail;
};

struct DerivationReport {
  std::vector<DerivationStep> steps;
  bool passed() const;
};

/// Checks each step as an identity of linear functionals on every
/// deterministic behavior (which span all behaviors):
///  a) mao_relabeled = relabel_output(mao, B, 1)
///  b) cao = mao_relabeled + swap_parties(mao_relabeled, A, C)
///  c) CR correlator form = mao + 2 (<A0C0> <= 1)
///  d) CR probability form = 4 - (CR correlator form)/2
///  e) the conditional lines of the (2,3,2) form equal its first four linear terms
///  f) <A0C0> - <A0B2> - <B2C0> + 1 >= 0
DerivationReport verify_derivation_chain(const DerivationInputs& inputs = {});

}  // namespace nonsig
