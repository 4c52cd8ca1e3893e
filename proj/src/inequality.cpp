#include "nonsig/inequality.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <type_traits>

#include "nonsig/decompose.hpp"
#include "nonsig/error.hpp"

namespace nonsig {

namespace {

template <class Scalar>
Scalar from_rational(const Rational& q) {
  if constexpr (std::is_same_v<Scalar, double>)
    return q.get_d();
  else
    return q;
}

template <class Scalar>
void require_nonsignaling(const BasicResource<Scalar>& b, double tolerance) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    if (b.nonsignaling_checked()) return;
  }
  auto report = validate_nonsignaling(b, tolerance);
  if (!report.ok) throw DomainError("behavior is signaling, correlators are ambiguous: " + report.message);
}

template <class Scalar>
void require_binary(const BasicResource<Scalar>& b, std::span<const std::size_t> parties) {
  for (std::size_t p : parties) {
    if (p >= b.party_count()) throw InputError("correlator: party index out of range");
    if (b.signature().outputs(p).size() != 2)
      throw InputError("correlator: party '" + b.signature().party(p) + "' does not have two outcomes");
  }
}

/// Correlator without validation. Outcome index 1 contributes a factor -1.
template <class Scalar>
Scalar correlator_raw(const BasicResource<Scalar>& b, std::span<const std::size_t> parties,
                      std::span<const std::size_t> settings) {
  IndexTuple full(b.party_count(), 0);
  for (std::size_t k = 0; k < parties.size(); ++k) full[parties[k]] = settings[k];
  const auto dist = marginal_distribution(b, parties, full);
  Scalar e = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (std::popcount(i) % 2 == 0)
      e += dist[i];
    else
      e -= dist[i];
  }
  return e;
}

template <class Scalar>
void require_signature(const BasicResource<Scalar>& b, const std::vector<std::size_t>& settings_per_party,
                       const std::string& name) {
  const auto& sig = b.signature();
  if (sig.party_count() != settings_per_party.size())
    throw InputError(name + ": expected a " + std::to_string(settings_per_party.size()) + "-party behavior, got " +
                     std::to_string(sig.party_count()) + " parties");
  for (std::size_t p = 0; p < sig.party_count(); ++p) {
    if (sig.inputs(p).size() != settings_per_party[p])
      throw InputError(name + ": party '" + sig.party(p) + "' has " + std::to_string(sig.inputs(p).size()) +
                       " settings, expected " + std::to_string(settings_per_party[p]));
    if (sig.outputs(p).size() != 2)
      throw InputError(name + ": party '" + sig.party(p) + "' does not have two outcomes");
  }
}

template <class Scalar>
Scalar probability(const BasicResource<Scalar>& b, std::span<const std::size_t> parties, const IndexTuple& full,
                   bool (*event)(std::size_t)) {
  const auto dist = marginal_distribution(b, parties, full);
  Scalar p = 0;
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (event(i)) p += dist[i];
  return p;
}

bool odd_parity(std::size_t i) { return std::popcount(i) % 2 == 1; }
bool even_parity(std::size_t i) { return std::popcount(i) % 2 == 0; }

LinearInequality tripartite(std::string name, std::vector<CorrelatorTerm> terms, long bound,
                            std::vector<std::size_t> settings = {2, 2, 2}) {
  return LinearInequality{std::move(name), std::move(settings), std::move(terms), Rational(bound)};
}

CorrelatorTerm t2(long c, std::size_t p, std::size_t x, std::size_t q, std::size_t y) {
  return make_term(Rational(c), {p, q}, {x, y});
}

CorrelatorTerm t3(long c, std::size_t x, std::size_t y, std::size_t z) {
  return make_term(Rational(c), {kA, kB, kC}, {x, y, z});
}

}  // namespace

CorrelatorTerm make_term(Rational coefficient, std::vector<std::size_t> parties, std::vector<std::size_t> settings) {
  if (parties.empty() || parties.size() != settings.size())
    throw InputError("correlator term needs one setting per party");
  std::vector<std::size_t> order(parties.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return parties[a] < parties[b]; });
  CorrelatorTerm t;
  coefficient.canonicalize();
  t.coefficient = std::move(coefficient);
  for (std::size_t i : order) {
    if (!t.parties.empty() && t.parties.back() == parties[i]) throw InputError("correlator term repeats a party");
    t.parties.push_back(parties[i]);
    t.settings.push_back(settings[i]);
  }
  return t;
}

template <class Scalar>
Scalar correlator(const BasicResource<Scalar>& b, std::span<const std::size_t> parties,
                  std::span<const std::size_t> settings, double tolerance) {
  if (parties.empty() || parties.size() != settings.size())
    throw InputError("correlator: one setting per involved party");
  require_binary(b, parties);
  for (std::size_t k = 0; k < parties.size(); ++k)
    if (settings[k] >= b.signature().inputs(parties[k]).size()) throw InputError("correlator: setting out of range");
  require_nonsignaling(b, tolerance);
  return correlator_raw(b, parties, settings);
}

template <class Scalar>
Evaluation<Scalar> evaluate(const LinearInequality& ineq, const BasicResource<Scalar>& b, double tolerance) {
  require_signature(b, ineq.settings_per_party, ineq.name.empty() ? "inequality" : ineq.name);
  require_nonsignaling(b, tolerance);
  Scalar value = 0;
  for (const auto& t : ineq.terms) value += from_rational<Scalar>(t.coefficient) * correlator_raw(b, t.parties, t.settings);
  Evaluation<Scalar> e{value, false};
  if constexpr (std::is_same_v<Scalar, double>)
    e.satisfied = value <= ineq.bound.get_d() + tolerance;
  else
    e.satisfied = value <= ineq.bound;
  return e;
}

Rational lhs_unchecked(const LinearInequality& ineq, const Behavior& b) {
  Rational value = 0;
  for (const auto& t : ineq.terms) value += t.coefficient * correlator_raw(b, t.parties, t.settings);
  return value;
}

LinearInequality mao_inequality() {
  return tripartite("mao",
                    {t2(1, kA, 0, kB, 0), t2(1, kA, 0, kB, 1), t3(1, 1, 0, 1), t3(-1, 1, 1, 1), t2(2, kA, 0, kC, 0)}, 4);
}

LinearInequality chao_reichardt_correlator() {
  return tripartite("cr-corr",
                    {t2(1, kA, 0, kB, 0), t2(1, kA, 0, kB, 1), t3(1, 1, 0, 1), t3(-1, 1, 1, 1), t2(4, kA, 0, kC, 0)}, 6);
}

LinearInequality relabeled_mao() {
  return tripartite("mao-relabeled",
                    {t2(1, kA, 0, kB, 0), t2(-1, kA, 0, kB, 1), t3(1, 1, 0, 1), t3(1, 1, 1, 1), t2(2, kA, 0, kC, 0)}, 4);
}

LinearInequality cao_inequality() {
  return tripartite("cao",
                    {t2(1, kA, 0, kB, 0), t2(1, kB, 0, kC, 0), t2(-1, kA, 0, kB, 1), t2(-1, kB, 1, kC, 0),
                     t2(4, kA, 0, kC, 0), t3(2, 1, 0, 1), t3(2, 1, 1, 1)},
                    8);
}

LinearInequality cao_s14_linearized() {
  return tripartite("cao-s14-linear",
                    {t2(1, kA, 0, kB, 0), t2(1, kA, 0, kB, 1), t3(1, 1, 0, 1), t3(-1, 1, 1, 1), t2(1, kA, 0, kB, 2),
                     t2(1, kB, 2, kC, 0)},
                    6, {2, 3, 2});
}

template <class Scalar>
Evaluation<Scalar> chao_reichardt_probability_form(const BasicResource<Scalar>& b, double tolerance) {
  require_signature(b, {2, 2, 2}, "cr-prob");
  require_nonsignaling(b, tolerance);
  const std::size_t ac[] = {kA, kC};
  const std::size_t ab[] = {kA, kB};
  const std::size_t abc[] = {kA, kB, kC};
  Scalar value = 4 * probability(b, ac, {0, 0, 0}, odd_parity);
  value += probability(b, ab, {0, 0, 0}, odd_parity);
  value += probability(b, ab, {0, 1, 0}, odd_parity);
  value += probability(b, abc, {1, 0, 1}, odd_parity);
  value += probability(b, abc, {1, 1, 1}, even_parity);
  Evaluation<Scalar> e{value, false};
  if constexpr (std::is_same_v<Scalar, double>)
    e.satisfied = value >= 1.0 - tolerance;
  else
    e.satisfied = value >= 1;
  return e;
}

template <class Scalar>
Scalar cao_s14_conditional_part(const BasicResource<Scalar>& b) {
  // Coefficients of <A0B0>, <A0B1>, <A1B0>, <A1B1> given C = +1 (index 0) and C = -1 (index 1).
  static constexpr int kCoeff[2][4] = {{1, 1, 1, -1}, {1, 1, -1, 1}};
  const std::size_t c_only[] = {kC};
  const auto c_dist = marginal_distribution(b, c_only, IndexTuple{0, 0, 1});
  const std::size_t abc[] = {kA, kB, kC};
  Scalar total = 0;
  for (std::size_t c = 0; c < 2; ++c) {
    const Scalar& pc = c_dist[c];
    if (!(pc > 0)) continue;
    Scalar block = 0;
    for (std::size_t x = 0; x < 2; ++x)
      for (std::size_t y = 0; y < 2; ++y) {
        const auto dist = marginal_distribution(b, abc, IndexTuple{x, y, 1});
        // Conditional expectation of A*B given C = c.
        Scalar e = 0;
        for (std::size_t a = 0; a < 2; ++a)
          for (std::size_t bb = 0; bb < 2; ++bb) {
            const Scalar& p = dist[(a * 2 + bb) * 2 + c];
            if ((a ^ bb) == 0)
              e += p;
            else
              e -= p;
          }
        e /= pc;
        block += kCoeff[c][x * 2 + y] * e;
      }
    total += pc * block;
  }
  return total;
}

template <class Scalar>
Evaluation<Scalar> evaluate_cao_s14(const BasicResource<Scalar>& b, double tolerance) {
  require_signature(b, {2, 3, 2}, "cao-s14");
  require_nonsignaling(b, tolerance);
  const std::size_t ab[] = {kA, kB};
  const std::size_t bc[] = {kB, kC};
  const std::size_t s02[] = {0, 2};
  const std::size_t s20[] = {2, 0};
  Scalar value = cao_s14_conditional_part(b) + correlator_raw(b, ab, s02) + correlator_raw(b, bc, s20);
  Evaluation<Scalar> e{value, false};
  if constexpr (std::is_same_v<Scalar, double>)
    e.satisfied = value <= 6.0 + tolerance;
  else
    e.satisfied = value <= 6;
  return e;
}

// ---- transforms ---------------------------------------------------------------------

LinearInequality relabel_output(const LinearInequality& ineq, std::size_t party, std::size_t setting) {
  if (party >= ineq.settings_per_party.size() || setting >= ineq.settings_per_party[party])
    throw InputError("relabel_output: party or setting out of range");
  LinearInequality out = ineq;
  for (auto& t : out.terms)
    for (std::size_t k = 0; k < t.parties.size(); ++k)
      if (t.parties[k] == party && t.settings[k] == setting) t.coefficient = -t.coefficient;
  return out;
}

LinearInequality swap_parties(const LinearInequality& ineq, std::size_t p, std::size_t q) {
  const std::size_t n = ineq.settings_per_party.size();
  if (p >= n || q >= n) throw InputError("swap_parties: party out of range");
  auto swap_index = [&](std::size_t i) { return i == p ? q : i == q ? p : i; };
  LinearInequality out = ineq;
  std::swap(out.settings_per_party[p], out.settings_per_party[q]);
  for (auto& t : out.terms) {
    std::vector<std::size_t> parties;
    for (std::size_t i : t.parties) parties.push_back(swap_index(i));
    t = make_term(t.coefficient, std::move(parties), t.settings);
  }
  return out;
}

LinearInequality add(const LinearInequality& a, const LinearInequality& b) {
  if (a.settings_per_party != b.settings_per_party) throw InputError("add: inequalities have different signatures");
  LinearInequality out;
  out.name = a.name + "+" + b.name;
  out.settings_per_party = a.settings_per_party;
  out.bound = a.bound + b.bound;
  for (const auto* src : {&a, &b})
    for (const auto& t : src->terms) {
      auto it = std::find_if(out.terms.begin(), out.terms.end(),
                             [&](const auto& u) { return u.parties == t.parties && u.settings == t.settings; });
      if (it == out.terms.end())
        out.terms.push_back(t);
      else
        it->coefficient += t.coefficient;
    }
  std::erase_if(out.terms, [](const auto& t) { return sgn(t.coefficient) == 0; });
  return out;
}

LinearInequality scale(const LinearInequality& ineq, const Rational& factor) {
  if (sgn(factor) <= 0) throw InputError("scale: factor must be positive");
  LinearInequality out = ineq;
  for (auto& t : out.terms) t.coefficient *= factor;
  out.bound *= factor;
  return out;
}

LinearInequality correlator_bound(std::vector<std::size_t> settings_per_party, std::vector<std::size_t> parties,
                                  std::vector<std::size_t> settings) {
  LinearInequality out;
  out.name = "correlator-bound";
  out.settings_per_party = std::move(settings_per_party);
  out.terms.push_back(make_term(Rational(1), std::move(parties), std::move(settings)));
  out.bound = 1;
  return out;
}

LinearInequality zero_inequality(std::vector<std::size_t> settings_per_party) {
  LinearInequality out;
  out.name = "zero";
  out.settings_per_party = std::move(settings_per_party);
  out.bound = 0;
  return out;
}

Behavior relabel_behavior(const Behavior& b, std::size_t party, std::size_t setting) {
  const std::size_t swap[] = {1, 0};
  return permute_outputs(b, party, setting, swap);
}

Behavior swap_behavior_parties(const Behavior& b, std::size_t p, std::size_t q) {
  std::vector<std::size_t> order(b.party_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::swap(order.at(p), order.at(q));
  return permute_parties(b, order);
}

Signature binary_signature(const std::vector<std::size_t>& settings_per_party) {
  std::vector<std::string> parties;
  std::vector<Alphabet> ins, outs;
  for (std::size_t p = 0; p < settings_per_party.size(); ++p) {
    parties.push_back(std::string(1, static_cast<char>('A' + p)));
    ins.push_back(Alphabet::range(settings_per_party[p]));
    outs.push_back(Alphabet::range(2));
  }
  return Signature(std::move(parties), std::move(ins), std::move(outs));
}

std::vector<Behavior> deterministic_behaviors(const std::vector<std::size_t>& settings_per_party) {
  return local_deterministic_vertices(binary_signature(settings_per_party)).vertices;
}

// ---- derivation chain -------------------------------------------------------------------

bool DerivationReport::passed() const {
  return std::all_of(steps.begin(), steps.end(), [](const auto& s) { return s.passed; });
}

namespace {

/// Compares two functionals on every vertex; records the largest |difference|.
using Functional = std::function<Rational(const Behavior&)>;

DerivationStep identity_step(std::string id, std::string description, const std::vector<Behavior>& vertices,
                             const Functional& lhs, const Functional& rhs) {
  DerivationStep s;
  s.id = std::move(id);
  s.description = std::move(description);
  s.extreme = 0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    Rational diff = lhs(vertices[i]) - rhs(vertices[i]);
    if (sgn(diff) < 0) diff = -diff;
    if (diff > s.extreme) {
      s.extreme = diff;
      s.witness = i;
    }
  }
  s.vertices_checked = vertices.size();
  s.passed = sgn(s.extreme) == 0;
  if (!s.passed) {
    s.detail = "functionals differ by " + to_string(s.extreme) + " on deterministic behavior " + std::to_string(s.witness);
  }
  return s;
}

std::string term_text(const CorrelatorTerm& t) {
  std::string s = "<";
  for (std::size_t k = 0; k < t.parties.size(); ++k)
    s += std::string(1, static_cast<char>('A' + t.parties[k])) + std::to_string(t.settings[k]);
  return s + ">";
}

void check_bounds(DerivationStep& s, const LinearInequality& expected, const LinearInequality& derived) {
  if (expected.bound != derived.bound) {
    s.passed = false;
    s.detail += (s.detail.empty() ? "" : "; ") + std::string("bound ") + to_string(expected.bound) +
                " differs from derived bound " + to_string(derived.bound);
  }
  if (expected.settings_per_party != derived.settings_per_party) {
    s.passed = false;
    s.detail += (s.detail.empty() ? "" : "; ") + std::string("settings signature differs");
  }
}

}  // namespace

DerivationReport verify_derivation_chain(const DerivationInputs& in) {
  const auto v64 = deterministic_behaviors({2, 2, 2});
  const auto v128 = deterministic_behaviors({2, 3, 2});
  DerivationReport report;

  {
    const LinearInequality derived = relabel_output(in.mao, kB, 1);
    auto s = identity_step(
        "a", "relabeled inequality = Mao with Bob's setting-1 outcomes flipped", v64,
        [&](const Behavior& b) { return lhs_unchecked(in.mao_relabeled, b); },
        [&](const Behavior& b) { return lhs_unchecked(derived, b); });
    check_bounds(s, in.mao_relabeled, derived);
    report.steps.push_back(std::move(s));
  }
  {
    const LinearInequality derived = add(in.mao_relabeled, swap_parties(in.mao_relabeled, kA, kC));
    auto s = identity_step(
        "b", "Cao inequality = relabeled inequality + its A<->C swap", v64,
        [&](const Behavior& b) { return lhs_unchecked(in.cao, b); },
        [&](const Behavior& b) { return lhs_unchecked(derived, b); });
    check_bounds(s, in.cao, derived);
    report.steps.push_back(std::move(s));
  }
  {
    const LinearInequality derived = add(in.mao, scale(correlator_bound({2, 2, 2}, {kA, kC}, {0, 0}), Rational(2)));
    auto s = identity_step(
        "c", "CR correlator form = Mao + 2(<A0C0> <= 1)", v64,
        [&](const Behavior& b) { return lhs_unchecked(in.cr_correlator, b); },
        [&](const Behavior& b) { return lhs_unchecked(derived, b); });
    check_bounds(s, in.cr_correlator, derived);
    report.steps.push_back(std::move(s));
  }
  {
    auto s = identity_step(
        "d", "CR probability form = 4 - (CR correlator form)/2", v64,
        [&](const Behavior& b) { return chao_reichardt_probability_form(b).value; },
        [&](const Behavior& b) -> Rational { return Rational(4) - lhs_unchecked(in.cr_correlator, b) / 2; });
    // value >= 1 is then equivalent to correlator form <= 6 exactly when the bound is 6.
    if (in.cr_correlator.bound != 6) {
      s.passed = false;
      s.detail += (s.detail.empty() ? "" : "; ") + std::string("correlator bound is not 6");
    }
    report.steps.push_back(std::move(s));
  }
  {
    LinearInequality first_four = in.cao_linear;
    first_four.terms.resize(std::min<std::size_t>(4, first_four.terms.size()));
    auto s = identity_step(
        "e", "conditional (2,3,2) lines = first four linear terms", v128,
        [&](const Behavior& b) { return cao_s14_conditional_part(b); },
        [&](const Behavior& b) { return lhs_unchecked(first_four, b); });
    // The first four linear terms must be Mao's first four terms, and the
    // full evaluator must match the linear form.
    const LinearInequality mao = in.mao;
    for (std::size_t k = 0; k < 4 && k < mao.terms.size(); ++k)
      if (k >= first_four.terms.size() || !(first_four.terms[k] == mao.terms[k])) {
        s.passed = false;
        s.detail += (s.detail.empty() ? "" : "; ") + std::string("linear term ") + std::to_string(k) + " is not " +
                    term_text(mao.terms[k]);
      }
    auto full = identity_step(
        "e", "", v128, [&](const Behavior& b) { return evaluate_cao_s14(b).value; },
        [&](const Behavior& b) { return lhs_unchecked(in.cao_linear, b); });
    if (!full.passed) {
      s.passed = false;
      if (full.extreme > s.extreme) {
        s.extreme = full.extreme;
        s.witness = full.witness;
      }
      s.detail += (s.detail.empty() ? "" : "; ") + std::string("evaluator and linear form ") + full.detail;
    }
    report.steps.push_back(std::move(s));
  }
  {
    DerivationStep s;
    s.id = "f";
    s.description = "<A0C0> - <A0B2> - <B2C0> + 1 >= 0";
    const std::size_t ac[] = {kA, kC}, ab[] = {kA, kB}, bc[] = {kB, kC};
    const std::size_t s00[] = {0, 0}, s02[] = {0, 2}, s20[] = {2, 0};
    for (std::size_t i = 0; i < v128.size(); ++i) {
      const auto& b = v128[i];
      const Rational slack = correlator_raw(b, ac, s00) - correlator_raw(b, ab, s02) - correlator_raw(b, bc, s20) + 1;
      if (i == 0 || slack < s.extreme) {
        s.extreme = slack;
        s.witness = i;
      }
    }
    s.vertices_checked = v128.size();
    s.passed = sgn(s.extreme) >= 0;
    s.detail = "minimum slack " + to_string(s.extreme) + " at deterministic behavior " + std::to_string(s.witness);
    report.steps.push_back(std::move(s));
  }
  return report;
}

// ---- explicit instantiations ---------------------------------------------------------

template Rational correlator(const Behavior&, std::span<const std::size_t>, std::span<const std::size_t>, double);
template double correlator(const FloatBehavior&, std::span<const std::size_t>, std::span<const std::size_t>, double);
template Evaluation<Rational> evaluate(const LinearInequality&, const Behavior&, double);
template Evaluation<double> evaluate(const LinearInequality&, const FloatBehavior&, double);
template Evaluation<Rational> chao_reichardt_probability_form(const Behavior&, double);
template Evaluation<double> chao_reichardt_probability_form(const FloatBehavior&, double);
template Evaluation<Rational> evaluate_cao_s14(const Behavior&, double);
template Evaluation<double> evaluate_cao_s14(const FloatBehavior&, double);
template Rational cao_s14_conditional_part(const Behavior&);
template double cao_s14_conditional_part(const FloatBehavior&);

}  // namespace nonsig
