#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nonsig/rational.hpp"
#include "nonsig/signature.hpp"

namespace nonsig {

/// Default tolerance for float-typed tables (quantum oracle output).
inline constexpr double kFloatTolerance = 1e-10;

/// Location of a nonsignaling failure: party `party` changes its input from
/// `input_a` to `input_b` (alphabet indices) with every other input fixed as
/// in `context`, and the marginal of the remaining parties' outputs moves.
struct SignalingWitness {
  std::size_t party = 0;
  IndexTuple context;
  std::size_t input_a = 0;
  std::size_t input_b = 0;
  std::vector<std::string> marginal_a;
  std::vector<std::string> marginal_b;
};

struct ValidationReport {
  bool ok = true;
  std::string message;
  std::optional<SignalingWitness> witness;

  static ValidationReport pass() { return {}; }
  static ValidationReport fail(std::string msg) { return {false, std::move(msg), std::nullopt}; }
  explicit operator bool() const { return ok; }
};

/// Conditional table R(outputs | inputs) over a party subset, stored total:
/// one entry per (input tuple, output tuple). Immutable after construction.
///
/// `Scalar` is `Rational` everywhere except behaviors produced by the quantum
/// oracle, which use `double` and tolerance-based checks.
template <class Scalar>
class BasicResource {
 public:
  using scalar_type = Scalar;

  BasicResource() = default;

  /// Validates shape, normalization and nonsignaling; throws DomainError on
  /// failure (InputError on a wrongly sized table).
  static BasicResource create(std::string id, Signature sig, std::vector<Scalar> table,
                              double tolerance = kFloatTolerance);

  /// Shape check only. Exists for signaling counterexamples; every consumer
  /// that needs nonsignaling re-validates such resources or refuses them.
  static BasicResource new_unchecked(std::string id, Signature sig, std::vector<Scalar> table);

  /// Builds the table from f(inputs, outputs), both given as index tuples.
  template <class F>
  static BasicResource build(std::string id, Signature sig, F&& f, bool checked = true) {
    std::vector<Scalar> table;
    table.reserve(sig.input_tuple_count() * sig.output_tuple_count());
    for (std::size_t i = 0; i < sig.input_tuple_count(); ++i) {
      const IndexTuple in = sig.decode_inputs(i);
      for (std::size_t o = 0; o < sig.output_tuple_count(); ++o) table.push_back(f(in, sig.decode_outputs(o)));
    }
    return checked ? create(std::move(id), std::move(sig), std::move(table))
                   : new_unchecked(std::move(id), std::move(sig), std::move(table));
  }

  const std::string& id() const { return id_; }
  const Signature& signature() const { return sig_; }
  const std::vector<Scalar>& table() const { return table_; }
  std::size_t party_count() const { return sig_.party_count(); }

  const Scalar& at(std::size_t input_flat, std::size_t output_flat) const {
    return table_[input_flat * sig_.output_tuple_count() + output_flat];
  }
  const Scalar& prob(std::span<const std::size_t> outputs, std::span<const std::size_t> inputs) const {
    return at(sig_.encode_inputs(inputs), sig_.encode_outputs(outputs));
  }
  /// Lookup by symbol values; throws InputError for symbols outside the alphabets.
  const Scalar& prob_symbols(std::span<const int> outputs, std::span<const int> inputs) const;

  /// True when construction ran (and passed) the nonsignaling validator.
  bool nonsignaling_checked() const { return checked_; }

  BasicResource with_id(std::string id) const {
    BasicResource copy = *this;
    copy.id_ = std::move(id);
    return copy;
  }

  /// Equal signature and table; ids are ignored.
  friend bool operator==(const BasicResource& a, const BasicResource& b) {
    return a.sig_ == b.sig_ && a.table_ == b.table_;
  }

 private:
  std::string id_;
  Signature sig_;
  std::vector<Scalar> table_;
  bool checked_ = false;
};

using NonsignalingResource = BasicResource<Rational>;
using FloatBehavior = BasicResource<double>;

/// Checks totality, non-negativity and per-input normalization.
template <class Scalar>
ValidationReport validate_table(const BasicResource<Scalar>& r, double tolerance = kFloatTolerance);

/// Single-party input changes never move the other parties' marginal.
template <class Scalar>
ValidationReport validate_nonsignaling(const BasicResource<Scalar>& r,
                                       double tolerance = kFloatTolerance);

/// The receivers' marginal does not depend on the signalers' inputs, with all
/// remaining parties' inputs held at their first symbol.
template <class Scalar>
ValidationReport check_subset_nonsignaling(const BasicResource<Scalar>& r,
                                           std::span<const std::size_t> signalers,
                                           std::span<const std::size_t> receivers,
                                           double tolerance = kFloatTolerance);

/// Distribution of the `keep` parties' outputs (flattened in `keep` order) for
/// one full input tuple.
template <class Scalar>
std::vector<Scalar> marginal_distribution(const BasicResource<Scalar>& r,
                                          std::span<const std::size_t> keep,
                                          std::span<const std::size_t> full_inputs);

/// Resource on `keep` (in the given order). Dropped parties' inputs are fixed
/// to their first symbol. Refuses signaling resources.
template <class Scalar>
BasicResource<Scalar> marginal(const BasicResource<Scalar>& r, std::span<const std::size_t> keep);

/// Like `marginal`, but dropped inputs are fixed to `dropped_inputs`
/// (indices, one per dropped party in ascending party order).
template <class Scalar>
BasicResource<Scalar> marginal_with_choice(const BasicResource<Scalar>& r,
                                           std::span<const std::size_t> keep,
                                           std::span<const std::size_t> dropped_inputs);

/// R(a_p | x_p, x_q, a_q) for the observed block q. Throws DomainError when the
/// conditioning event has probability zero.
template <class Scalar>
BasicResource<Scalar> condition(const BasicResource<Scalar>& r, std::span<const std::size_t> observed,
                                std::span<const std::size_t> outputs,
                                std::span<const std::size_t> inputs);

/// Independent juxtaposition: parties of `a` followed by parties of `b`.
template <class Scalar>
BasicResource<Scalar> tensor_product(const BasicResource<Scalar>& a, const BasicResource<Scalar>& b,
                                     std::string id = {});

/// Reorders parties: party i of the result is party order[i] of `r`.
template <class Scalar>
BasicResource<Scalar> permute_parties(const BasicResource<Scalar>& r, std::span<const std::size_t> order);

/// Relabels one party's outputs at one input: output index o becomes perm[o].
template <class Scalar>
BasicResource<Scalar> permute_outputs(const BasicResource<Scalar>& r, std::size_t party,
                                      std::size_t input, std::span<const std::size_t> perm);

/// Largest absolute entry difference; signatures must match.
double max_abs_difference(const FloatBehavior& a, const FloatBehavior& b);

FloatBehavior to_float(const NonsignalingResource& r);

// ---- exact constructors -------------------------------------------------

/// prod_i delta(a_i, f_i(x_i)); `functions[i]` maps every input symbol of
/// party i to an output symbol.
NonsignalingResource make_local_deterministic(std::string id, std::vector<std::string> parties,
                                              std::vector<Alphabet> inputs,
                                              std::vector<Alphabet> outputs,
                                              const std::vector<std::map<int, int>>& functions);

/// Input-free resource; `distribution` is indexed by flattened output tuple.
NonsignalingResource make_shared_randomness(std::string id, std::vector<std::string> parties,
                                            std::vector<Alphabet> outputs,
                                            std::vector<Rational> distribution);

/// P(ab|xy) = 1/2 iff a xor b = x*y.
NonsignalingResource make_pr_box(std::string id = "PR", std::vector<std::string> parties = {"A", "B"});

/// P(ab|xy) = 1/2 iff a xor b = x*y xor alpha*x xor beta*y xor gamma.
NonsignalingResource make_pr_class_box(int alpha, int beta, int gamma, std::string id = "PR",
                                       std::vector<std::string> parties = {"A", "B"});

/// Uniform outputs for every input.
NonsignalingResource make_uniform(std::string id, const Signature& sig);

/// sum_i weights[i] * parts[i]; parts share one signature, weights sum to 1.
NonsignalingResource convex_mix(std::string id, std::span<const Rational> weights,
                                std::span<const NonsignalingResource> parts);

/// Per-party output functions (input index -> output index) when `r` is a
/// product of Kronecker deltas, nullopt otherwise.
std::optional<std::vector<std::vector<std::size_t>>> local_deterministic_functions(
    const NonsignalingResource& r);

/// Input-free resources folded into one: parties are the union (first
/// appearance order); party p's output symbol is the mixed-radix index of its
/// outputs across the components it belongs to, in component order.
struct CombinedRandomness {
  NonsignalingResource resource;
  std::vector<NonsignalingResource> components;
  /// Output index tuple of every component for one combined output tuple.
  std::vector<IndexTuple> split(std::span<const std::size_t> combined_outputs) const;
};
CombinedRandomness combine_shared_randomness(std::string id, std::span<const NonsignalingResource> parts);

/// Unused-resource encoding: every party gains the symbol `bottom` in both
/// alphabets. Parties that input bottom output bottom with certainty; the rest
/// follow their marginal of the original resource.
struct BottomExtension {
  NonsignalingResource resource;
  int bottom = 0;
};
BottomExtension with_bottom_input(const NonsignalingResource& r);

}  // namespace nonsig
