#include "nonsig/resource.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <type_traits>

#include "nonsig/error.hpp"

namespace nonsig {

namespace {

template <class Scalar>
struct Arith;

template <>
struct Arith<Rational> {
  static bool equal(const Rational& a, const Rational& b, double) { return a == b; }
  static bool negative(const Rational& a, double) { return sgn(a) < 0; }
  static bool is_zero(const Rational& a) { return sgn(a) == 0; }
  static std::string str(const Rational& a) { return to_string(a); }
};

template <>
struct Arith<double> {
  static bool equal(double a, double b, double tol) { return std::abs(a - b) <= tol; }
  static bool negative(double a, double tol) { return a < -tol; }
  static bool is_zero(double a) { return a == 0.0; }
  static std::string str(double a) {
    std::ostringstream os;
    os.precision(17);
    os << a;
    return os.str();
  }
};

template <class Scalar>
std::vector<std::string> render(const std::vector<Scalar>& v) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(Arith<Scalar>::str(x));
  return out;
}

std::string render_tuple(const Alphabet* alphabets, std::span<const std::size_t> idx) {
  std::string s = "(";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(alphabets[i].symbol(idx[i]));
  }
  return s + ")";
}

std::vector<std::size_t> complement(std::size_t n, std::span<const std::size_t> keep) {
  std::vector<std::size_t> rest;
  for (std::size_t p = 0; p < n; ++p)
    if (std::find(keep.begin(), keep.end(), p) == keep.end()) rest.push_back(p);
  return rest;
}

void check_party_subset(const Signature& sig, std::span<const std::size_t> parties, const char* what) {
  std::vector<bool> seen(sig.party_count(), false);
  for (std::size_t p : parties) {
    if (p >= sig.party_count()) throw InputError(std::string(what) + ": party index out of range");
    if (seen[p]) throw InputError(std::string(what) + ": party listed twice");
    seen[p] = true;
  }
}

template <class Scalar>
void require_nonsignaling(const BasicResource<Scalar>& r, const char* op) {
  if (r.nonsignaling_checked()) return;
  auto report = validate_nonsignaling(r);
  if (!report.ok)
    throw DomainError(std::string(op) + " refused: resource '" + r.id() + "' is not nonsignaling (" +
                      report.message + ")");
}

}  // namespace

// ---- BasicResource --------------------------------------------------------

template <class Scalar>
BasicResource<Scalar> BasicResource<Scalar>::new_unchecked(std::string id, Signature sig,
                                                           std::vector<Scalar> table) {
  if (table.size() != sig.input_tuple_count() * sig.output_tuple_count())
    throw InputError("resource '" + id + "': table has " + std::to_string(table.size()) +
                     " entries, expected " +
                     std::to_string(sig.input_tuple_count() * sig.output_tuple_count()));
  if constexpr (std::is_same_v<Scalar, Rational>)
    for (auto& q : table) q.canonicalize();
  BasicResource r;
  r.id_ = std::move(id);
  r.sig_ = std::move(sig);
  r.table_ = std::move(table);
  return r;
}

template <class Scalar>
BasicResource<Scalar> BasicResource<Scalar>::create(std::string id, Signature sig, std::vector<Scalar> table,
                                                    double tolerance) {
  BasicResource r = new_unchecked(std::move(id), std::move(sig), std::move(table));
  auto report = validate_nonsignaling(r, tolerance);
  if (!report.ok) throw DomainError("resource '" + r.id_ + "': " + report.message);
  r.checked_ = true;
  return r;
}

template <class Scalar>
const Scalar& BasicResource<Scalar>::prob_symbols(std::span<const int> outputs,
                                                  std::span<const int> inputs) const {
  if (outputs.size() != party_count() || inputs.size() != party_count())
    throw InputError("resource '" + id_ + "': wrong tuple length");
  IndexTuple out(party_count()), in(party_count());
  for (std::size_t p = 0; p < party_count(); ++p) {
    auto oi = sig_.outputs(p).index_of(outputs[p]);
    auto ii = sig_.inputs(p).index_of(inputs[p]);
    if (!oi || !ii) throw InputError("resource '" + id_ + "': symbol outside alphabet for party " + sig_.party(p));
    out[p] = *oi;
    in[p] = *ii;
  }
  return prob(out, in);
}

// ---- validation -----------------------------------------------------------

template <class Scalar>
ValidationReport validate_table(const BasicResource<Scalar>& r, double tolerance) {
  const auto& sig = r.signature();
  const std::size_t outs = sig.output_tuple_count();
  if (r.table().size() != sig.input_tuple_count() * outs)
    return ValidationReport::fail("table is not total");
  for (std::size_t i = 0; i < sig.input_tuple_count(); ++i) {
    const IndexTuple in = sig.decode_inputs(i);
    Scalar sum = 0;
    for (std::size_t o = 0; o < outs; ++o) {
      const Scalar& v = r.at(i, o);
      if (Arith<Scalar>::negative(v, tolerance)) {
        const IndexTuple out = sig.decode_outputs(o);
        return ValidationReport::fail("negative entry at inputs " +
                                      render_tuple(sig.input_alphabets().data(), in) + " outputs " +
                                      render_tuple(sig.output_alphabets().data(), out));
      }
      sum += v;
    }
    if (!Arith<Scalar>::equal(sum, Scalar(1), tolerance))
      return ValidationReport::fail("entries for inputs " + render_tuple(sig.input_alphabets().data(), in) +
                                    " sum to " + Arith<Scalar>::str(sum) + ", not 1");
  }
  return ValidationReport::pass();
}

template <class Scalar>
std::vector<Scalar> marginal_distribution(const BasicResource<Scalar>& r, std::span<const std::size_t> keep,
                                          std::span<const std::size_t> full_inputs) {
  const auto& sig = r.signature();
  std::size_t size = 1;
  for (std::size_t p : keep) size *= sig.outputs(p).size();
  std::vector<Scalar> dist(size, Scalar(0));
  const std::size_t in_flat = sig.encode_inputs(full_inputs);
  IndexTuple out(sig.party_count(), 0);
  std::vector<std::size_t> radix;
  for (std::size_t p = 0; p < sig.party_count(); ++p) radix.push_back(sig.outputs(p).size());
  std::size_t o = 0;
  do {
    const Scalar& v = r.at(in_flat, o);
    if (!Arith<Scalar>::is_zero(v)) {
      std::size_t k = 0;
      for (std::size_t p : keep) k = k * sig.outputs(p).size() + out[p];
      dist[k] += v;
    }
    ++o;
  } while (next_index(out, radix));
  return dist;
}

template <class Scalar>
ValidationReport validate_nonsignaling(const BasicResource<Scalar>& r, double tolerance) {
  auto table_report = validate_table(r, tolerance);
  if (!table_report.ok) {
    table_report.message = "malformed table: " + table_report.message;
    return table_report;
  }
  const auto& sig = r.signature();
  for (std::size_t j = 0; j < sig.party_count(); ++j) {
    if (sig.inputs(j).size() < 2) continue;
    const auto others = complement(sig.party_count(), std::span<const std::size_t>(&j, 1));
    for (std::size_t i = 0; i < sig.input_tuple_count(); ++i) {
      IndexTuple in = sig.decode_inputs(i);
      if (in[j] != 0) continue;
      const auto reference = marginal_distribution(r, others, in);
      for (std::size_t alt = 1; alt < sig.inputs(j).size(); ++alt) {
        IndexTuple in_alt = in;
        in_alt[j] = alt;
        const auto moved = marginal_distribution(r, others, in_alt);
        for (std::size_t k = 0; k < reference.size(); ++k) {
          if (Arith<Scalar>::equal(reference[k], moved[k], tolerance)) continue;
          SignalingWitness w{j, in, 0, alt, render(reference), render(moved)};
          std::string msg = "party '" + sig.party(j) + "' signals: changing its input from " +
                            std::to_string(sig.inputs(j).symbol(0)) + " to " +
                            std::to_string(sig.inputs(j).symbol(alt)) + " at inputs " +
                            render_tuple(sig.input_alphabets().data(), in) +
                            " moves the others' marginal";
          return {false, std::move(msg), std::move(w)};
        }
      }
    }
  }
  return ValidationReport::pass();
}

template <class Scalar>
ValidationReport check_subset_nonsignaling(const BasicResource<Scalar>& r, std::span<const std::size_t> signalers,
                                           std::span<const std::size_t> receivers, double tolerance) {
  const auto& sig = r.signature();
  check_party_subset(sig, signalers, "signalers");
  check_party_subset(sig, receivers, "receivers");
  for (std::size_t s : signalers)
    if (std::find(receivers.begin(), receivers.end(), s) != receivers.end())
      throw InputError("signalers and receivers must be disjoint");
  auto table_report = validate_table(r, tolerance);
  if (!table_report.ok) {
    table_report.message = "malformed table: " + table_report.message;
    return table_report;
  }

  std::vector<std::size_t> recv_radix, sig_radix;
  for (std::size_t p : receivers) recv_radix.push_back(sig.inputs(p).size());
  for (std::size_t p : signalers) sig_radix.push_back(sig.inputs(p).size());

  IndexTuple x_recv(receivers.size(), 0);
  do {
    IndexTuple full(sig.party_count(), 0);
    for (std::size_t k = 0; k < receivers.size(); ++k) full[receivers[k]] = x_recv[k];
    const auto reference = marginal_distribution(r, receivers, full);
    IndexTuple x_sig(signalers.size(), 0);
    while (next_index(x_sig, sig_radix)) {
      IndexTuple moved_in = full;
      for (std::size_t k = 0; k < signalers.size(); ++k) moved_in[signalers[k]] = x_sig[k];
      const auto moved = marginal_distribution(r, receivers, moved_in);
      for (std::size_t k = 0; k < reference.size(); ++k) {
        if (Arith<Scalar>::equal(reference[k], moved[k], tolerance)) continue;
        SignalingWitness w{signalers.empty() ? 0 : signalers[0], moved_in, 0, 0, render(reference), render(moved)};
        return {false,
                "signalers move the receivers' marginal at inputs " +
                    render_tuple(sig.input_alphabets().data(), moved_in),
                std::move(w)};
      }
    }
  } while (next_index(x_recv, recv_radix));
  return ValidationReport::pass();
}

// ---- derived resources ------------------------------------------------------

template <class Scalar>
BasicResource<Scalar> marginal_with_choice(const BasicResource<Scalar>& r, std::span<const std::size_t> keep,
                                           std::span<const std::size_t> dropped_inputs) {
  const auto& sig = r.signature();
  if (keep.empty()) throw InputError("marginal: keep set is empty");
  check_party_subset(sig, keep, "marginal");
  require_nonsignaling(r, "marginal");
  const auto dropped = complement(sig.party_count(), keep);
  if (dropped_inputs.size() != dropped.size()) throw InputError("marginal: one dropped input per dropped party");

  const Signature sub = sig.restrict_to(keep);
  std::vector<Scalar> table;
  table.reserve(sub.input_tuple_count() * sub.output_tuple_count());
  for (std::size_t i = 0; i < sub.input_tuple_count(); ++i) {
    const IndexTuple kin = sub.decode_inputs(i);
    IndexTuple full(sig.party_count(), 0);
    for (std::size_t k = 0; k < keep.size(); ++k) full[keep[k]] = kin[k];
    for (std::size_t k = 0; k < dropped.size(); ++k) {
      if (dropped_inputs[k] >= sig.inputs(dropped[k]).size()) throw InputError("marginal: dropped input out of range");
      full[dropped[k]] = dropped_inputs[k];
    }
    auto dist = marginal_distribution(r, keep, full);
    for (auto& v : dist) table.push_back(std::move(v));
  }
  return BasicResource<Scalar>::create(r.id(), sub, std::move(table));
}

template <class Scalar>
BasicResource<Scalar> marginal(const BasicResource<Scalar>& r, std::span<const std::size_t> keep) {
  const std::vector<std::size_t> zeros(r.party_count() > keep.size() ? r.party_count() - keep.size() : 0, 0);
  return marginal_with_choice(r, keep, zeros);
}

template <class Scalar>
BasicResource<Scalar> condition(const BasicResource<Scalar>& r, std::span<const std::size_t> observed,
                                std::span<const std::size_t> outputs, std::span<const std::size_t> inputs) {
  const auto& sig = r.signature();
  check_party_subset(sig, observed, "condition");
  if (outputs.size() != observed.size() || inputs.size() != observed.size())
    throw InputError("condition: one output and one input per observed party");
  require_nonsignaling(r, "condition");
  const auto rest = complement(sig.party_count(), observed);
  if (rest.empty()) throw InputError("condition: no unobserved party left");
  for (std::size_t k = 0; k < observed.size(); ++k)
    if (outputs[k] >= sig.outputs(observed[k]).size() || inputs[k] >= sig.inputs(observed[k]).size())
      throw InputError("condition: observed symbol out of range");

  IndexTuple probe(sig.party_count(), 0);
  for (std::size_t k = 0; k < observed.size(); ++k) probe[observed[k]] = inputs[k];
  const auto observed_dist = marginal_distribution(r, observed, probe);
  std::size_t obs_flat = 0;
  for (std::size_t k = 0; k < observed.size(); ++k) obs_flat = obs_flat * sig.outputs(observed[k]).size() + outputs[k];
  const Scalar denominator = observed_dist[obs_flat];
  if (Arith<Scalar>::is_zero(denominator) || Arith<Scalar>::negative(denominator, 0.0))
    throw DomainError("condition: conditioning event has probability zero");

  const Signature sub = sig.restrict_to(rest);
  std::vector<Scalar> table;
  table.reserve(sub.input_tuple_count() * sub.output_tuple_count());
  for (std::size_t i = 0; i < sub.input_tuple_count(); ++i) {
    const IndexTuple rin = sub.decode_inputs(i);
    IndexTuple full_in(sig.party_count(), 0);
    for (std::size_t k = 0; k < rest.size(); ++k) full_in[rest[k]] = rin[k];
    for (std::size_t k = 0; k < observed.size(); ++k) full_in[observed[k]] = inputs[k];
    const std::size_t in_flat = sig.encode_inputs(full_in);
    for (std::size_t o = 0; o < sub.output_tuple_count(); ++o) {
      const IndexTuple rout = sub.decode_outputs(o);
      IndexTuple full_out(sig.party_count(), 0);
      for (std::size_t k = 0; k < rest.size(); ++k) full_out[rest[k]] = rout[k];
      for (std::size_t k = 0; k < observed.size(); ++k) full_out[observed[k]] = outputs[k];
      table.push_back(Scalar(r.at(in_flat, sig.encode_outputs(full_out)) / denominator));
    }
  }
  return BasicResource<Scalar>::create(r.id(), sub, std::move(table));
}

template <class Scalar>
BasicResource<Scalar> tensor_product(const BasicResource<Scalar>& a, const BasicResource<Scalar>& b,
                                     std::string id) {
  std::vector<std::string> parties = a.signature().parties();
  std::vector<Alphabet> ins = a.signature().input_alphabets();
  std::vector<Alphabet> outs = a.signature().output_alphabets();
  for (std::size_t p = 0; p < b.party_count(); ++p) {
    parties.push_back(b.signature().party(p));
    ins.push_back(b.signature().inputs(p));
    outs.push_back(b.signature().outputs(p));
  }
  Signature sig(std::move(parties), std::move(ins), std::move(outs));
  const auto& sa = a.signature();
  const auto& sb = b.signature();
  std::vector<Scalar> table(sig.input_tuple_count() * sig.output_tuple_count());
  for (std::size_t ia = 0; ia < sa.input_tuple_count(); ++ia)
    for (std::size_t ib = 0; ib < sb.input_tuple_count(); ++ib) {
      const std::size_t in = ia * sb.input_tuple_count() + ib;
      for (std::size_t oa = 0; oa < sa.output_tuple_count(); ++oa)
        for (std::size_t ob = 0; ob < sb.output_tuple_count(); ++ob)
          table[in * sig.output_tuple_count() + oa * sb.output_tuple_count() + ob] = a.at(ia, oa) * b.at(ib, ob);
    }
  if (id.empty()) id = a.id() + "*" + b.id();
  if (a.nonsignaling_checked() && b.nonsignaling_checked())
    return BasicResource<Scalar>::create(std::move(id), std::move(sig), std::move(table));
  return BasicResource<Scalar>::new_unchecked(std::move(id), std::move(sig), std::move(table));
}

template <class Scalar>
BasicResource<Scalar> permute_parties(const BasicResource<Scalar>& r, std::span<const std::size_t> order) {
  const auto& sig = r.signature();
  if (order.size() != sig.party_count()) throw InputError("permute_parties: order must list every party");
  check_party_subset(sig, order, "permute_parties");
  const Signature out_sig = sig.restrict_to(order);
  std::vector<Scalar> table(r.table().size());
  for (std::size_t i = 0; i < sig.input_tuple_count(); ++i) {
    const IndexTuple in = sig.decode_inputs(i);
    IndexTuple pin(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) pin[k] = in[order[k]];
    const std::size_t pi = out_sig.encode_inputs(pin);
    for (std::size_t o = 0; o < sig.output_tuple_count(); ++o) {
      const IndexTuple out = sig.decode_outputs(o);
      IndexTuple pout(order.size());
      for (std::size_t k = 0; k < order.size(); ++k) pout[k] = out[order[k]];
      table[pi * out_sig.output_tuple_count() + out_sig.encode_outputs(pout)] = r.at(i, o);
    }
  }
  if (r.nonsignaling_checked()) return BasicResource<Scalar>::create(r.id(), out_sig, std::move(table));
  return BasicResource<Scalar>::new_unchecked(r.id(), out_sig, std::move(table));
}

template <class Scalar>
BasicResource<Scalar> permute_outputs(const BasicResource<Scalar>& r, std::size_t party, std::size_t input,
                                      std::span<const std::size_t> perm) {
  const auto& sig = r.signature();
  if (party >= sig.party_count() || input >= sig.inputs(party).size() || perm.size() != sig.outputs(party).size())
    throw InputError("permute_outputs: bad party, input or permutation");
  std::vector<Scalar> table(r.table().size());
  for (std::size_t i = 0; i < sig.input_tuple_count(); ++i) {
    const IndexTuple in = sig.decode_inputs(i);
    for (std::size_t o = 0; o < sig.output_tuple_count(); ++o) {
      IndexTuple out = sig.decode_outputs(o);
      if (in[party] == input) out[party] = perm[out[party]];
      table[i * sig.output_tuple_count() + sig.encode_outputs(out)] = r.at(i, o);
    }
  }
  if (r.nonsignaling_checked()) return BasicResource<Scalar>::create(r.id(), sig, std::move(table));
  return BasicResource<Scalar>::new_unchecked(r.id(), sig, std::move(table));
}

double max_abs_difference(const FloatBehavior& a, const FloatBehavior& b) {
  if (!(a.signature() == b.signature())) throw InputError("max_abs_difference: signature mismatch");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.table().size(); ++k) worst = std::max(worst, std::abs(a.table()[k] - b.table()[k]));
  return worst;
}

FloatBehavior to_float(const NonsignalingResource& r) {
  std::vector<double> table;
  table.reserve(r.table().size());
  for (const auto& q : r.table()) table.push_back(q.get_d());
  return FloatBehavior::create(r.id(), r.signature(), std::move(table));
}

// ---- exact constructors -------------------------------------------------------

NonsignalingResource make_local_deterministic(std::string id, std::vector<std::string> parties,
                                              std::vector<Alphabet> inputs, std::vector<Alphabet> outputs,
                                              const std::vector<std::map<int, int>>& functions) {
  Signature sig(std::move(parties), std::move(inputs), std::move(outputs));
  if (functions.size() != sig.party_count()) throw InputError("make_local_deterministic: one function per party");
  std::vector<std::vector<std::size_t>> f(sig.party_count());
  for (std::size_t p = 0; p < sig.party_count(); ++p) {
    for (int x : sig.inputs(p).symbols()) {
      auto it = functions[p].find(x);
      if (it == functions[p].end())
        throw InputError("make_local_deterministic: function of party '" + sig.party(p) +
                         "' is undefined at input " + std::to_string(x));
      auto oi = sig.outputs(p).index_of(it->second);
      if (!oi)
        throw InputError("make_local_deterministic: output " + std::to_string(it->second) +
                         " outside alphabet of party '" + sig.party(p) + "'");
      f[p].push_back(*oi);
    }
  }
  return NonsignalingResource::build(std::move(id), std::move(sig), [&](const IndexTuple& in, const IndexTuple& out) {
    for (std::size_t p = 0; p < in.size(); ++p)
      if (f[p][in[p]] != out[p]) return Rational(0);
    return Rational(1);
  });
}

NonsignalingResource make_shared_randomness(std::string id, std::vector<std::string> parties,
                                            std::vector<Alphabet> outputs, std::vector<Rational> distribution) {
  std::vector<Alphabet> inputs(parties.size(), Alphabet({0}));
  Signature sig(std::move(parties), std::move(inputs), std::move(outputs));
  if (distribution.size() != sig.output_tuple_count())
    throw InputError("make_shared_randomness: distribution needs one entry per output tuple");
  Rational total = 0;
  for (const auto& q : distribution) {
    if (sgn(q) < 0) throw InputError("make_shared_randomness: negative probability");
    total += q;
  }
  if (total != 1) throw DomainError("make_shared_randomness: distribution sums to " + to_string(total) + ", not 1");
  return NonsignalingResource::create(std::move(id), std::move(sig), std::move(distribution));
}

NonsignalingResource make_pr_class_box(int alpha, int beta, int gamma, std::string id,
                                       std::vector<std::string> parties) {
  if (parties.size() != 2) throw InputError("PR box is bipartite");
  Signature sig(std::move(parties), {Alphabet::range(2), Alphabet::range(2)},
                {Alphabet::range(2), Alphabet::range(2)});
  return NonsignalingResource::build(std::move(id), std::move(sig), [&](const IndexTuple& in, const IndexTuple& out) {
    const std::size_t x = in[0], y = in[1];
    const std::size_t target = (x * y) ^ (alpha * x) ^ (beta * y) ^ static_cast<std::size_t>(gamma);
    return (out[0] ^ out[1]) == (target & 1u) ? Rational(1, 2) : Rational(0);
  });
}

NonsignalingResource make_pr_box(std::string id, std::vector<std::string> parties) {
  return make_pr_class_box(0, 0, 0, std::move(id), std::move(parties));
}

NonsignalingResource make_uniform(std::string id, const Signature& sig) {
  const Rational u(1, static_cast<unsigned long>(sig.output_tuple_count()));
  return NonsignalingResource::build(std::move(id), sig, [&](const IndexTuple&, const IndexTuple&) { return u; });
}

NonsignalingResource convex_mix(std::string id, std::span<const Rational> weights,
                                std::span<const NonsignalingResource> parts) {
  if (weights.size() != parts.size() || parts.empty()) throw InputError("convex_mix: one weight per part");
  std::vector<Rational> w(weights.begin(), weights.end());
  Rational total = 0;
  for (auto& q : w) {
    q.canonicalize();
    if (sgn(q) < 0) throw InputError("convex_mix: negative weight");
    total += q;
  }
  if (total != 1) throw InputError("convex_mix: weights sum to " + to_string(total));
  const Signature& sig = parts[0].signature();
  std::vector<Rational> table(parts[0].table().size(), Rational(0));
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (!(parts[k].signature() == sig)) throw InputError("convex_mix: signature mismatch");
    for (std::size_t e = 0; e < table.size(); ++e) table[e] += w[k] * parts[k].table()[e];
  }
  return NonsignalingResource::create(std::move(id), sig, std::move(table));
}

std::optional<std::vector<std::vector<std::size_t>>> local_deterministic_functions(const NonsignalingResource& r) {
  const auto& sig = r.signature();
  std::vector<std::vector<std::size_t>> f(sig.party_count());
  for (std::size_t p = 0; p < sig.party_count(); ++p) f[p].assign(sig.inputs(p).size(), 0);
  // Every input tuple must put probability one on a single output tuple.
  for (std::size_t i = 0; i < sig.input_tuple_count(); ++i) {
    const IndexTuple in = sig.decode_inputs(i);
    std::optional<std::size_t> hit;
    for (std::size_t o = 0; o < sig.output_tuple_count(); ++o) {
      const Rational& v = r.at(i, o);
      if (sgn(v) == 0) continue;
      if (v != 1 || hit) return std::nullopt;
      hit = o;
    }
    if (!hit) return std::nullopt;
    const IndexTuple out = sig.decode_outputs(*hit);
    for (std::size_t p = 0; p < sig.party_count(); ++p) f[p][in[p]] = out[p];
  }
  // Output of party p must depend on x_p alone.
  for (std::size_t i = 0; i < sig.input_tuple_count(); ++i) {
    const IndexTuple in = sig.decode_inputs(i);
    IndexTuple out(sig.party_count());
    for (std::size_t p = 0; p < sig.party_count(); ++p) out[p] = f[p][in[p]];
    if (r.at(i, sig.encode_outputs(out)) != 1) return std::nullopt;
  }
  return f;
}

std::vector<IndexTuple> CombinedRandomness::split(std::span<const std::size_t> combined_outputs) const {
  const auto& csig = resource.signature();
  std::vector<IndexTuple> parts;
  for (const auto& c : components) parts.emplace_back(c.party_count(), 0);
  for (std::size_t p = 0; p < csig.party_count(); ++p) {
    std::size_t code = combined_outputs[p];
    // Components are digits, most significant first.
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t k = 0; k < components.size(); ++k)
      if (auto s = components[k].signature().party_index(csig.party(p))) slots.emplace_back(k, *s);
    for (std::size_t d = slots.size(); d-- > 0;) {
      const auto [k, s] = slots[d];
      const std::size_t radix = components[k].signature().outputs(s).size();
      parts[k][s] = code % radix;
      code /= radix;
    }
  }
  return parts;
}

CombinedRandomness combine_shared_randomness(std::string id, std::span<const NonsignalingResource> parts) {
  std::vector<std::string> parties;
  for (const auto& r : parts) {
    if (!r.signature().input_free()) throw DomainError("combine_shared_randomness: '" + r.id() + "' has inputs");
    for (const auto& p : r.signature().parties())
      if (std::find(parties.begin(), parties.end(), p) == parties.end()) parties.push_back(p);
  }
  std::vector<Alphabet> outputs;
  for (const auto& p : parties) {
    std::size_t n = 1;
    for (const auto& r : parts)
      if (auto s = r.signature().party_index(p)) n *= r.signature().outputs(*s).size();
    outputs.push_back(Alphabet::range(n));
  }
  CombinedRandomness combined;
  combined.components.assign(parts.begin(), parts.end());
  Signature sig(parties, std::vector<Alphabet>(parties.size(), Alphabet({0})), outputs);
  std::vector<Rational> dist;
  dist.reserve(sig.output_tuple_count());
  combined.resource = NonsignalingResource::new_unchecked(id, sig, std::vector<Rational>(sig.output_tuple_count()));
  for (std::size_t o = 0; o < sig.output_tuple_count(); ++o) {
    const auto split = combined.split(sig.decode_outputs(o));
    Rational p = 1;
    for (std::size_t k = 0; k < parts.size() && sgn(p) != 0; ++k) p *= parts[k].prob(split[k], IndexTuple(parts[k].party_count(), 0));
    dist.push_back(p);
  }
  combined.resource = NonsignalingResource::create(std::move(id), std::move(sig), std::move(dist));
  return combined;
}

BottomExtension with_bottom_input(const NonsignalingResource& r) {
  const auto& sig = r.signature();
  require_nonsignaling(r, "with_bottom_input");
  int bottom = 0;
  for (std::size_t p = 0; p < sig.party_count(); ++p) {
    for (int s : sig.inputs(p).symbols()) bottom = std::max(bottom, s + 1);
    for (int s : sig.outputs(p).symbols()) bottom = std::max(bottom, s + 1);
  }
  std::vector<Alphabet> ins, outs;
  for (std::size_t p = 0; p < sig.party_count(); ++p) {
    auto in = sig.inputs(p).symbols();
    auto out = sig.outputs(p).symbols();
    in.push_back(bottom);
    out.push_back(bottom);
    ins.emplace_back(std::move(in));
    outs.emplace_back(std::move(out));
  }
  Signature ext(sig.parties(), std::move(ins), std::move(outs));
  auto table = NonsignalingResource::build(r.id(), ext, [&](const IndexTuple& in, const IndexTuple& out) {
    std::vector<std::size_t> active;
    for (std::size_t p = 0; p < in.size(); ++p) {
      const bool is_bottom_in = in[p] == sig.inputs(p).size();
      const bool is_bottom_out = out[p] == sig.outputs(p).size();
      if (is_bottom_in != is_bottom_out) return Rational(0);
      if (!is_bottom_in) active.push_back(p);
    }
    if (active.empty()) return Rational(1);
    IndexTuple full(sig.party_count(), 0);
    for (std::size_t p : active) full[p] = in[p];
    const auto dist = marginal_distribution(r, active, full);
    std::size_t k = 0;
    for (std::size_t p : active) k = k * sig.outputs(p).size() + out[p];
    return dist[k];
  });
  return {std::move(table), bottom};
}

// ---- explicit instantiations ------------------------------------------------

#define NONSIG_INSTANTIATE(S)                                                                              \
  template class BasicResource<S>;                                                                         \
  template ValidationReport validate_table(const BasicResource<S>&, double);                               \
  template ValidationReport validate_nonsignaling(const BasicResource<S>&, double);                        \
  template ValidationReport check_subset_nonsignaling(const BasicResource<S>&, std::span<const std::size_t>, \
                                                      std::span<const std::size_t>, double);                \
  template std::vector<S> marginal_distribution(const BasicResource<S>&, std::span<const std::size_t>,     \
                                                std::span<const std::size_t>);                             \
  template BasicResource<S> marginal(const BasicResource<S>&, std::span<const std::size_t>);               \
  template BasicResource<S> marginal_with_choice(const BasicResource<S>&, std::span<const std::size_t>,    \
                                                 std::span<const std::size_t>);                            \
  template BasicResource<S> condition(const BasicResource<S>&, std::span<const std::size_t>,               \
                                      std::span<const std::size_t>, std::span<const std::size_t>);         \
  template BasicResource<S> tensor_product(const BasicResource<S>&, const BasicResource<S>&, std::string); \
  template BasicResource<S> permute_parties(const BasicResource<S>&, std::span<const std::size_t>);        \
  template BasicResource<S> permute_outputs(const BasicResource<S>&, std::size_t, std::size_t,             \
                                            std::span<const std::size_t>);

NONSIG_INSTANTIATE(Rational)
NONSIG_INSTANTIATE(double)

#undef NONSIG_INSTANTIATE

}  // namespace nonsig
