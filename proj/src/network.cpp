#include "nonsig/network.hpp"

#include <algorithm>
#include <charconv>
#include <exception>
#include <functional>
#include <optional>
#include <set>
#include <thread>

#include "nonsig/error.hpp"

namespace nonsig {

namespace {

std::optional<int> parse_int(const std::string& s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

void collect_labels(const Node& n, std::set<std::string>& out) {
  if (n.terminal()) {
    out.insert(n.outcome);
    return;
  }
  for (const auto& c : n.children) collect_labels(c, out);
}

std::set<std::string> raw_labels(const DecisionTree& t) {
  std::set<std::string> labels;
  for (const auto& root : materialize_outcomes(t).roots) collect_labels(root, labels);
  return labels;
}

std::string binned(const std::string& label, const std::map<std::string, int>* bins) {
  if (!bins) return label;
  return std::to_string(bins->at(label));
}

/// Sorted (numerically when possible) and the matching outcome alphabet.
std::pair<std::vector<std::string>, Alphabet> order_labels(const std::set<std::string>& labels) {
  std::vector<std::string> sorted(labels.begin(), labels.end());
  const bool numeric =
      !sorted.empty() && std::all_of(sorted.begin(), sorted.end(), [](const auto& s) { return parse_int(s).has_value(); });
  if (numeric) {
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return *parse_int(a) < *parse_int(b); });
    std::vector<int> symbols;
    for (const auto& s : sorted) symbols.push_back(*parse_int(s));
    return {std::move(sorted), Alphabet(std::move(symbols))};
  }
  return {sorted, Alphabet::range(sorted.size())};
}

/// Depth-first enumeration of every output assignment with non-zero product
/// for one settings tuple. Resources are assigned one at a time, preferring a
/// resource whose inputs are already determined so its factor can be applied
/// (and zero branches pruned) immediately.
class Enumerator {
 public:
  Enumerator(const Network& net, const IndexTuple& setting_idx) : net_(net) {
    const std::size_t m = net.resources().size();
    offsets_.resize(m + 1, 0);
    for (std::size_t k = 0; k < m; ++k) {
      const auto& sig = net.resources()[k].signature();
      offsets_[k + 1] = offsets_[k] + sig.party_count();
      std::vector<std::uint32_t> digits;
      for (std::size_t o = 0; o < sig.output_tuple_count(); ++o)
        for (std::size_t d : sig.decode_outputs(o)) digits.push_back(static_cast<std::uint32_t>(d));
      out_digits_.push_back(std::move(digits));
    }
    State s;
    s.assigned.assign(m, -1);
    s.inputs.assign(offsets_[m], -1);
    s.evaluated.assign(m, 0);
    s.prob = 1;
    for (std::size_t p = 0; p < net.party_count(); ++p) s.node.push_back(net.compiled(p).root[setting_idx[p]]);
    start_ = std::move(s);
  }

  /// Settles the start state; false when it already has probability zero.
  bool prime() { return settle(start_); }

  /// emit(assigned output tuple per resource, probability, terminal node per party)
  template <class Emit>
  void run(Emit&& emit) {
    step(start_, emit);
  }

 private:
  struct State {
    std::vector<std::int64_t> assigned;
    std::vector<std::int64_t> inputs;
    std::vector<char> evaluated;
    std::vector<std::uint32_t> node;
    Rational prob;
  };

  bool settle(State& s) const {
    for (std::size_t p = 0; p < s.node.size(); ++p) {
      const auto& tree = net_.compiled(p);
      for (;;) {
        const auto& n = tree.nodes[s.node[p]];
        if (n.resource < 0) break;
        const auto k = static_cast<std::size_t>(n.resource);
        s.inputs[offsets_[k] + n.slot] = n.input;
        if (s.assigned[k] < 0) break;
        const std::size_t slots = offsets_[k + 1] - offsets_[k];
        const std::uint32_t out = out_digits_[k][static_cast<std::size_t>(s.assigned[k]) * slots + n.slot];
        s.node[p] = n.child[out];
      }
    }
    for (std::size_t k = 0; k < s.assigned.size(); ++k) {
      if (s.assigned[k] < 0 || s.evaluated[k] || !inputs_known(s, k)) continue;
      s.prob *= net_.resources()[k].at(input_flat(s, k), static_cast<std::size_t>(s.assigned[k]));
      s.evaluated[k] = 1;
      if (sgn(s.prob) == 0) return false;
    }
    return true;
  }

  bool inputs_known(const State& s, std::size_t k) const {
    for (std::size_t i = offsets_[k]; i < offsets_[k + 1]; ++i)
      if (s.inputs[i] < 0) return false;
    return true;
  }

  std::size_t input_flat(const State& s, std::size_t k) const {
    const auto& sig = net_.resources()[k].signature();
    std::size_t flat = 0;
    for (std::size_t j = 0; j < sig.party_count(); ++j)
      flat = flat * sig.inputs(j).size() + static_cast<std::size_t>(s.inputs[offsets_[k] + j]);
    return flat;
  }

  template <class Emit>
  void step(const State& s, Emit& emit) {
    std::optional<std::size_t> next;
    for (std::size_t k = 0; k < s.assigned.size(); ++k) {
      if (s.assigned[k] >= 0) continue;
      if (!next) next = k;
      if (inputs_known(s, k)) {
        next = k;
        break;
      }
    }
    if (!next) {
      emit(s.assigned, s.prob, s.node);
      return;
    }
    const std::size_t k = *next;
    const auto& r = net_.resources()[k];
    const bool known = inputs_known(s, k);
    const std::size_t in = known ? input_flat(s, k) : 0;
    for (std::size_t o = 0; o < r.signature().output_tuple_count(); ++o) {
      if (known && sgn(r.at(in, o)) == 0) continue;
      State child = s;
      child.assigned[k] = static_cast<std::int64_t>(o);
      if (settle(child)) step(child, emit);
    }
  }

  const Network& net_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<std::uint32_t>> out_digits_;
  State start_;
};

void require_evaluable(const Network& net, const EvalOptions& options) {
  if (options.allow_unnormalized) return;
  for (const auto& r : net.resources()) {
    if (r.nonsignaling_checked()) continue;
    auto report = validate_nonsignaling(r);
    if (!report.ok)
      throw DomainError("resource '" + r.id() + "' is signaling (" + report.message +
                        "); rerun with unnormalized evaluation to inspect the totals");
  }
}

IndexTuple setting_indices(const Network& net, const std::vector<int>& settings) {
  if (settings.size() != net.party_count())
    throw InputError("expected " + std::to_string(net.party_count()) + " settings, got " +
                     std::to_string(settings.size()));
  IndexTuple idx;
  for (std::size_t p = 0; p < settings.size(); ++p) {
    auto i = net.settings(p).index_of(settings[p]);
    if (!i)
      throw InputError("setting " + std::to_string(settings[p]) + " is not valid for party '" + net.parties()[p] + "'");
    idx.push_back(*i);
  }
  return idx;
}

unsigned worker_count(const EvalOptions& options, std::size_t jobs) {
  unsigned t = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(jobs, 1)));
}

}  // namespace

// ---- Network ------------------------------------------------------------------

ValidationReport validate_network(const std::vector<std::string>& parties,
                                  const std::vector<NonsignalingResource>& resources,
                                  const std::vector<DecisionTree>& trees, const Bins& bins) {
  std::set<std::string> party_set(parties.begin(), parties.end());
  if (party_set.size() != parties.size()) return ValidationReport::fail("duplicate party name");
  if (parties.empty()) return ValidationReport::fail("network has no parties");
  std::set<std::string> ids;
  for (const auto& r : resources) {
    if (!ids.insert(r.id()).second) return ValidationReport::fail("duplicate resource id '" + r.id() + "'");
    for (const auto& p : r.signature().parties())
      if (!party_set.contains(p))
        return ValidationReport::fail("resource '" + r.id() + "' names unknown party '" + p + "'");
  }
  std::map<std::string, const DecisionTree*> by_party;
  for (const auto& t : trees) {
    if (!party_set.contains(t.party)) return ValidationReport::fail("tree for unknown party '" + t.party + "'");
    if (!by_party.emplace(t.party, &t).second) return ValidationReport::fail("two trees for party '" + t.party + "'");
  }
  for (const auto& p : parties) {
    auto it = by_party.find(p);
    if (it == by_party.end()) return ValidationReport::fail("party '" + p + "' has no decision tree");
    const DecisionTree& t = *it->second;
    for (const auto& r : resources) {
      const bool member = r.signature().party_index(p).has_value();
      if (member != t.scope.contains(r.id()))
        return ValidationReport::fail(member ? "party '" + p + "' shares resource '" + r.id() +
                                                   "' but its tree does not consult it"
                                             : "tree of party '" + p + "' consults '" + r.id() +
                                                   "' without being a member");
    }
    for (const auto& id : t.scope)
      if (!ids.contains(id)) return ValidationReport::fail("tree of party '" + p + "' consults unknown '" + id + "'");
    if (t.settings.empty()) return ValidationReport::fail("party '" + p + "' has no settings");
    std::set<int> distinct(t.settings.begin(), t.settings.end());
    if (distinct.size() != t.settings.size())
      return ValidationReport::fail("party '" + p + "': duplicate root edge");
    auto report = validate_tree(t, Alphabet(std::vector<int>(distinct.begin(), distinct.end())), resources);
    if (!report.ok) return report;
    if (auto b = bins.find(p); b != bins.end()) {
      for (const auto& label : raw_labels(t))
        if (!b->second.contains(label))
          return ValidationReport::fail("bins of party '" + p + "' do not cover outcome '" + label + "'");
    }
  }
  for (const auto& [p, _] : bins)
    if (!party_set.contains(p)) return ValidationReport::fail("bins for unknown party '" + p + "'");
  return ValidationReport::pass();
}

Network Network::create(std::vector<std::string> parties, std::vector<NonsignalingResource> resources,
                        std::vector<DecisionTree> trees, Bins bins) {
  auto report = validate_network(parties, resources, trees, bins);
  if (!report.ok) throw DomainError("invalid network: " + report.message);
  Network net;
  net.parties_ = std::move(parties);
  net.resources_ = std::move(resources);
  net.bins_ = std::move(bins);
  for (const auto& p : net.parties_)
    net.trees_.push_back(*std::find_if(trees.begin(), trees.end(), [&](const auto& t) { return t.party == p; }));
  for (const auto& r : net.resources_) {
    bool ok = r.nonsignaling_checked() || validate_nonsignaling(r).ok;
    net.nonsignaling_.push_back(ok);
  }
  for (std::size_t p = 0; p < net.parties_.size(); ++p) {
    const auto& bins_p = net.bins_.contains(net.parties_[p]) ? &net.bins_.at(net.parties_[p]) : nullptr;
    std::set<std::string> labels;
    for (const auto& l : raw_labels(net.trees_[p])) labels.insert(binned(l, bins_p));
    auto [sorted, alphabet] = order_labels(labels);
    net.labels_.push_back(std::move(sorted));
    net.outcomes_.push_back(std::move(alphabet));
  }
  net.compile();
  return net;
}

void Network::compile() {
  settings_.clear();
  compiled_.clear();
  members_.clear();
  for (const auto& r : resources_) {
    std::vector<std::size_t> m;
    for (const auto& p : r.signature().parties()) m.push_back(party_index(p));
    members_.push_back(std::move(m));
  }
  for (std::size_t p = 0; p < parties_.size(); ++p) {
    const DecisionTree t = materialize_outcomes(trees_[p]);
    const auto* bins_p = bins_.contains(parties_[p]) ? &bins_.at(parties_[p]) : nullptr;
    std::vector<int> sorted = t.settings;
    std::sort(sorted.begin(), sorted.end());
    settings_.emplace_back(sorted);
    CompiledTree ct;
    ct.root.resize(sorted.size());
    // Depth-first flattening; children are written after their parent.
    std::function<std::uint32_t(const Node&)> add = [&](const Node& n) -> std::uint32_t {
      const auto idx = static_cast<std::uint32_t>(ct.nodes.size());
      ct.nodes.emplace_back();
      if (n.terminal()) {
        const std::string label = binned(n.outcome, bins_p);
        auto it = std::find(labels_[p].begin(), labels_[p].end(), label);
        ct.nodes[idx].outcome = static_cast<std::uint32_t>(it - labels_[p].begin());
        return idx;
      }
      const std::size_t k = resource_index(n.resource);
      const auto& sig = resources_[k].signature();
      const std::size_t slot = *sig.party_index(parties_[p]);
      CompiledNode c;
      c.resource = static_cast<int>(k);
      c.slot = static_cast<std::uint32_t>(slot);
      c.input = static_cast<std::uint32_t>(*sig.inputs(slot).index_of(n.input));
      c.child.resize(sig.outputs(slot).size());
      for (std::size_t e = 0; e < n.children.size(); ++e) {
        const std::uint32_t child = add(n.children[e]);
        c.child[*sig.outputs(slot).index_of(n.edge_labels[e])] = child;
      }
      ct.nodes[idx] = std::move(c);
      return idx;
    };
    for (std::size_t s = 0; s < t.settings.size(); ++s)
      ct.root[*settings_[p].index_of(t.settings[s])] = add(t.roots[s]);
    compiled_.push_back(std::move(ct));
  }
}

std::size_t Network::party_index(const std::string& name) const {
  auto it = std::find(parties_.begin(), parties_.end(), name);
  if (it == parties_.end()) throw InputError("unknown party '" + name + "'");
  return static_cast<std::size_t>(it - parties_.begin());
}

std::size_t Network::resource_index(const std::string& id) const {
  auto it = std::find_if(resources_.begin(), resources_.end(), [&](const auto& r) { return r.id() == id; });
  if (it == resources_.end()) throw InputError("unknown resource '" + id + "'");
  return static_cast<std::size_t>(it - resources_.begin());
}

Signature Network::behavior_signature() const { return Signature(parties_, settings_, outcomes_); }

Network Network::with_outcome_labels(std::vector<std::vector<std::string>> labels) const {
  if (labels.size() != parties_.size()) throw InputError("with_outcome_labels: one label list per party");
  Network net = *this;
  for (std::size_t p = 0; p < parties_.size(); ++p) {
    std::set<std::string> given(labels[p].begin(), labels[p].end());
    if (given.size() != labels[p].size()) throw InputError("with_outcome_labels: duplicate label");
    for (const auto& l : labels_[p])
      if (!given.contains(l))
        throw InputError("with_outcome_labels: party '" + parties_[p] + "' can produce '" + l + "'");
    auto [sorted, alphabet] = order_labels(given);
    net.labels_[p] = std::move(sorted);
    net.outcomes_[p] = std::move(alphabet);
  }
  net.compile();
  return net;
}

bool Network::all_nonsignaling() const {
  return std::all_of(nonsignaling_.begin(), nonsignaling_.end(), [](bool b) { return b; });
}

// ---- evaluation -------------------------------------------------------------------

std::vector<Factor> joint_factors(const Network& net, const std::vector<int>& settings,
                                  const OutputAssignment& outputs) {
  setting_indices(net, settings);
  for (const auto& r : net.resources()) {
    auto it = outputs.find(r.id());
    if (it == outputs.end()) throw InputError("no outputs given for resource '" + r.id() + "'");
    if (it->second.size() != r.party_count())
      throw InputError("resource '" + r.id() + "' needs one output per member party");
  }
  std::vector<std::vector<int>> inputs(net.resources().size());
  for (std::size_t k = 0; k < inputs.size(); ++k) inputs[k].assign(net.resources()[k].party_count(), 0);
  for (std::size_t p = 0; p < net.party_count(); ++p) {
    std::map<std::string, int> own;
    for (const auto& id : net.trees()[p].scope) {
      const auto& r = net.resources()[net.resource_index(id)];
      own[id] = outputs.at(id)[*r.signature().party_index(net.parties()[p])];
    }
    const PathTrace trace = trace_path(net.trees()[p], settings[p], own);
    for (const auto& [id, x] : trace.inputs) {
      const std::size_t k = net.resource_index(id);
      inputs[k][*net.resources()[k].signature().party_index(net.parties()[p])] = x;
    }
  }
  std::vector<Factor> factors;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const auto& r = net.resources()[k];
    const auto& out = outputs.at(r.id());
    factors.push_back({r.id(), out, inputs[k], r.prob_symbols(out, inputs[k])});
  }
  return factors;
}

Rational joint_probability(const Network& net, const std::vector<int>& settings, const OutputAssignment& outputs) {
  Rational p = 1;
  for (const auto& f : joint_factors(net, settings, outputs)) p *= f.value;
  return p;
}

JointDistribution joint_distribution(const Network& net, const std::vector<int>& settings,
                                     const EvalOptions& options) {
  require_evaluable(net, options);
  JointDistribution jd;
  jd.settings = settings;
  std::size_t size = 1;
  for (const auto& r : net.resources()) {
    jd.radix.push_back(r.signature().output_tuple_count());
    size *= jd.radix.back();
  }
  jd.table.assign(size, Rational(0));
  jd.sum = 0;
  Enumerator e(net, setting_indices(net, settings));
  if (e.prime()) {
    e.run([&](const std::vector<std::int64_t>& assigned, const Rational& p, const std::vector<std::uint32_t>&) {
      std::size_t flat = 0;
      for (std::size_t k = 0; k < assigned.size(); ++k) flat = flat * jd.radix[k] + static_cast<std::size_t>(assigned[k]);
      jd.table[flat] = p;
      jd.sum += p;
    });
  }
  if (jd.sum != 1 && !options.allow_unnormalized)
    throw DomainError("joint distribution sums to " + to_string(jd.sum) + ", not 1");
  return jd;
}

OutputAssignment decode_assignment(const Network& net, std::size_t flat) {
  OutputAssignment out;
  for (std::size_t k = net.resources().size(); k-- > 0;) {
    const auto& sig = net.resources()[k].signature();
    const std::size_t digit = flat % sig.output_tuple_count();
    flat /= sig.output_tuple_count();
    const IndexTuple idx = sig.decode_outputs(digit);
    std::vector<int> symbols;
    for (std::size_t j = 0; j < idx.size(); ++j) symbols.push_back(sig.outputs(j).symbol(idx[j]));
    out[net.resources()[k].id()] = std::move(symbols);
  }
  return out;
}

Behavior induced_behavior(const Network& net, const EvalOptions& options) {
  require_evaluable(net, options);
  const Signature sig = net.behavior_signature();
  const std::size_t rows = sig.input_tuple_count();
  const std::size_t cols = sig.output_tuple_count();
  std::vector<Rational> table(rows * cols, Rational(0));

  auto fill_row = [&](std::size_t i) {
    const IndexTuple setting = sig.decode_inputs(i);
    Enumerator e(net, setting);
    Rational total = 0;
    if (e.prime()) {
      e.run([&](const std::vector<std::int64_t>&, const Rational& p, const std::vector<std::uint32_t>& nodes) {
        std::size_t o = 0;
        for (std::size_t q = 0; q < nodes.size(); ++q)
          o = o * sig.outputs(q).size() + net.compiled(q).nodes[nodes[q]].outcome;
        table[i * cols + o] += p;
        total += p;
      });
    }
    if (total != 1 && !options.allow_unnormalized)
      throw DomainError("joint distribution sums to " + to_string(total) + ", not 1");
  };

  const unsigned workers = worker_count(options, rows);
  if (workers <= 1) {
    for (std::size_t i = 0; i < rows; ++i) fill_row(i);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
          try {
            for (std::size_t i = w; i < rows; i += workers) fill_row(i);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return Behavior::new_unchecked("behavior", sig, std::move(table));
}

// ---- structural transforms ---------------------------------------------------------

Network remove_party(const Network& net, std::size_t p) {
  if (net.party_count() < 2) throw InputError("cannot remove the only party");
  if (p >= net.party_count()) throw InputError("party index out of range");
  const std::string& name = net.parties()[p];
  std::vector<std::string> parties;
  std::vector<DecisionTree> trees;
  std::vector<std::vector<std::string>> labels;
  for (std::size_t q = 0; q < net.party_count(); ++q) {
    if (q == p) continue;
    parties.push_back(net.parties()[q]);
    trees.push_back(materialize_outcomes(net.trees()[q]));
    labels.push_back(net.outcome_labels(q));
  }
  std::vector<NonsignalingResource> resources;
  for (const auto& r : net.resources()) {
    auto slot = r.signature().party_index(name);
    if (!slot) {
      resources.push_back(r);
      continue;
    }
    if (r.party_count() == 1) continue;
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < r.party_count(); ++j)
      if (j != *slot) keep.push_back(j);
    resources.push_back(marginal(r, keep));
  }
  Bins bins = net.bins();
  bins.erase(name);
  return Network::create(std::move(parties), std::move(resources), std::move(trees), std::move(bins))
      .with_outcome_labels(std::move(labels));
}

MarginalComparison compare_marginal_routes(const Network& net, std::size_t p, const EvalOptions& options) {
  if (net.party_count() < 2) throw InputError("marginal_without_party needs at least two parties");
  const Behavior full = induced_behavior(net, options);
  std::vector<std::size_t> keep;
  for (std::size_t q = 0; q < net.party_count(); ++q)
    if (q != p) keep.push_back(q);
  MarginalComparison cmp;
  cmp.marginalized = marginal(full, keep);
  cmp.reduced = induced_behavior(remove_party(net, p), options);
  cmp.equal = cmp.marginalized == cmp.reduced;
  return cmp;
}

Behavior marginal_without_party(const Network& net, std::size_t p, const EvalOptions& options) {
  auto cmp = compare_marginal_routes(net, p, options);
  if (!cmp.equal)
    throw DomainError("marginal of party '" + net.parties()[p] +
                      "' differs from the behavior of the reduced network");
  return cmp.reduced;
}

Network disjoint_union(const Network& a, const Network& b) {
  for (const auto& p : b.parties())
    if (std::find(a.parties().begin(), a.parties().end(), p) != a.parties().end())
      throw InputError("disjoint_union: party '" + p + "' appears in both networks");
  for (const auto& r : b.resources())
    for (const auto& s : a.resources())
      if (r.id() == s.id()) throw InputError("disjoint_union: resource '" + r.id() + "' appears in both networks");
  std::vector<std::string> parties = a.parties();
  parties.insert(parties.end(), b.parties().begin(), b.parties().end());
  std::vector<NonsignalingResource> resources = a.resources();
  resources.insert(resources.end(), b.resources().begin(), b.resources().end());
  std::vector<DecisionTree> trees = a.trees();
  trees.insert(trees.end(), b.trees().begin(), b.trees().end());
  Bins bins = a.bins();
  bins.insert(b.bins().begin(), b.bins().end());
  std::vector<std::vector<std::string>> labels;
  for (std::size_t p = 0; p < a.party_count(); ++p) labels.push_back(a.outcome_labels(p));
  for (std::size_t p = 0; p < b.party_count(); ++p) labels.push_back(b.outcome_labels(p));
  return Network::create(std::move(parties), std::move(resources), std::move(trees), std::move(bins))
      .with_outcome_labels(std::move(labels));
}

ValidationReport check_disjoint_factorization(const Network& a, const Network& b, const EvalOptions& options) {
  const Behavior joint = induced_behavior(disjoint_union(a, b), options);
  const Behavior product = tensor_product(induced_behavior(a, options), induced_behavior(b, options), "behavior");
  if (!(joint.signature() == product.signature())) return ValidationReport::fail("union signature differs from product");
  const auto& sig = joint.signature();
  for (std::size_t i = 0; i < sig.input_tuple_count(); ++i)
    for (std::size_t o = 0; o < sig.output_tuple_count(); ++o)
      if (joint.at(i, o) != product.at(i, o)) {
        return ValidationReport::fail("union behavior " + to_string(joint.at(i, o)) + " differs from product " +
                                      to_string(product.at(i, o)) + " at settings row " + std::to_string(i) +
                                      ", outcome column " + std::to_string(o));
      }
  return ValidationReport::pass();
}

namespace {

void rename_nodes(Node& n, const std::string& suffix) {
  if (n.terminal()) return;
  n.resource += suffix;
  for (auto& c : n.children) rename_nodes(c, suffix);
}

}  // namespace

Network rename_network(const Network& net, const std::string& suffix) {
  std::vector<std::string> parties;
  for (const auto& p : net.parties()) parties.push_back(p + suffix);
  std::vector<NonsignalingResource> resources;
  for (const auto& r : net.resources()) {
    std::vector<std::string> members;
    for (const auto& p : r.signature().parties()) members.push_back(p + suffix);
    Signature sig(members, r.signature().input_alphabets(), r.signature().output_alphabets());
    resources.push_back(r.nonsignaling_checked() ? NonsignalingResource::create(r.id() + suffix, sig, r.table())
                                                 : NonsignalingResource::new_unchecked(r.id() + suffix, sig, r.table()));
  }
  std::vector<DecisionTree> trees;
  std::vector<std::vector<std::string>> labels;
  for (std::size_t p = 0; p < net.party_count(); ++p) {
    // Labels are fixed before renaming so outcomes keep their original text.
    DecisionTree t = materialize_outcomes(net.trees()[p]);
    t.party += suffix;
    std::set<std::string> scope;
    for (const auto& id : t.scope) scope.insert(id + suffix);
    t.scope = std::move(scope);
    for (auto& root : t.roots) rename_nodes(root, suffix);
    trees.push_back(std::move(t));
    labels.push_back(net.outcome_labels(p));
  }
  Bins bins;
  for (const auto& [p, m] : net.bins()) bins[p + suffix] = m;
  return Network::create(std::move(parties), std::move(resources), std::move(trees), std::move(bins))
      .with_outcome_labels(std::move(labels));
}

Network replace_resource(const Network& net, const std::string& id, const NonsignalingResource& replacement) {
  const std::size_t k = net.resource_index(id);
  if (!(replacement.signature() == net.resources()[k].signature()))
    throw InputError("replace_resource: signature of '" + id + "' differs");
  std::vector<NonsignalingResource> resources = net.resources();
  resources[k] = replacement.with_id(id);
  std::vector<std::vector<std::string>> labels;
  for (std::size_t p = 0; p < net.party_count(); ++p) labels.push_back(net.outcome_labels(p));
  return Network::create(net.parties(), std::move(resources), net.trees(), net.bins())
      .with_outcome_labels(std::move(labels));
}

}  // namespace nonsig
