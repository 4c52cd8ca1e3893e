#include "nonsig/decompose.hpp"

#include <cstdlib>
#include <set>

#include "nonsig/error.hpp"
#include "nonsig/lp.hpp"

namespace nonsig {

const char* to_string(VertexKind kind) {
  switch (kind) {
    case VertexKind::deterministic: return "deterministic";
    case VertexKind::pr_class: return "pr-class";
    case VertexKind::external: return "external";
  }
  return "external";
}

VertexSet make_vertex_set(std::vector<NonsignalingResource> vertices, std::vector<VertexKind> kinds) {
  if (vertices.empty()) throw InputError("vertex set is empty");
  if (kinds.size() != vertices.size()) throw InputError("vertex set needs one kind per vertex");
  std::set<std::vector<Rational>> seen;
  const Signature& sig = vertices.front().signature();
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto& v = vertices[i];
    if (!(v.signature() == sig)) throw DomainError("vertex '" + v.id() + "' has a different signature");
    if (!v.nonsignaling_checked()) {
      auto report = validate_nonsignaling(v);
      if (!report.ok) throw DomainError("vertex '" + v.id() + "' is not nonsignaling: " + report.message);
    }
    if (!seen.insert(v.table()).second) throw DomainError("vertex '" + v.id() + "' repeats an earlier vertex");
  }
  return VertexSet{std::move(vertices), std::move(kinds)};
}

std::size_t vertex_cap() {
  if (const char* env = std::getenv("NONSIG_VERTEX_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1000000;
}

VertexSet local_deterministic_vertices(const Signature& sig) {
  const std::size_t cap = vertex_cap();
  std::vector<std::size_t> per_party;
  std::size_t count = 1;
  bool over = false;
  std::string count_text;
  mpz_class exact = 1;
  for (std::size_t p = 0; p < sig.party_count(); ++p) {
    std::size_t f = 1;
    for (std::size_t i = 0; i < sig.inputs(p).size(); ++i) {
      f *= sig.outputs(p).size();
      if (f > cap) over = true;
      if (over) break;
    }
    per_party.push_back(f);
    if (!over) {
      count *= f;
      if (count > cap) over = true;
    }
    mpz_class term;
    mpz_ui_pow_ui(term.get_mpz_t(), sig.outputs(p).size(), sig.inputs(p).size());
    exact *= term;
    count_text += (p ? "*" : "") + std::to_string(sig.outputs(p).size()) + "^" + std::to_string(sig.inputs(p).size());
  }
  if (over)
    throw DomainError("local deterministic vertex count " + count_text + " = " + exact.get_str() + " exceeds the cap of " + std::to_string(cap) +
                      " (NONSIG_VERTEX_CAP)");

  VertexSet vs;
  vs.vertices.reserve(count);
  IndexTuple choice(sig.party_count(), 0);
  std::size_t n = 0;
  do {
    // Function of party p: digits of choice[p] in base |out_p|, first input most significant.
    std::vector<IndexTuple> f(sig.party_count());
    for (std::size_t p = 0; p < sig.party_count(); ++p) {
      f[p].assign(sig.inputs(p).size(), 0);
      std::size_t c = choice[p];
      for (std::size_t i = sig.inputs(p).size(); i-- > 0;) {
        f[p][i] = c % sig.outputs(p).size();
        c /= sig.outputs(p).size();
      }
    }
    vs.vertices.push_back(NonsignalingResource::build(
        "D" + std::to_string(n++), sig, [&](const IndexTuple& in, const IndexTuple& out) {
          for (std::size_t p = 0; p < in.size(); ++p)
            if (f[p][in[p]] != out[p]) return Rational(0);
          return Rational(1);
        }));
    vs.kinds.push_back(VertexKind::deterministic);
  } while (next_index(choice, per_party));
  if (vs.size() != count) throw DomainError("local deterministic enumeration produced the wrong count");
  return vs;
}

VertexSet ns_vertices_222(const std::vector<std::string>& parties) {
  const Signature sig(parties, {Alphabet::range(2), Alphabet::range(2)}, {Alphabet::range(2), Alphabet::range(2)});
  VertexSet det = local_deterministic_vertices(sig);
  std::vector<NonsignalingResource> vertices = det.vertices;
  std::vector<VertexKind> kinds = det.kinds;
  for (int alpha = 0; alpha < 2; ++alpha)
    for (int beta = 0; beta < 2; ++beta)
      for (int gamma = 0; gamma < 2; ++gamma) {
        vertices.push_back(make_pr_class_box(alpha, beta, gamma,
                                             "PR" + std::to_string(alpha) + std::to_string(beta) + std::to_string(gamma),
                                             parties));
        kinds.push_back(VertexKind::pr_class);
      }
  VertexSet vs = make_vertex_set(std::move(vertices), std::move(kinds));
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs.kinds[i] != VertexKind::pr_class) continue;
    VertexSet others;
    for (std::size_t j = 0; j < vs.size(); ++j)
      if (j != i) {
        others.vertices.push_back(vs.vertices[j]);
        others.kinds.push_back(vs.kinds[j]);
      }
    if (decompose_extremal(vs.vertices[i], others).feasible())
      throw DomainError("vertex '" + vs.vertices[i].id() + "' lies in the hull of the others");
  }
  return vs;
}

Rational SeparatingFunctional::evaluate(const NonsignalingResource& r) const {
  if (!(r.signature() == signature)) throw InputError("functional and resource signatures differ");
  Rational v = 0;
  for (std::size_t e = 0; e < coefficients.size(); ++e)
    if (sgn(coefficients[e]) != 0) v += coefficients[e] * r.table()[e];
  return v;
}

Decomposition decompose_extremal(const NonsignalingResource& r, const VertexSet& vs) {
  if (vs.vertices.empty()) throw InputError("decompose: empty vertex set");
  if (!(r.signature() == vs.signature())) throw InputError("decompose: resource and vertex signatures differ");
  const std::size_t entries = r.table().size();
  const std::size_t n = vs.size();
  std::vector<std::vector<Rational>> rows(entries + 1, std::vector<Rational>(n));
  std::vector<Rational> b(entries + 1);
  for (std::size_t e = 0; e < entries; ++e) {
    for (std::size_t j = 0; j < n; ++j) rows[e][j] = vs.vertices[j].table()[e];
    b[e] = r.table()[e];
  }
  for (std::size_t j = 0; j < n; ++j) rows[entries][j] = 1;
  b[entries] = 1;

  const FeasibilityResult lp = solve_feasibility(rows, b);
  Decomposition d;
  if (lp.feasible) {
    Mixture<NonsignalingResource> mix;
    std::vector<Rational> rebuilt(entries, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(lp.x[j]) == 0) continue;
      if (sgn(lp.x[j]) < 0) throw DomainError("decompose: negative weight in solution");
      mix.components.emplace_back(lp.x[j], vs.vertices[j]);
      d.vertex_indices.push_back(j);
      for (std::size_t e = 0; e < entries; ++e) rebuilt[e] += lp.x[j] * vs.vertices[j].table()[e];
    }
    if (mix.total_weight() != 1 || rebuilt != r.table())
      throw DomainError("decompose: solution does not reproduce the resource");
    d.mixture = std::move(mix);
    return d;
  }

  SeparatingFunctional f;
  f.signature = r.signature();
  f.coefficients.assign(lp.farkas.begin(), lp.farkas.begin() + static_cast<std::ptrdiff_t>(entries));
  const Rational farkas_bound = -lp.farkas[entries];
  f.value_on_target = f.evaluate(r);
  for (std::size_t j = 0; j < n; ++j) {
    Rational v = f.evaluate(vs.vertices[j]);
    if (j == 0 || v > f.max_on_vertices) f.max_on_vertices = v;
  }
  if (!(f.max_on_vertices <= farkas_bound && farkas_bound < f.value_on_target))
    throw DomainError("decompose: infeasibility certificate does not separate");
  f.bound = f.max_on_vertices;
  d.certificate = std::move(f);
  return d;
}

Decomposition is_local(const NonsignalingResource& r) {
  return decompose_extremal(r, local_deterministic_vertices(r.signature()));
}

NonsignalingResource noisy_pr_box(Rational v, const std::vector<std::string>& parties) {
  v.canonicalize();
  if (sgn(v) < 0 || v > 1) throw InputError("noisy_pr_box: visibility must lie in [0, 1]");
  const NonsignalingResource pr = make_pr_box("PR", parties);
  const NonsignalingResource parts[] = {pr, make_uniform("U", pr.signature())};
  const Rational weights[] = {v, Rational(1) - v};
  return convex_mix("noisyPR", weights, parts);
}

Behavior mixture_behavior(const Mixture<Network>& mix, const EvalOptions& options) {
  if (mix.components.empty()) throw InputError("empty mixture");
  std::optional<Behavior> sum;
  std::vector<Rational> table;
  for (const auto& [w, net] : mix.components) {
    const Behavior b = induced_behavior(net, options);
    if (!sum) {
      sum = b;
      table.assign(b.table().size(), Rational(0));
    } else if (!(b.signature() == sum->signature())) {
      throw DomainError("mixture components induce behaviors of different signatures");
    }
    for (std::size_t e = 0; e < table.size(); ++e)
      if (sgn(b.table()[e]) != 0) table[e] += w * b.table()[e];
  }
  return Behavior::new_unchecked("behavior", sum->signature(), std::move(table));
}

namespace {

std::vector<std::vector<std::string>> labels_of(const Network& net) {
  std::vector<std::vector<std::string>> labels;
  for (std::size_t p = 0; p < net.party_count(); ++p) labels.push_back(net.outcome_labels(p));
  return labels;
}

void verify_mixture(const Mixture<Network>& mix, const Network& net, const EvalOptions& options, const char* what) {
  if (mixture_behavior(mix, options) != induced_behavior(net, options))
    throw DomainError(std::string(what) + ": mixture does not reproduce the behavior");
}

}  // namespace

Mixture<Network> factor_out_shared_randomness(const Network& net, bool verify, const EvalOptions& options) {
  std::vector<NonsignalingResource> shared;
  std::vector<NonsignalingResource> kept;
  for (const auto& r : net.resources()) (r.signature().input_free() ? shared : kept).push_back(r);
  Mixture<Network> mix;
  if (shared.empty()) {
    mix.components.emplace_back(Rational(1), net);
    return mix;
  }
  const CombinedRandomness combined = combine_shared_randomness("lambda", shared);
  const auto& csig = combined.resource.signature();
  const auto labels = labels_of(net);
  for (std::size_t o = 0; o < csig.output_tuple_count(); ++o) {
    const Rational& w = combined.resource.at(0, o);
    if (sgn(w) == 0) continue;
    const auto split = combined.split(csig.decode_outputs(o));
    std::vector<DecisionTree> trees = net.trees();
    for (std::size_t c = 0; c < shared.size(); ++c) {
      const auto& sig = shared[c].signature();
      for (std::size_t s = 0; s < sig.party_count(); ++s) {
        auto& tree = trees[net.party_index(sig.party(s))];
        tree = excise_input_free(tree, shared[c].id(), sig.outputs(s).symbol(split[c][s]));
      }
    }
    mix.components.emplace_back(
        w, Network::create(net.parties(), kept, std::move(trees), net.bins()).with_outcome_labels(labels));
  }
  if (verify) verify_mixture(mix, net, options, "factor_out_shared_randomness");
  return mix;
}

Network excise_local_deterministic(const Network& net) {
  std::vector<DecisionTree> trees = net.trees();
  std::vector<NonsignalingResource> kept;
  for (const auto& r : net.resources()) {
    const auto f = local_deterministic_functions(r);
    if (!f) {
      kept.push_back(r);
      continue;
    }
    const auto& sig = r.signature();
    for (std::size_t s = 0; s < sig.party_count(); ++s) {
      auto& tree = trees[net.party_index(sig.party(s))];
      const auto& fs = (*f)[s];
      tree = excise(tree, r.id(), [&](int x) { return sig.outputs(s).symbol(fs[*sig.inputs(s).index_of(x)]); });
    }
  }
  return Network::create(net.parties(), std::move(kept), std::move(trees), net.bins()).with_outcome_labels(labels_of(net));
}

Mixture<Network> expand_to_extremal_mixture(const Network& net, const std::map<std::string, VertexSet>& vertex_sets,
                                            bool excise_deterministic, bool verify, const EvalOptions& options) {
  for (const auto& [id, _] : vertex_sets) net.resource_index(id);
  Mixture<Network> mix;
  mix.components.emplace_back(Rational(1), net);
  for (const auto& r : net.resources()) {
    auto vs = vertex_sets.find(r.id());
    if (vs == vertex_sets.end()) continue;
    const Decomposition d = decompose_extremal(r, vs->second);
    if (!d.feasible()) throw DomainError("resource '" + r.id() + "' is not in the hull of its vertex set");
    Mixture<Network> next;
    for (const auto& [w, component] : mix.components)
      for (const auto& [p, vertex] : d.mixture->components)
        next.components.emplace_back(w * p, replace_resource(component, r.id(), vertex));
    mix = std::move(next);
  }
  if (excise_deterministic)
    for (auto& [w, component] : mix.components) component = excise_local_deterministic(component);
  if (verify) verify_mixture(mix, net, options, "expand_to_extremal_mixture");
  return mix;
}

}  // namespace nonsig
