#include "random_network.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "nonsig/resource.hpp"
#include "nonsig/tree.hpp"

namespace nonsig::testing {

std::size_t uniform_index(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

namespace {

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Alphabet random_alphabet(Rng& rng, std::size_t max_size, bool allow_gaps) {
  const std::size_t k = 1 + uniform_index(rng, max_size);
  if (!allow_gaps || !coin(rng, 0.25)) return Alphabet::range(k);
  std::vector<int> pool{0, 1, 2, 3, 4, 5};
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return Alphabet(pool);
}

/// Random deterministic component, optionally with a PR-class correlation
/// between two parties whose alphabets have at least two entries (indices
/// 0/1 of their outputs; inputs coarse-grained to index >= 1).
NonsignalingResource random_component(Rng& rng, const Signature& sig) {
  const std::size_t n = sig.party_count();
  std::vector<std::vector<std::size_t>> f(n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t x = 0; x < sig.inputs(p).size(); ++x) f[p].push_back(uniform_index(rng, sig.outputs(p).size()));

  std::vector<std::size_t> eligible;
  for (std::size_t p = 0; p < n; ++p)
    if (sig.inputs(p).size() >= 2 && sig.outputs(p).size() >= 2) eligible.push_back(p);
  if (eligible.size() >= 2 && coin(rng, 0.6)) {
    std::shuffle(eligible.begin(), eligible.end(), rng);
    std::size_t i = std::min(eligible[0], eligible[1]), j = std::max(eligible[0], eligible[1]);
    const std::size_t alpha = uniform_index(rng, 2), beta = uniform_index(rng, 2), gamma = uniform_index(rng, 2);
    return NonsignalingResource::build("c", sig, [&](const IndexTuple& in, const IndexTuple& out) {
      for (std::size_t p = 0; p < n; ++p)
        if (p != i && p != j && out[p] != f[p][in[p]]) return Rational(0);
      if (out[i] > 1 || out[j] > 1) return Rational(0);
      const std::size_t x = in[i] >= 1, y = in[j] >= 1;
      return (out[i] ^ out[j]) == ((x * y) ^ (alpha * x) ^ (beta * y) ^ gamma) ? frac(1, 2) : Rational(0);
    });
  }
  return NonsignalingResource::build("c", sig, [&](const IndexTuple& in, const IndexTuple& out) {
    for (std::size_t p = 0; p < n; ++p)
      if (out[p] != f[p][in[p]]) return Rational(0);
    return Rational(1);
  });
}

Node random_node(Rng& rng, const std::string& party, std::vector<const NonsignalingResource*> remaining,
                 int label_policy) {
  if (remaining.empty()) {
    if (label_policy == 1) return Node::leaf(std::to_string(uniform_index(rng, 2)));
    if (label_policy == 2) return Node::leaf(std::string(1, static_cast<char>('x' + uniform_index(rng, 3))));
    return Node::leaf();
  }
  const std::size_t pick = uniform_index(rng, remaining.size());
  const NonsignalingResource* r = remaining[pick];
  remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  const std::size_t slot = *r->signature().party_index(party);
  const Alphabet& ins = r->signature().inputs(slot);
  const int input = ins.symbol(uniform_index(rng, ins.size()));
  std::vector<int> labels = r->signature().outputs(slot).symbols();
  std::shuffle(labels.begin(), labels.end(), rng);
  std::vector<Node> children;
  for (std::size_t i = 0; i < labels.size(); ++i) children.push_back(random_node(rng, party, remaining, label_policy));
  return Node::consult(r->id(), input, std::move(labels), std::move(children));
}

void collect_labels(const Node& n, std::set<std::string>& out) {
  if (n.terminal()) {
    out.insert(n.outcome);
    return;
  }
  for (const auto& c : n.children) collect_labels(c, out);
}

}  // namespace

NonsignalingResource random_resource(Rng& rng, const std::string& id, std::vector<std::string> parties,
                                     std::vector<Alphabet> inputs, std::vector<Alphabet> outputs) {
  const Signature sig(std::move(parties), std::move(inputs), std::move(outputs));
  const std::size_t k = 1 + uniform_index(rng, 3);
  std::vector<NonsignalingResource> parts;
  std::vector<Rational> weights;
  long total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    parts.push_back(random_component(rng, sig));
    const long w = 1 + static_cast<long>(uniform_index(rng, 4));
    weights.emplace_back(w);
    total += w;
  }
  for (auto& w : weights) w = frac(w.get_num().get_si(), total);
  return convex_mix(id, weights, parts);
}

NonsignalingResource random_nonsignaling(Rng& rng, const std::string& id, std::vector<std::string> parties,
                                         std::vector<Alphabet> inputs, std::vector<Alphabet> outputs) {
  return random_resource(rng, id, std::move(parties), std::move(inputs), std::move(outputs));
}

DecisionTree random_tree(Rng& rng, const std::string& party, const Alphabet& settings,
                         const std::vector<NonsignalingResource>& resources, int label_policy) {
  DecisionTree t;
  t.party = party;
  t.settings = settings.symbols();
  std::vector<const NonsignalingResource*> mine;
  for (const auto& r : resources)
    if (r.signature().party_index(party)) {
      mine.push_back(&r);
      t.scope.insert(r.id());
    }
  for (std::size_t s = 0; s < settings.size(); ++s) t.roots.push_back(random_node(rng, party, mine, label_policy));
  return t;
}

Network random_network(Rng& rng, const RandomNetworkConfig& config) {
  const std::size_t n = 1 + uniform_index(rng, config.max_parties);
  std::vector<std::string> parties;
  for (std::size_t p = 0; p < n; ++p) parties.push_back(std::string(1, static_cast<char>('A' + p)));
  const std::size_t m = coin(rng, 0.05) ? 0 : 1 + uniform_index(rng, config.max_resources);
  const bool with_shared = coin(rng, config.shared_randomness);

  std::vector<NonsignalingResource> resources;
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<std::string> members;
    while (members.empty())
      for (const auto& p : parties)
        if (coin(rng, 0.5)) members.push_back(p);
    const bool input_free = with_shared && k == 0;
    const bool binary_pair = members.size() == 2 && !input_free && coin(rng, 0.5);
    std::vector<Alphabet> ins, outs;
    for (std::size_t i = 0; i < members.size(); ++i) {
      ins.push_back(input_free ? Alphabet::range(1)
                    : binary_pair ? Alphabet::range(2)
                                  : random_alphabet(rng, config.max_alphabet, true));
      outs.push_back(binary_pair ? Alphabet::range(2) : random_alphabet(rng, config.max_alphabet, true));
    }
    resources.push_back(random_resource(rng, "R" + std::to_string(k + 1), members, ins, outs));
  }

  std::vector<DecisionTree> trees;
  Bins bins;
  for (const auto& p : parties) {
    const int policy = config.outcome_labels ? static_cast<int>(uniform_index(rng, 3)) : 0;
    const Alphabet settings = random_alphabet(rng, config.max_alphabet, true);
    trees.push_back(random_tree(rng, p, settings, resources, policy));
    if (config.outcome_labels && policy == 0 && coin(rng, 0.3)) {
      std::set<std::string> labels;
      for (const auto& root : materialize_outcomes(trees.back()).roots) collect_labels(root, labels);
      for (const auto& l : labels) bins[p][l] = static_cast<int>(uniform_index(rng, 2));
    }
  }
  return Network::create(parties, std::move(resources), std::move(trees), std::move(bins));
}

Network random_wired_pr_network(Rng& rng) {
  const std::vector<std::string> parties{"A", "B", "C"};
  const std::vector<std::pair<std::string, std::string>> pairs{{"A", "B"}, {"B", "C"}, {"A", "C"}};
  const Alphabet bit = Alphabet::range(2);
  std::vector<NonsignalingResource> resources;
  int next = 0;
  for (const auto& [p, q] : pairs) {
    const std::size_t count = uniform_index(rng, 3) == 0 ? 2 : 1;
    for (std::size_t i = 0; i < count; ++i) {
      const std::string id = "P" + std::to_string(next++);
      const double kind = std::uniform_real_distribution<double>(0, 1)(rng);
      if (kind < 0.6) {
        resources.push_back(make_pr_class_box(static_cast<int>(uniform_index(rng, 2)),
                                              static_cast<int>(uniform_index(rng, 2)),
                                              static_cast<int>(uniform_index(rng, 2)), id, {p, q}));
      } else {
        resources.push_back(random_resource(rng, id, {p, q}, {bit, bit}, {bit, bit}));
      }
    }
  }
  const std::size_t shared = 1 + uniform_index(rng, 2);
  for (std::size_t i = 0; i < shared; ++i) {
    std::vector<std::string> members;
    while (members.empty())
      for (const auto& p : parties)
        if (coin(rng, 0.7)) members.push_back(p);
    std::vector<Rational> dist;
    long total = 0;
    for (std::size_t o = 0; o < (std::size_t{1} << members.size()); ++o) {
      const long w = static_cast<long>(uniform_index(rng, 4));
      dist.emplace_back(w);
      total += w;
    }
    if (total == 0) {
      dist[0] = 1;
      total = 1;
    }
    for (auto& d : dist) d = frac(d.get_num().get_si(), total);
    resources.push_back(make_shared_randomness("S" + std::to_string(i), members,
                                               std::vector<Alphabet>(members.size(), bit), dist));
  }
  std::vector<DecisionTree> trees;
  for (const auto& p : parties) trees.push_back(random_tree(rng, p, bit, resources, 1));
  return Network::create(parties, std::move(resources), std::move(trees))
      .with_outcome_labels({{"0", "1"}, {"0", "1"}, {"0", "1"}});
}

}  // namespace nonsig::testing
