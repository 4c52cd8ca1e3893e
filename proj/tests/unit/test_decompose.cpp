#include <gtest/gtest.h>

#include <cstdlib>

#include "nonsig/decompose.hpp"
#include "nonsig/error.hpp"
#include "nonsig/lp.hpp"
#include "random_network.hpp"

using namespace nonsig;
using nonsig::testing::Rng;
using nonsig::testing::uniform_index;

namespace {

const Alphabet kBit = Alphabet::range(2);

Signature bipartite_222() { return Signature({"A", "B"}, {kBit, kBit}, {kBit, kBit}); }

NonsignalingResource reconstruct(const Mixture<NonsignalingResource>& mix) {
  const auto& sig = mix.components.front().second.signature();
  std::vector<Rational> table(sig.input_tuple_count() * sig.output_tuple_count(), Rational(0));
  for (const auto& [w, r] : mix.components)
    for (std::size_t k = 0; k < table.size(); ++k) table[k] += w * r.table()[k];
  return NonsignalingResource::create("sum", sig, std::move(table));
}

/// sum_c w_c behavior(net_c), computed entry by entry.
Behavior mixed_behavior(const Mixture<Network>& mix) {
  std::vector<Rational> table;
  Signature sig;
  for (const auto& [w, net] : mix.components) {
    const auto b = induced_behavior(net);
    if (table.empty()) {
      sig = b.signature();
      table.assign(b.table().size(), Rational(0));
    }
    EXPECT_EQ(b.signature(), sig);
    for (std::size_t k = 0; k < table.size(); ++k) table[k] += w * b.table()[k];
  }
  return Behavior::new_unchecked("mix", sig, std::move(table));
}

void expect_valid_mixture(const Mixture<Network>& mix) {
  Rational total = 0;
  for (const auto& [w, net] : mix.components) {
    EXPECT_GT(w, 0);
    total += w;
  }
  EXPECT_EQ(total, Rational(1));
}

DecisionTree coin_then_pr(const std::string& party, const std::vector<std::string>& coins) {
  DecisionTree t;
  t.party = party;
  t.settings = {0, 1};
  t.scope.insert("PR");
  for (const auto& c : coins) t.scope.insert(c);
  for (int x : {0, 1}) {
    Node n = Node::consult("PR", x, {0, 1}, {Node::leaf(), Node::leaf()});
    for (auto it = coins.rbegin(); it != coins.rend(); ++it) n = Node::consult(*it, 0, {0, 1}, {n, n});
    t.roots.push_back(n);
  }
  return t;
}

Network pr_with_coins(std::size_t coins) {
  std::vector<NonsignalingResource> rs{make_pr_box()};
  std::vector<std::string> ids;
  for (std::size_t c = 0; c < coins; ++c) {
    ids.push_back("S" + std::to_string(c));
    rs.push_back(make_shared_randomness(ids.back(), {"A", "B"}, {kBit, kBit},
                                        {frac(1, 2), 0, 0, frac(1, 2)}));
  }
  return Network::create({"A", "B"}, rs, {coin_then_pr("A", ids), coin_then_pr("B", ids)});
}

DecisionTree pass_through(const std::string& party, const std::string& id) {
  DecisionTree t;
  t.party = party;
  t.settings = {0, 1};
  t.scope = {id};
  for (int x : {0, 1}) t.roots.push_back(Node::consult(id, x, {0, 1}, {Node::leaf("0"), Node::leaf("1")}));
  return t;
}

}  // namespace

TEST(Lp, FeasibleAndFarkas) {
  // x1 + x2 = 1, x1 - x2 = 0
  const std::vector<std::vector<Rational>> rows{{1, 1}, {1, -1}};
  auto r = solve_feasibility(rows, {1, 0});
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.x[0], frac(1, 2));
  EXPECT_EQ(r.x[1], frac(1, 2));
  // x1 + x2 = -1 has no non-negative solution.
  const std::vector<std::vector<Rational>> one{{1, 1}};
  auto bad = solve_feasibility(one, {-1});
  ASSERT_FALSE(bad.feasible);
  EXPECT_LE(bad.farkas[0] * 1, 0);
  EXPECT_GT(bad.farkas[0] * -1, 0);
}

TEST(Vertices, LocalDeterministicCounts) {
  EXPECT_EQ(local_deterministic_vertices(bipartite_222()).size(), 16u);
  EXPECT_EQ(local_deterministic_vertices(Signature({"A"}, {Alphabet({0})}, {kBit})).size(), 2u);
  EXPECT_EQ(local_deterministic_vertices(Signature({"A", "B", "C"}, {kBit, kBit, kBit}, {kBit, kBit, kBit})).size(),
            64u);
  const Signature mixed({"A", "B"}, {Alphabet::range(3), kBit}, {kBit, Alphabet::range(3)});
  EXPECT_EQ(local_deterministic_vertices(mixed).size(), 8u * 9u);
}

TEST(Vertices, CapRefusalNamesCount) {
  ::setenv("NONSIG_VERTEX_CAP", "10", 1);
  try {
    local_deterministic_vertices(bipartite_222());
    ADD_FAILURE() << "expected refusal";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("16"), std::string::npos) << e.what();
  }
  ::unsetenv("NONSIG_VERTEX_CAP");
  EXPECT_EQ(local_deterministic_vertices(bipartite_222()).size(), 16u);
}

TEST(Vertices, Ns222HasTwentyFourDistinct) {
  const auto vs = ns_vertices_222();
  ASSERT_EQ(vs.size(), 24u);
  std::size_t pr_class = 0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    EXPECT_TRUE(validate_nonsignaling(vs.vertices[i]).ok);
    for (std::size_t j = i + 1; j < vs.size(); ++j) EXPECT_FALSE(vs.vertices[i] == vs.vertices[j]);
    if (vs.kinds[i] == VertexKind::pr_class) {
      ++pr_class;
      EXPECT_FALSE(is_local(vs.vertices[i]).feasible());
    }
  }
  EXPECT_EQ(pr_class, 8u);
}

TEST(Decompose, UniformIsMixtureOfDeterministic) {
  const auto u = make_uniform("U", bipartite_222());
  const auto d = is_local(u);
  ASSERT_TRUE(d.feasible());
  EXPECT_EQ(reconstruct(*d.mixture), u);
  EXPECT_EQ(d.mixture->total_weight(), Rational(1));
}

TEST(Decompose, PrBoxIsItsOwnVertex) {
  const auto vs = ns_vertices_222();
  const auto d = decompose_extremal(make_pr_box(), vs);
  ASSERT_TRUE(d.feasible());
  ASSERT_EQ(d.mixture->size(), 1u);
  EXPECT_EQ(d.mixture->components[0].first, Rational(1));
  EXPECT_EQ(d.mixture->components[0].second, make_pr_box());
  EXPECT_EQ(vs.kinds[d.vertex_indices[0]], VertexKind::pr_class);
}

TEST(Decompose, PrBoxNotLocalWithSeparatingCertificate) {
  const auto pr = make_pr_box();
  const auto d = is_local(pr);
  ASSERT_FALSE(d.feasible());
  ASSERT_TRUE(d.certificate);
  const auto& cert = *d.certificate;
  EXPECT_EQ(cert.evaluate(pr), cert.value_on_target);
  Rational best = cert.evaluate(local_deterministic_vertices(pr.signature()).vertices.front());
  for (const auto& v : local_deterministic_vertices(pr.signature()).vertices) best = std::max(best, cert.evaluate(v));
  EXPECT_EQ(best, cert.max_on_vertices);
  EXPECT_GT(cert.value_on_target, cert.bound);
  EXPECT_GE(cert.bound, best);
}

TEST(Decompose, HalfPrHalfAntiPrIsLocal) {
  const std::vector<NonsignalingResource> parts{make_pr_box(), make_pr_class_box(0, 0, 1)};
  const std::vector<Rational> w{frac(1, 2), frac(1, 2)};
  const auto r = convex_mix("M", w, parts);
  const auto d = is_local(r);
  ASSERT_TRUE(d.feasible());
  EXPECT_EQ(reconstruct(*d.mixture), r);
  for (const auto& [wt, v] : d.mixture->components) EXPECT_TRUE(local_deterministic_functions(v).has_value());
}

TEST(Decompose, NoisyPrThreeQuarters) {
  const auto r = noisy_pr_box(frac(3, 4));
  EXPECT_FALSE(is_local(r).feasible());
  const auto d = decompose_extremal(r, ns_vertices_222());
  ASSERT_TRUE(d.feasible());
  EXPECT_EQ(reconstruct(*d.mixture), r);
}

TEST(Decompose, NoisyPrLocalIffAtMostHalf) {
  for (int k = 0; k <= 8; ++k) {
    const auto r = noisy_pr_box(frac(k, 8));
    const auto d = is_local(r);
    EXPECT_EQ(d.feasible(), k <= 4) << "v = " << k << "/8";
    if (d.feasible()) {
      EXPECT_EQ(reconstruct(*d.mixture), r);
    } else {
      EXPECT_GT(d.certificate->evaluate(r), d.certificate->bound);
    }
  }
}

TEST(Decompose, DeterministicResourceHasWeightOne) {
  const auto r = make_local_deterministic("D", {"A", "B"}, {kBit, kBit}, {kBit, kBit}, {{{0, 1}, {1, 0}}, {{0, 1}, {1, 1}}});
  const auto d = is_local(r);
  ASSERT_TRUE(d.feasible());
  ASSERT_EQ(d.mixture->size(), 1u);
  EXPECT_EQ(d.mixture->components[0].second, r);
}

TEST(Decompose, SignatureMismatchIsInputError) {
  const Signature other({"A", "B"}, {kBit, Alphabet::range(3)}, {kBit, kBit});
  EXPECT_THROW(decompose_extremal(make_uniform("U", other), ns_vertices_222()), InputError);
}

TEST(Decompose, RandomResourcesReconstructOrSeparate) {
  Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const auto r = nonsig::testing::random_resource(rng, "R", {"A", "B"}, {kBit, kBit}, {kBit, kBit});
    const auto d = decompose_extremal(r, ns_vertices_222());
    ASSERT_TRUE(d.feasible());
    EXPECT_EQ(reconstruct(*d.mixture), r);
    const auto loc = is_local(r);
    if (loc.feasible()) {
      EXPECT_EQ(reconstruct(*loc.mixture), r);
    } else {
      EXPECT_TRUE(validate_nonsignaling(r).ok);
      EXPECT_GT(loc.certificate->evaluate(r), loc.certificate->max_on_vertices);
    }
  }
}

TEST(VertexSets, ExternalSetsValidated) {
  EXPECT_THROW(make_vertex_set({}, {}), InputError);
  EXPECT_THROW(make_vertex_set({make_pr_box(), make_pr_box()}, {VertexKind::external, VertexKind::external}),
               DomainError);
  EXPECT_THROW(make_vertex_set({make_pr_box()}, {}), InputError);
  const Signature other({"A", "B"}, {kBit, Alphabet::range(3)}, {kBit, kBit});
  EXPECT_THROW(make_vertex_set({make_pr_box(), make_uniform("U", other)}, {VertexKind::external, VertexKind::external}),
               DomainError);
  const auto signaling = NonsignalingResource::build(
      "S", bipartite_222(), [](const IndexTuple& in, const IndexTuple& out) { return out[0] == in[1] ? frac(1, 2) : Rational(0); },
      false);
  EXPECT_THROW(make_vertex_set({signaling}, {VertexKind::external}), DomainError);
  const auto vs = make_vertex_set({make_pr_box(), make_pr_class_box(0, 0, 1)}, {VertexKind::external, VertexKind::external});
  const std::vector<NonsignalingResource> parts{make_pr_box(), make_pr_class_box(0, 0, 1)};
  const std::vector<Rational> w{frac(1, 3), frac(2, 3)};
  const auto d = decompose_extremal(convex_mix("M", w, parts), vs);
  ASSERT_TRUE(d.feasible());
  EXPECT_EQ(d.mixture->components[0].first, frac(1, 3));
}

TEST(FactorOut, NoSharedRandomnessIsSingleton) {
  const auto net = pr_with_coins(0);
  const auto mix = factor_out_shared_randomness(net);
  ASSERT_EQ(mix.size(), 1u);
  EXPECT_EQ(mix.components[0].first, Rational(1));
}

TEST(FactorOut, OneCoinTwoComponents) {
  const auto net = pr_with_coins(1);
  const auto mix = factor_out_shared_randomness(net);
  ASSERT_EQ(mix.size(), 2u);
  expect_valid_mixture(mix);
  for (const auto& [w, n] : mix.components) {
    EXPECT_EQ(w, frac(1, 2));
    EXPECT_EQ(n.resources().size(), 1u);
  }
  EXPECT_EQ(mixed_behavior(mix), induced_behavior(net));
  EXPECT_EQ(mixture_behavior(mix), induced_behavior(net));
}

TEST(FactorOut, TwoCoinsFourComponents) {
  const auto base = pr_with_coins(2);
  // S1 replaced by a pair of independent fair bits.
  const auto s1 = make_shared_randomness("S1", {"A", "B"}, {kBit, kBit}, {frac(1, 4), frac(1, 4), frac(1, 4), frac(1, 4)});
  const auto net = replace_resource(base, "S1", s1);
  const auto mix = factor_out_shared_randomness(net);
  ASSERT_EQ(mix.size(), 8u);  // S0 correlated (2 values) x S1 product (4 values)
  expect_valid_mixture(mix);
  EXPECT_EQ(mixed_behavior(mix), induced_behavior(net));

  const auto mix4 = factor_out_shared_randomness(base);
  EXPECT_EQ(mix4.size(), 4u);
  EXPECT_EQ(mixed_behavior(mix4), induced_behavior(base));
}

TEST(FactorOut, RandomNetworksPreserveBehavior) {
  Rng rng(42);
  nonsig::testing::RandomNetworkConfig cfg;
  cfg.shared_randomness = 1.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto net = nonsig::testing::random_network(rng, cfg);
    const auto mix = factor_out_shared_randomness(net, false);
    expect_valid_mixture(mix);
    for (const auto& [w, n] : mix.components)
      for (const auto& r : n.resources()) EXPECT_FALSE(r.signature().input_free());
    EXPECT_EQ(mixed_behavior(mix), induced_behavior(net)) << "trial " << trial;
  }
}

TEST(Expand, NoisyPrNetworkMixesExtremalNetworks) {
  const auto net = Network::create({"A", "B"}, {noisy_pr_box(frac(3, 4)).with_id("PR")},
                                   {pass_through("A", "PR"), pass_through("B", "PR")});
  const std::map<std::string, VertexSet> sets{{"PR", ns_vertices_222()}};
  const auto mix = expand_to_extremal_mixture(net, sets, false, false);
  EXPECT_LE(mix.size(), 24u);
  expect_valid_mixture(mix);
  EXPECT_EQ(mixed_behavior(mix), induced_behavior(net));
}

TEST(Expand, ExtremalNetworkIsSingleton) {
  const auto net = Network::create({"A", "B"}, {make_pr_box()}, {pass_through("A", "PR"), pass_through("B", "PR")});
  const auto mix = expand_to_extremal_mixture(net, {{"PR", ns_vertices_222()}});
  ASSERT_EQ(mix.size(), 1u);
  EXPECT_EQ(mixed_behavior(mix), induced_behavior(net));
}

TEST(Expand, InfeasibleResourceIsDomainError) {
  const auto net = Network::create({"A", "B"}, {make_pr_box()}, {pass_through("A", "PR"), pass_through("B", "PR")});
  EXPECT_THROW(expand_to_extremal_mixture(net, {{"PR", local_deterministic_vertices(bipartite_222())}}), DomainError);
}

TEST(Expand, DeterministicResourcesExcised) {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto net = nonsig::testing::random_network(rng);
    std::map<std::string, VertexSet> sets;
    for (const auto& r : net.resources()) sets.emplace(r.id(), local_deterministic_vertices(r.signature()));
    bool local = true;
    for (const auto& r : net.resources())
      if (!is_local(r).feasible()) local = false;
    if (!local) {
      EXPECT_THROW(expand_to_extremal_mixture(net, sets), DomainError);
      continue;
    }
    const auto mix = expand_to_extremal_mixture(net, sets, true, false);
    expect_valid_mixture(mix);
    for (const auto& [w, n] : mix.components) EXPECT_TRUE(n.resources().empty());
    EXPECT_EQ(mixed_behavior(mix), induced_behavior(net)) << "trial " << trial;
  }
}

TEST(Excise, LocalDeterministicKeepsBehavior) {
  Rng rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    const auto net = nonsig::testing::random_network(rng);
    const auto cut = excise_local_deterministic(net);
    for (const auto& r : cut.resources()) EXPECT_FALSE(local_deterministic_functions(r).has_value());
    EXPECT_EQ(induced_behavior(cut), induced_behavior(net)) << "trial " << trial;
  }
}
