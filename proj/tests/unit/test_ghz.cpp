#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nonsig/error.hpp"
#include "nonsig/ghz.hpp"
#include "nonsig/inequality.hpp"
#include "nonsig/json_io.hpp"
#include "random_network.hpp"

using namespace nonsig;
using nonsig::testing::Rng;

namespace {

const std::string kFixtures = NONSIG_FIXTURE_DIR;
constexpr double kPi = std::numbers::pi;

QuantumStrategy uniform_angles(double a) { return QuantumStrategy{{{a, a}, {a, a}, {a, a}}}; }

QuantumStrategy random_strategy(Rng& rng, std::size_t parties = 3) {
  std::uniform_real_distribution<double> angle(0, 2 * kPi);
  QuantumStrategy s;
  for (std::size_t p = 0; p < parties; ++p) s.angles.push_back({angle(rng), angle(rng)});
  return s;
}

// Outcome probability from the measurement eigenvectors: for cos(t) Z + sin(t) X
// the +1 eigenvector is (cos t/2, sin t/2) and the -1 one (-sin t/2, cos t/2);
// the GHZ amplitude is (prod v_p[0] + prod v_p[1]) / sqrt(2).
double eigenvector_probability(const QuantumStrategy& s, const IndexTuple& settings, const IndexTuple& outcomes) {
  double zero = 1, one = 1;
  for (std::size_t p = 0; p < s.party_count(); ++p) {
    const double h = s.angles[p][settings[p]] / 2;
    zero *= outcomes[p] == 0 ? std::cos(h) : -std::sin(h);
    one *= outcomes[p] == 0 ? std::sin(h) : std::cos(h);
  }
  const double amp = (zero + one) / std::sqrt(2.0);
  return amp * amp;
}

LinearInequality trivial_inequality() {
  LinearInequality ineq;
  ineq.name = "trivial";
  ineq.settings_per_party = {2, 2, 2};
  ineq.terms.push_back(make_term(1, {kA, kB}, {0, 0}));
  ineq.bound = 1;
  return ineq;
}

}  // namespace

TEST(GhzBehavior, ZMeasurementsArePerfectlyCorrelated) {
  const auto b = ghz_behavior(uniform_angles(0));
  const auto& sig = b.signature();
  for (std::size_t i = 0; i < sig.input_tuple_count(); ++i)
    for (std::size_t o = 0; o < sig.output_tuple_count(); ++o) {
      const auto out = sig.decode_outputs(o);
      const bool equal = out[0] == out[1] && out[1] == out[2];
      EXPECT_NEAR(b.at(i, o), equal ? 0.5 : 0.0, 1e-12);
    }
}

TEST(GhzBehavior, XMeasurementsHavePositiveParity) {
  const auto s = uniform_angles(kPi / 2);
  const auto b = ghz_behavior(s);
  const std::size_t all[]{0, 1, 2};
  IndexTuple settings(3, 0);
  const std::vector<std::size_t> radix{2, 2, 2};
  do {
    EXPECT_NEAR(correlator(b, all, settings), 1.0, 1e-12);
    EXPECT_NEAR(ghz_correlator(s, all, settings), 1.0, 1e-12);
  } while (next_index(settings, radix));
}

TEST(GhzBehavior, MatchesEigenvectorOracle) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_strategy(rng);
    const auto b = ghz_behavior(s);
    const auto& sig = b.signature();
    for (std::size_t i = 0; i < sig.input_tuple_count(); ++i)
      for (std::size_t o = 0; o < sig.output_tuple_count(); ++o)
        EXPECT_NEAR(b.at(i, o), eigenvector_probability(s, sig.decode_inputs(i), sig.decode_outputs(o)), 1e-12);
  }
}

TEST(GhzBehavior, ColumnsNormalizedAndNonsignaling) {
  Rng rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const auto b = ghz_behavior(random_strategy(rng));
    const auto& sig = b.signature();
    for (std::size_t i = 0; i < sig.input_tuple_count(); ++i) {
      double sum = 0;
      for (std::size_t o = 0; o < sig.output_tuple_count(); ++o) {
        EXPECT_GE(b.at(i, o), -1e-15);
        EXPECT_LE(b.at(i, o), 1 + 1e-15);
        sum += b.at(i, o);
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
    EXPECT_TRUE(validate_nonsignaling(b, 1e-10).ok);
  }
}

TEST(GhzBehavior, SinglePartyMarginalsUniform) {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_strategy(rng);
    const auto b = ghz_behavior(s);
    for (std::size_t p = 0; p < 3; ++p)
      for (std::size_t x = 0; x < 2; ++x) {
        const std::size_t party[]{p}, setting[]{x};
        EXPECT_NEAR(correlator(b, party, setting), 0.0, 1e-12);
      }
  }
}

TEST(GhzBehavior, ClosedFormMatchesStateVector) {
  Rng rng(24);
  const std::vector<std::vector<std::size_t>> subsets{{0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = random_strategy(rng);
    const auto b = ghz_behavior(s);
    for (const auto& parties : subsets) {
      IndexTuple settings(parties.size(), 0);
      const std::vector<std::size_t> radix(parties.size(), 2);
      do {
        EXPECT_NEAR(ghz_correlator(s, parties, settings), correlator(b, parties, settings), 1e-12);
      } while (next_index(settings, radix));
    }
  }
}

TEST(GhzBehavior, SymmetricUnderPartyPermutation) {
  Rng rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_strategy(rng);
    const auto b = ghz_behavior(s);
    const std::size_t order[]{2, 0, 1};
    QuantumStrategy permuted;
    for (auto p : order) permuted.angles.push_back(s.angles[p]);
    const auto bp = ghz_behavior(permuted);
    const auto& sig = b.signature();
    for (std::size_t i = 0; i < sig.input_tuple_count(); ++i)
      for (std::size_t o = 0; o < sig.output_tuple_count(); ++o) {
        const auto in = sig.decode_inputs(i), out = sig.decode_outputs(o);
        IndexTuple pin, pout;
        for (auto p : order) {
          pin.push_back(in[p]);
          pout.push_back(out[p]);
        }
        EXPECT_NEAR(bp.prob(pout, pin), b.at(i, o), 1e-12);
      }
  }
}

TEST(GhzBehavior, ValueAgreesWithExactEvaluatorPath) {
  Rng rng(26);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = random_strategy(rng);
    EXPECT_NEAR(ghz_value(mao_inequality(), s), evaluate(mao_inequality(), ghz_behavior(s)).value, 1e-12);
  }
}

TEST(GhzBehavior, InvalidStrategiesRejected) {
  EXPECT_THROW(ghz_behavior(QuantumStrategy{}), InputError);
  EXPECT_THROW(ghz_behavior(QuantumStrategy{{{0.0}, {}}}), InputError);
  EXPECT_THROW(ghz_behavior(QuantumStrategy{{{0.0, std::nan("")}, {0.0, 0.0}, {0.0, 0.0}}}), InputError);
  EXPECT_THROW(ghz_behavior(QuantumStrategy{{{0.0, INFINITY}, {0.0, 0.0}, {0.0, 0.0}}}), InputError);
}

TEST(GhzSearch, MaoViolated) {
  const auto r = search_max_violation(mao_inequality());
  EXPECT_GT(r.value, 4.1);
  EXPECT_GE(r.value, r.grid_value);
  EXPECT_NEAR(ghz_value(mao_inequality(), r.strategy), r.value, 1e-12);
  const auto e = evaluate(mao_inequality(), ghz_behavior(r.strategy));
  EXPECT_FALSE(e.satisfied);
}

TEST(GhzSearch, TrivialInequalityStaysBounded) {
  const auto r = search_max_violation(trivial_inequality());
  EXPECT_LE(r.value, 1 + 1e-9);
  EXPECT_NEAR(r.value, 1.0, 1e-9);
}

TEST(GhzSearch, CaoExceedsEight) {
  const auto r = search_max_violation(cao_inequality());
  EXPECT_GT(r.value, 8.0);
}

TEST(GhzSearch, DeterministicAcrossThreadCounts) {
  SearchOptions one{8, 1e-3, 1}, many{8, 1e-3, 5};
  const auto a = search_max_violation(mao_inequality(), one);
  const auto b = search_max_violation(mao_inequality(), many);
  EXPECT_EQ(a.strategy.angles, b.strategy.angles);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.grid_value, b.grid_value);
}

TEST(GhzSearch, SnapshotReproduces) {
  const auto j = read_json_file(kFixtures + "/ghz/mao_strategy.json");
  const auto s = strategy_from_json(j);
  const double value = j.at("value").get<double>();
  EXPECT_NEAR(ghz_value(mao_inequality(), s), value, 1e-9);
  EXPECT_NEAR(evaluate(mao_inequality(), ghz_behavior(s)).value, value, 1e-9);
  SearchOptions opts;
  opts.grid = j.at("grid").get<std::size_t>();
  opts.refine = j.at("refine").get<double>();
  const auto r = search_max_violation(mao_inequality(), opts);
  EXPECT_NEAR(r.value, value, 1e-9);
}
