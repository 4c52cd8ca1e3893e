#include "nonsig/ghz.hpp"

#include <cmath>
#include <numbers>
#include <thread>

#include "nonsig/error.hpp"

namespace nonsig {

std::vector<std::size_t> QuantumStrategy::settings_per_party() const {
  std::vector<std::size_t> out;
  for (const auto& a : angles) out.push_back(a.size());
  return out;
}

void validate_strategy(const QuantumStrategy& s) {
  if (s.angles.empty()) throw InputError("strategy has no parties");
  for (std::size_t p = 0; p < s.angles.size(); ++p) {
    if (s.angles[p].empty()) throw InputError("strategy party " + std::to_string(p) + " has no settings");
    for (double a : s.angles[p])
      if (!std::isfinite(a)) throw InputError("strategy angle is not finite");
  }
}

FloatBehavior ghz_behavior(const QuantumStrategy& s) {
  validate_strategy(s);
  const std::size_t n = s.party_count();
  // Eigenvector components <0|v>, <1|v> for outcome o at party p, setting x.
  auto component = [&](std::size_t p, std::size_t x, std::size_t o, int basis) {
    const double h = s.angles[p][x] / 2;
    if (o == 0) return basis == 0 ? std::cos(h) : std::sin(h);
    return basis == 0 ? -std::sin(h) : std::cos(h);
  };
  return FloatBehavior::build(
      "ghz", binary_signature(s.settings_per_party()),
      [&](const IndexTuple& in, const IndexTuple& out) {
        double zeros = 1, ones = 1;
        for (std::size_t p = 0; p < n; ++p) {
          zeros *= component(p, in[p], out[p], 0);
          ones *= component(p, in[p], out[p], 1);
        }
        const double amplitude = (zeros + ones) / std::numbers::sqrt2;
        return amplitude * amplitude;
      },
      true);
}

double ghz_correlator(const QuantumStrategy& s, std::span<const std::size_t> parties,
                      std::span<const std::size_t> settings) {
  double c = 1, minus_c = 1, sn = 1;
  for (std::size_t k = 0; k < parties.size(); ++k) {
    const double a = s.angles.at(parties[k]).at(settings[k]);
    c *= std::cos(a);
    minus_c *= -std::cos(a);
    sn *= std::sin(a);
  }
  return (c + minus_c) / 2 + (parties.size() == s.party_count() ? sn : 0.0);
}

double ghz_value(const LinearInequality& ineq, const QuantumStrategy& s) {
  double v = 0;
  for (const auto& t : ineq.terms) v += t.coefficient.get_d() * ghz_correlator(s, t.parties, t.settings);
  return v;
}

namespace {

/// Term in coordinate form: coordinates index the flattened angle vector.
struct FlatTerm {
  double coefficient;
  std::vector<std::size_t> coords;
  bool all_parties;
};

struct Evaluator {
  std::vector<FlatTerm> terms;

  double operator()(std::span<const double> cosv, std::span<const double> sinv) const {
    double v = 0;
    for (const auto& t : terms) {
      double c = 1, sn = 1;
      for (std::size_t i : t.coords) {
        c *= cosv[i];
        sn *= sinv[i];
      }
      const double even = t.coords.size() % 2 == 0 ? c : 0.0;
      v += t.coefficient * (even + (t.all_parties ? sn : 0.0));
    }
    return v;
  }
};

}  // namespace

SearchResult search_max_violation(const LinearInequality& ineq, const SearchOptions& options) {
  if (options.grid == 0) throw InputError("grid must be positive");
  if (!(options.refine > 0)) throw InputError("refine step must be positive");
  const auto& spp = ineq.settings_per_party;
  if (spp.empty()) throw InputError("inequality has no parties");

  std::vector<std::size_t> offset(spp.size(), 0);
  std::size_t dim = 0;
  for (std::size_t p = 0; p < spp.size(); ++p) {
    offset[p] = dim;
    dim += spp[p];
  }
  Evaluator eval;
  for (const auto& t : ineq.terms) {
    FlatTerm ft{t.coefficient.get_d(), {}, t.parties.size() == spp.size()};
    for (std::size_t k = 0; k < t.parties.size(); ++k) ft.coords.push_back(offset[t.parties[k]] + t.settings[k]);
    eval.terms.push_back(std::move(ft));
  }

  const std::size_t g = options.grid;
  double total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= static_cast<double>(g);
  if (total > 1e10) throw InputError("grid too large: " + std::to_string(g) + "^" + std::to_string(dim) + " points");
  const std::size_t points = static_cast<std::size_t>(total);
  const double base_step = 2 * std::numbers::pi / static_cast<double>(g);
  std::vector<double> grid_cos(g), grid_sin(g);
  for (std::size_t k = 0; k < g; ++k) {
    grid_cos[k] = std::cos(base_step * static_cast<double>(k));
    grid_sin[k] = std::sin(base_step * static_cast<double>(k));
  }

  struct Best {
    double value = -INFINITY;
    std::size_t index = 0;
  };
  // Contiguous blocks in lexicographic order; strict comparison keeps the
  // smallest index within a block and across blocks.
  auto scan = [&](std::size_t begin, std::size_t end) {
    Best best;
    std::vector<double> cv(dim), sv(dim);
    std::vector<std::size_t> digits(dim);
    for (std::size_t idx = begin; idx < end; ++idx) {
      std::size_t rest = idx;
      for (std::size_t i = dim; i-- > 0;) {
        digits[i] = rest % g;
        rest /= g;
        cv[i] = grid_cos[digits[i]];
        sv[i] = grid_sin[digits[i]];
      }
      const double v = eval(cv, sv);
      if (v > best.value) best = {v, idx};
    }
    return best;
  };

  const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, points));
  std::vector<Best> partial(threads);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t begin = points * t / threads, end = points * (t + 1) / threads;
      pool.emplace_back([&, t, begin, end] { partial[t] = scan(begin, end); });
    }
  }
  Best best;
  for (const auto& b : partial)
    if (b.value > best.value) best = b;

  std::vector<double> x(dim);
  {
    std::size_t rest = best.index;
    for (std::size_t i = dim; i-- > 0;) {
      x[i] = base_step * static_cast<double>(rest % g);
      rest /= g;
    }
  }
  std::vector<double> cv(dim), sv(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    cv[i] = std::cos(x[i]);
    sv[i] = std::sin(x[i]);
  }
  double value = eval(cv, sv);
  const double grid_value = value;

  for (double step = base_step; step >= options.refine; step /= 2) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t i = 0; i < dim; ++i) {
        for (double delta : {step, -step}) {
          const double old_x = x[i], old_c = cv[i], old_s = sv[i];
          x[i] = old_x + delta;
          cv[i] = std::cos(x[i]);
          sv[i] = std::sin(x[i]);
          const double v = eval(cv, sv);
          if (v > value) {
            value = v;
            improved = true;
            break;
          }
          x[i] = old_x;
          cv[i] = old_c;
          sv[i] = old_s;
        }
      }
    }
  }

  SearchResult result;
  result.strategy.angles.resize(spp.size());
  for (std::size_t p = 0; p < spp.size(); ++p)
    result.strategy.angles[p].assign(x.begin() + static_cast<std::ptrdiff_t>(offset[p]),
                                     x.begin() + static_cast<std::ptrdiff_t>(offset[p] + spp[p]));
  result.value = ghz_value(ineq, result.strategy);
  result.grid_value = grid_value;
  return result;
}

}  // namespace nonsig
