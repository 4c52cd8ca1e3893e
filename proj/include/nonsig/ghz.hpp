#pragma once

#include <cstddef>
#include <vector>

#include "nonsig/inequality.hpp"
#include "nonsig/resource.hpp"

namespace nonsig {

/// angles[p][x]: party p, setting x measures cos(a) Z + sin(a) X; outcome
/// index 0 is eigenvalue +1, index 1 is -1.
struct QuantumStrategy {
  std::vector<std::vector<double>> angles;

  std::size_t party_count() const { return angles.size(); }
  std::vector<std::size_t> settings_per_party() const;
};

/// Throws InputError on no parties, a party without settings, or a non-finite
/// angle.
void validate_strategy(const QuantumStrategy& s);

/// Outcome statistics of (|0...0> + |1...1>)/sqrt(2) under the product
/// measurements, computed from the state vector. Parties are named A, B, ...
FloatBehavior ghz_behavior(const QuantumStrategy& s);

/// <prod_{p in parties} O_p(settings)> on the GHZ state in closed form:
/// (prod cos + prod(-cos))/2, plus prod sin when every party is involved.
double ghz_correlator(const QuantumStrategy& s, std::span<const std::size_t> parties,
                      std::span<const std::size_t> settings);

/// Left-hand side of `ineq` on ghz_behavior(s), via the closed form.
double ghz_value(const LinearInequality& ineq, const QuantumStrategy& s);

struct SearchOptions {
  std::size_t grid = 16;
  double refine = 1e-4;
  std::size_t threads = 1;
};

struct SearchResult {
  QuantumStrategy strategy;
  double value = 0;
  double grid_value = 0;
};

/// Evaluates every point of a grid with `grid` angles k*2pi/grid per
/// coordinate, keeping the lexicographically smallest maximizer, then runs
/// coordinate descent from it: each coordinate in order tries +step and -step,
/// accepting strict improvements; the step starts at 2pi/grid and halves once
/// a sweep finds nothing, stopping below `refine`. Deterministic for every
/// thread count.
SearchResult search_max_violation(const LinearInequality& ineq, const SearchOptions& options = {});

}  // namespace nonsig
