#pragma once

#include <vector>

#include "nonsig/rational.hpp"

namespace nonsig {

/// Outcome of the exact feasibility problem  A x = b,  x >= 0.
struct FeasibilityResult {
  bool feasible = false;
  /// A solution (basic, so at most `rows` non-zeros) when feasible.
  std::vector<Rational> x;
  /// When infeasible: y with y.A_j <= 0 for every column j and y.b > 0.
  std::vector<Rational> farkas;
  std::size_t pivots = 0;
};

/// Phase-one simplex over exact rationals with Bland's rule (lowest-index
/// entering column, lowest-index leaving basic variable on ratio ties), so it
/// terminates on degenerate problems. `rows[i]` is row i of A.
FeasibilityResult solve_feasibility(const std::vector<std::vector<Rational>>& rows, const std::vector<Rational>& b);

}  // namespace nonsig
