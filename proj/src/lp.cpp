#include "nonsig/lp.hpp"

#include "nonsig/error.hpp"

namespace nonsig {

FeasibilityResult solve_feasibility(const std::vector<std::vector<Rational>>& rows, const std::vector<Rational>& b) {
  const std::size_t m = rows.size();
  if (b.size() != m) throw InputError("solve_feasibility: right-hand side has the wrong length");
  const std::size_t n = m == 0 ? 0 : rows[0].size();
  for (const auto& r : rows)
    if (r.size() != n) throw InputError("solve_feasibility: ragged constraint matrix");

  // Columns: n structural, m artificial, then the right-hand side.
  const std::size_t width = n + m + 1;
  const std::size_t rhs = n + m;
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(width, Rational(0)));
  std::vector<int> sign(m, 1);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    sign[i] = sgn(b[i]) < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) t[i][j] = sign[i] * rows[i][j];
    t[i][n + i] = 1;
    t[i][rhs] = sign[i] * b[i];
    basis[i] = n + i;
  }
  // Reduced costs of "minimize the sum of artificials"; d[rhs] holds minus
  // the objective value.
  std::vector<Rational> d(width, Rational(0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) d[j] -= t[i][j];
  for (std::size_t i = 0; i < m; ++i) d[rhs] -= t[i][rhs];

  FeasibilityResult result;
  for (;;) {
    std::size_t enter = width;
    for (std::size_t j = 0; j < rhs; ++j)
      if (sgn(d[j]) < 0) {
        enter = j;
        break;
      }
    if (enter == width) break;

    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(t[i][enter]) <= 0) continue;
      Rational ratio = t[i][rhs] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = std::move(ratio);
      }
    }
    // Phase one is bounded below by zero, so an entering column always has a
    // positive entry somewhere.
    if (leave == m) throw DomainError("solve_feasibility: unbounded phase-one problem");

    const Rational pivot = t[leave][enter];
    for (auto& v : t[leave]) v /= pivot;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || sgn(t[i][enter]) == 0) continue;
      const Rational f = t[i][enter];
      for (std::size_t j = 0; j < width; ++j)
        if (sgn(t[leave][j]) != 0) t[i][j] -= f * t[leave][j];
    }
    if (sgn(d[enter]) != 0) {
      const Rational f = d[enter];
      for (std::size_t j = 0; j < width; ++j)
        if (sgn(t[leave][j]) != 0) d[j] -= f * t[leave][j];
    }
    basis[leave] = enter;
    ++result.pivots;
  }

  result.feasible = sgn(d[rhs]) == 0;
  if (result.feasible) {
    result.x.assign(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] < n) result.x[basis[i]] = t[i][rhs];
  } else {
    // Reduced cost of artificial i is 1 - y_i for the sign-adjusted rows.
    result.farkas.resize(m);
    for (std::size_t i = 0; i < m; ++i) result.farkas[i] = sign[i] * (Rational(1) - d[n + i]);
  }
  return result;
}

}  // namespace nonsig
