#pragma once

// Chi-square helpers for the statistical verification commands. p-values
// come from the regularized upper incomplete gamma function, computed by
// the usual series / continued-fraction split.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "roadcolor/errors.hpp"

namespace roadcolor {

namespace detail {

inline double gamma_series_p(double a, double x) {
  double sum = 1.0 / a, term = sum, ap = a;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_cf_q(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

// Regularized upper incomplete gamma Q(a, x).
inline double gamma_q(double a, double x) {
  if (a <= 0 || x < 0) throw input_error("gamma_q needs a > 0, x >= 0");
  if (x == 0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_series_p(a, x);
  return detail::gamma_cf_q(a, x);
}

inline double chi_square_pvalue(double statistic, int dof) {
  if (dof <= 0) return 1.0;
  return gamma_q(dof / 2.0, statistic / 2.0);
}

struct Chi2Result {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Goodness of fit against the uniform law over the cells.
inline Chi2Result chi2_uniform(const std::vector<std::int64_t>& counts) {
  Chi2Result out;
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  if (counts.size() < 2 || total == 0) return out;
  const double expected = static_cast<double>(total) / counts.size();
  for (auto c : counts) {
    const double diff = c - expected;
    out.statistic += diff * diff / expected;
  }
  out.dof = static_cast<int>(counts.size()) - 1;
  out.p_value = chi_square_pvalue(out.statistic, out.dof);
  return out;
}

// Contingency-table test of independence. Columns whose totals are too
// small to give every cell an expected count of ~min_expected are merged
// into a single residual column first.
inline Chi2Result chi2_independence(const std::vector<std::vector<std::int64_t>>& table,
                                    double min_expected = 5.0) {
  Chi2Result out;
  if (table.empty()) return out;
  const std::size_t rows = table.size(), cols = table.front().size();
  std::vector<std::int64_t> col_total(cols, 0), row_total(rows, 0);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      row_total[i] += table[i][j];
      col_total[j] += table[i][j];
      total += table[i][j];
    }
  if (total == 0) return out;

  const double col_floor = min_expected * static_cast<double>(rows);
  std::vector<std::vector<std::int64_t>> merged(rows);
  std::vector<std::int64_t> residual(rows, 0);
  std::int64_t residual_total = 0;
  for (std::size_t j = 0; j < cols; ++j) {
    if (static_cast<double>(col_total[j]) >= col_floor) {
      for (std::size_t i = 0; i < rows; ++i) merged[i].push_back(table[i][j]);
    } else {
      residual_total += col_total[j];
      for (std::size_t i = 0; i < rows; ++i) residual[i] += table[i][j];
    }
  }
  if (residual_total > 0)
    for (std::size_t i = 0; i < rows; ++i) merged[i].push_back(residual[i]);

  const std::size_t kept = merged.front().size();
  if (kept < 2 || rows < 2) return out;  // vacuous: nothing to test

  std::vector<std::int64_t> kept_col(kept, 0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < kept; ++j) kept_col[j] += merged[i][j];
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < kept; ++j) {
      const double expected =
          static_cast<double>(row_total[i]) * static_cast<double>(kept_col[j]) / total;
      if (expected <= 0) continue;
      const double diff = merged[i][j] - expected;
      out.statistic += diff * diff / expected;
    }
  out.dof = static_cast<int>((rows - 1) * (kept - 1));
  out.p_value = chi_square_pvalue(out.statistic, out.dof);
  return out;
}

}  // namespace roadcolor
