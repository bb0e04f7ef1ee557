#include "infmat/determinant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "infmat/algebra.hpp"
#include "infmat/error.hpp"
#include "infmat/lu.hpp"

namespace infmat {

const char* to_string(DetRoute route) {
  switch (route) {
    case DetRoute::lu_oracle: return "lu-oracle";
    case DetRoute::log_series: return "log-series";
    case DetRoute::truncation_limit: return "truncation-limit";
  }
  return "lu-oracle";
}

double det_oracle(const DenseMatrix& m) {
  if (!m.is_square())
    throw ExtentMismatch("determinant needs a square matrix");
  return LuDecomposition(m).determinant();
}

namespace {

double trace(const DenseMatrix& m) {
  double acc = 0.0;
  for (std::size_t i = 1; i <= m.rows(); ++i) acc += m(i, i);
  return acc;
}

}  // namespace

DetReport det_log_series(const DenseMatrix& m, const ConvergencePolicy& policy,
                         LogCentering centering) {
  if (!m.is_square())
    throw ExtentMismatch("determinant needs a square matrix");
  const std::size_t n = m.rows();
  const DenseMatrix x =
      centering == LogCentering::about_identity ? m - DenseMatrix::identity(n) : m;
  const double q = norm_inf(x);
  if (!(q < 1.0))
    throw PreconditionError(
        std::string("log series needs ") +
            (centering == LogCentering::about_identity ? "||M - I||_inf"
                                                       : "||M||_inf") +
            " < 1, measured " + std::to_string(q),
        q);

  // Called with k = 1, 2, ... in order; `power` holds X^k.
  DenseMatrix power;
  auto term = [&](std::size_t k) {
    power = k == 1 ? x : multiply(power, x);
    const double sign = k % 2 == 1 ? 1.0 : -1.0;
    return sign * trace(power) / static_cast<double>(k);
  };
  const GeometricBound bound{static_cast<double>(n), q};
  const ConvergenceReport report = sum_series(term, policy, bound);
  if (!report.converged())
    throw ConvergenceFailure("log series did not converge within " +
                             std::to_string(policy.max_terms) + " terms");

  DetReport out;
  out.value = std::exp(report.estimate);
  out.route = DetRoute::log_series;
  out.log_terms_used = report.terms_used;
  out.report = report;
  return out;
}

DetReport det_infinite(const MatrixSpec& m, const TruncationSchedule& schedule,
                       const ConvergencePolicy& policy) {
  if (!m.is_square())
    throw ExtentMismatch("determinant needs a square matrix, got " +
                         m.rows().to_string() + "x" + m.cols().to_string());
  DetReport out;
  if (m.is_finite()) {
    out.value = det_oracle(materialize(m));
    out.route = DetRoute::lu_oracle;
    out.report.estimate = out.value;
    out.report.status = Status::converged;
    out.report.terms_used = 1;
    out.report.last_index = m.rows().value();
    return out;
  }

  std::size_t last_log_terms = 0;
  auto value_at = [&](std::size_t n) {
    const DenseMatrix section = truncate(m, n);
    last_log_terms = 0;
    if (norm_inf(section - DenseMatrix::identity(n)) < 1.0) {
      try {
        const DetReport series = det_log_series(section, policy);
        last_log_terms = series.log_terms_used;
        return series.value;
      } catch (const ConvergenceFailure&) {
        // fall through to elimination
      }
    }
    return det_oracle(section);
  };
  out.report = limit_of_sequence(value_at, schedule, policy);
  out.value = out.report.estimate;
  out.route = DetRoute::truncation_limit;
  out.log_terms_used = last_log_terms;
  return out;
}

double column_minor(const DenseMatrix& a, const ColumnSelection& columns) {
  const std::size_t m = columns.size();
  DenseMatrix sub(m, m);
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t c = 1; c <= m; ++c) sub(i, c) = a(i, columns[c - 1]);
  return det_oracle(sub);
}

double row_minor(const DenseMatrix& b, const ColumnSelection& rows) {
  const std::size_t m = rows.size();
  DenseMatrix sub(m, m);
  for (std::size_t r = 1; r <= m; ++r)
    for (std::size_t j = 1; j <= m; ++j) sub(r, j) = b(rows[r - 1], j);
  return det_oracle(sub);
}

namespace {

// Advances `sel` (values in 1..n, strictly increasing) to the next
// selection in lexicographic order. Returns false after the last one.
bool next_selection(ColumnSelection& sel, std::size_t n) {
  const std::size_t m = sel.size();
  for (std::size_t pos = m; pos >= 1; --pos) {
    if (sel[pos - 1] < n - (m - pos)) {
      ++sel[pos - 1];
      for (std::size_t q = pos; q < m; ++q) sel[q] = sel[q - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

CauchyBinetExpansion cauchy_binet(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.rows() != n || b.cols() != m)
    throw ExtentMismatch("Cauchy-Binet needs A m x n and B n x m");
  CauchyBinetExpansion out;
  if (m > n) {
    out.rank_deficient = true;
    return out;
  }
  ColumnSelection sel(m);
  for (std::size_t q = 0; q < m; ++q) sel[q] = q + 1;
  do {
    out.value += column_minor(a, sel) * row_minor(b, sel);
    ++out.selections;
  } while (next_selection(sel, n));
  return out;
}

CauchyBinetReport cauchy_binet_infinite(const MatrixSpec& a,
                                        const MatrixSpec& b,
                                        const ConvergencePolicy& policy,
                                        std::size_t cap) {
  if (a.rows().is_infinite() || a.cols().is_finite() || b.rows().is_finite() ||
      b.cols() != a.rows())
    throw ExtentMismatch(
        "infinite Cauchy-Binet needs A m x inf and B inf x m with m finite");
  const std::size_t m = a.rows().value();
  ConvergencePolicy capped = policy;
  capped.max_terms = std::min(policy.max_terms, cap);
  capped.validate();

  // Column l of A and row l of B, grown as t advances.
  std::vector<std::vector<double>> a_cols;
  std::vector<std::vector<double>> b_rows;
  auto minor_product = [&](const ColumnSelection& sel) {
    DenseMatrix sa(m, m);
    DenseMatrix sb(m, m);
    for (std::size_t c = 1; c <= m; ++c)
      for (std::size_t r = 1; r <= m; ++r) {
        sa(r, c) = a_cols[sel[c - 1] - 1][r - 1];
        sb(c, r) = b_rows[sel[c - 1] - 1][r - 1];
      }
    return det_oracle(sa) * det_oracle(sb);
  };

  auto term = [&](std::size_t t) {
    std::vector<double> col(m);
    std::vector<double> row(m);
    for (std::size_t r = 1; r <= m; ++r) {
      col[r - 1] = a.entry(r, t);
      row[r - 1] = b.entry(t, r);
    }
    a_cols.push_back(std::move(col));
    b_rows.push_back(std::move(row));
    if (t < m) return 0.0;
    if (m == 1) return minor_product({t});
    // Selections {s_1 < ... < s_(m-1)} of 1..t-1 completed by t.
    ColumnSelection head(m - 1);
    for (std::size_t q = 0; q + 1 < m; ++q) head[q] = q + 1;
    double acc = 0.0;
    ColumnSelection sel(m);
    do {
      std::copy(head.begin(), head.end(), sel.begin());
      sel[m - 1] = t;
      acc += minor_product(sel);
    } while (next_selection(head, t - 1));
    return acc;
  };

  CauchyBinetReport out;
  out.selection_sum = sum_series(term, capped);

  const ProductResult product = matmul(a, b, policy, m);
  DenseMatrix ab(m, m);
  for (const auto& [key, report] : product.per_entry_reports)
    ab(key.first, key.second) = report.estimate;
  out.product_det = det_oracle(ab);
  out.product_status = product.overall_status == ProductStatus::converged
                           ? Status::converged
                       : product.overall_status == ProductStatus::failed
                           ? Status::diverged
                           : Status::undetermined;
  out.gap = std::abs(out.selection_sum.estimate - out.product_det);
  return out;
}

}  // namespace infmat
