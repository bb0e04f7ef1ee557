#pragma once

#include <cstddef>
#include <vector>

#include "infmat/matrix.hpp"
#include "infmat/series.hpp"

namespace infmat {

enum class DetRoute { lu_oracle, log_series, truncation_limit };

const char* to_string(DetRoute route);

struct DetReport {
  double value = 0.0;
  DetRoute route = DetRoute::lu_oracle;
  // Terms of the logarithm series (for the limit route: at the last section).
  std::size_t log_terms_used = 0;
  // Series report for log_series; stabilization report for truncation_limit.
  ConvergenceReport report;
};

// Partial-pivoted elimination; singular matrices give 0.
double det_oracle(const DenseMatrix& m);

// Where the logarithm series is expanded.
//   about_identity: log M = sum_k (-1)^(k+1) (M - I)^k / k, needs ||M - I|| < 1
//   literal:        sum_k (-1)^(k+1) M^k / k as written without centring,
//                   needs ||M|| < 1 and evaluates det(I + M)
enum class LogCentering { about_identity, literal };

// det M = exp(tr log M). The trace series is summed under the geometric
// bound |tr X^k / k| <= n ||X||^k, so the stop is certified. Throws
// PreconditionError carrying the measured norm when it is >= 1, and
// ConvergenceFailure when the series cap is hit.
DetReport det_log_series(const DenseMatrix& m, const ConvergencePolicy& policy,
                         LogCentering centering = LogCentering::about_identity);

// Limit of n x n section determinants over the schedule. Each section uses
// the log series when its contraction precondition holds and the LU oracle
// otherwise. A finite spec is evaluated directly with the LU oracle.
DetReport det_infinite(const MatrixSpec& m, const TruncationSchedule& schedule,
                       const ConvergencePolicy& policy);

// Strictly increasing column selection j_1 < ... < j_m (1-based).
using ColumnSelection = std::vector<std::size_t>;

struct CauchyBinetExpansion {
  double value = 0.0;
  std::size_t selections = 0;
  // m > n: no selection exists and det(AB) = 0 by rank deficiency.
  bool rank_deficient = false;
};

// det(AB) as the sum over all selections of det(A_S) det(B_S), where A_S
// keeps columns S of A and B_S keeps rows S of B.
CauchyBinetExpansion cauchy_binet(const DenseMatrix& a, const DenseMatrix& b);

// det of the square matrix formed from the selected columns of A / rows of B.
double column_minor(const DenseMatrix& a, const ColumnSelection& columns);
double row_minor(const DenseMatrix& b, const ColumnSelection& rows);

struct CauchyBinetReport {
  // Partial sums over selections ordered by largest selected index.
  ConvergenceReport selection_sum;
  // det of the product AB computed through convergence-checked entries.
  double product_det = 0.0;
  Status product_status = Status::undetermined;
  double gap = 0.0;
};

// Infinite inner dimension: A is m x inf, B is inf x m with m finite. The
// t-th term of the selection series collects every selection whose largest
// index is t; `cap` bounds t.
CauchyBinetReport cauchy_binet_infinite(const MatrixSpec& a,
                                        const MatrixSpec& b,
                                        const ConvergencePolicy& policy,
                                        std::size_t cap);

}  // namespace infmat
