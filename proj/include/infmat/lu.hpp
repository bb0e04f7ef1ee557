#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "infmat/matrix.hpp"

namespace infmat {

// Gaussian elimination with partial pivoting, P A = L U. Row updates with a
// zero multiplier are skipped, so diagonal and banded inputs factor in
// roughly quadratic time.
class LuDecomposition {
 public:
  explicit LuDecomposition(DenseMatrix a);

  std::size_t size() const { return lu_.rows(); }
  double determinant() const;
  // Sign in {-1, 0, 1} of the determinant and log of its magnitude. Avoids
  // the underflow of the plain product for large sections.
  int determinant_sign() const;
  double log_abs_determinant() const;
  double min_abs_pivot() const;

  // Throws SingularSystem when a pivot is below 1e-13 * ||A||_inf.
  std::vector<double> solve(std::span<const double> b) const;

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
  int parity_ = 1;
  double norm_ = 0.0;
};

// Rank by row-echelon elimination with partial pivoting; a column is treated
// as pivot-free when its best remaining entry is at most
// relative_threshold * ||M||_inf.
std::size_t numerical_rank(const DenseMatrix& m,
                           double relative_threshold = 1e-10);

}  // namespace infmat
