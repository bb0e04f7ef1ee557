#include "infmat/lu.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "infmat/error.hpp"

namespace infmat {

LuDecomposition::LuDecomposition(DenseMatrix a) : lu_(std::move(a)) {
  if (!lu_.is_square())
    throw ExtentMismatch("LU needs a square matrix");
  const std::size_t n = lu_.rows();
  norm_ = norm_inf(lu_);
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i + 1;

  for (std::size_t k = 1; k <= n; ++k) {
    std::size_t pivot_row = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t r = k + 1; r <= n; ++r) {
      const double v = std::abs(lu_(r, k));
      if (v > best) {
        best = v;
        pivot_row = r;
      }
    }
    if (pivot_row != k) {
      for (std::size_t c = 1; c <= n; ++c) std::swap(lu_(k, c), lu_(pivot_row, c));
      std::swap(perm_[k - 1], perm_[pivot_row - 1]);
      parity_ = -parity_;
    }
    const double pivot = lu_(k, k);
    if (pivot == 0.0) continue;
    for (std::size_t r = k + 1; r <= n; ++r) {
      const double factor = lu_(r, k) / pivot;
      lu_(r, k) = factor;
      if (factor == 0.0) continue;
      for (std::size_t c = k + 1; c <= n; ++c) lu_(r, c) -= factor * lu_(k, c);
    }
  }
}

double LuDecomposition::determinant() const {
  double det = parity_;
  for (std::size_t k = 1; k <= size(); ++k) det *= lu_(k, k);
  return det;
}

int LuDecomposition::determinant_sign() const {
  int sign = parity_;
  for (std::size_t k = 1; k <= size(); ++k) {
    const double p = lu_(k, k);
    if (p == 0.0) return 0;
    if (p < 0.0) sign = -sign;
  }
  return sign;
}

double LuDecomposition::log_abs_determinant() const {
  double acc = 0.0;
  for (std::size_t k = 1; k <= size(); ++k) {
    const double p = std::abs(lu_(k, k));
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    acc += std::log(p);
  }
  return acc;
}

double LuDecomposition::min_abs_pivot() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= size(); ++k) best = std::min(best, std::abs(lu_(k, k)));
  return best;
}

std::vector<double> LuDecomposition::solve(std::span<const double> b) const {
  const std::size_t n = size();
  if (b.size() != n) throw ExtentMismatch("right-hand side size differs");
  const double threshold = 1e-13 * (norm_ > 0.0 ? norm_ : 1.0);
  for (std::size_t k = 1; k <= n; ++k)
    if (std::abs(lu_(k, k)) <= threshold)
      throw SingularSystem("matrix is numerically singular at pivot " +
                           std::to_string(k));
  std::vector<double> y(n);
  for (std::size_t i = 1; i <= n; ++i) {
    double acc = b[perm_[i - 1] - 1];
    for (std::size_t j = 1; j < i; ++j) acc -= lu_(i, j) * y[j - 1];
    y[i - 1] = acc;
  }
  for (std::size_t i = n; i >= 1; --i) {
    double acc = y[i - 1];
    for (std::size_t j = i + 1; j <= n; ++j) acc -= lu_(i, j) * y[j - 1];
    y[i - 1] = acc / lu_(i, i);
  }
  return y;
}

std::size_t numerical_rank(const DenseMatrix& m, double relative_threshold) {
  DenseMatrix work = m;
  const double threshold = relative_threshold * norm_inf(m);
  const std::size_t rows = work.rows();
  const std::size_t cols = work.cols();
  std::size_t rank = 0;
  for (std::size_t c = 1; c <= cols && rank < rows; ++c) {
    const std::size_t top = rank + 1;
    std::size_t pivot_row = top;
    double best = std::abs(work(top, c));
    for (std::size_t r = top + 1; r <= rows; ++r) {
      const double v = std::abs(work(r, c));
      if (v > best) {
        best = v;
        pivot_row = r;
      }
    }
    if (best <= threshold || best == 0.0) continue;
    if (pivot_row != top)
      for (std::size_t k = c; k <= cols; ++k) std::swap(work(top, k), work(pivot_row, k));
    const double pivot = work(top, c);
    for (std::size_t r = top + 1; r <= rows; ++r) {
      const double factor = work(r, c) / pivot;
      if (factor == 0.0) continue;
      work(r, c) = 0.0;
      for (std::size_t k = c + 1; k <= cols; ++k) work(r, k) -= factor * work(top, k);
    }
    ++rank;
  }
  return rank;
}

}  // namespace infmat
