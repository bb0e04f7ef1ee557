#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "infmat/matrix.hpp"
#include "infmat/series.hpp"

namespace infmat {

// Column vector of finite or infinite extent, 1-based.
class Vector {
 public:
  Vector(Extent extent, std::function<double(std::size_t)> entry);
  explicit Vector(std::vector<double> values);

  const Extent& extent() const { return extent_; }
  double operator()(std::size_t i) const { return entry_(i); }
  // Checked access: throws NonFiniteEntry(i, 1).
  double at(std::size_t i) const;
  // First n entries; n must not exceed a finite extent.
  std::vector<double> section(std::size_t n) const;

 private:
  Extent extent_;
  std::function<double(std::size_t)> entry_;
};

Vector unit_vector(Extent extent, std::size_t index);

// Dense helpers shared across modules.
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double c, const DenseMatrix& a);
std::vector<double> multiply(const DenseMatrix& a, std::span<const double> x);
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

MatrixSpec add(const MatrixSpec& a, const MatrixSpec& b);
MatrixSpec scale(double c, const MatrixSpec& a);

enum class ProductStatus { converged, partial, failed };

const char* to_string(ProductStatus status);

struct ProductResult {
  MatrixSpec matrix;
  // Filled for every probed entry; keys are 1-based (i, j).
  std::map<std::pair<std::size_t, std::size_t>, ConvergenceReport>
      per_entry_reports;
  ProductStatus overall_status = ProductStatus::converged;
};

// c_ij = sum_l a_il b_lj for one entry. Exact when the structure of A or B
// bounds the inner index, otherwise a convergence-checked series (certified
// when both operands carry decay certificates).
ConvergenceReport product_entry(const MatrixSpec& a, const MatrixSpec& b,
                                std::size_t i, std::size_t j,
                                const ConvergencePolicy& policy);

// Lazy product. Entries of the returned spec are computed on demand; an
// entry whose series does not converge yields NaN so that truncation
// reports it. The leading `probe` x `probe` block (clamped to the extents)
// is evaluated eagerly and certified: without decay certificates the
// absolute series |a_il b_lj| must converge as well.
ProductResult matmul(const MatrixSpec& a, const MatrixSpec& b,
                     const ConvergencePolicy& policy, std::size_t probe = 8);

struct MatvecResult {
  Vector vector;
  std::map<std::size_t, ConvergenceReport> reports;
  ProductStatus overall_status = ProductStatus::converged;
};

MatvecResult matvec(const MatrixSpec& a, const Vector& x,
                    const ConvergencePolicy& policy, std::size_t probe = 8);

// Sum of the diagonal. Exact for finite or structurally finite diagonals.
ConvergenceReport trace_partial(const MatrixSpec& a,
                                const ConvergencePolicy& policy);

}  // namespace infmat
