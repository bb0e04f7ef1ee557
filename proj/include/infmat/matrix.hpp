#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "infmat/schedule.hpp"

namespace infmat {

// Row or column count: a positive integer or infinite.
class Extent {
 public:
  explicit Extent(std::size_t value);
  static Extent infinite() { return Extent(); }

  bool is_infinite() const { return !value_.has_value(); }
  bool is_finite() const { return value_.has_value(); }
  // Throws InvalidArgument on an infinite extent.
  std::size_t value() const;
  // Finite value, or `fallback` when infinite.
  std::size_t value_or(std::size_t fallback) const {
    return value_.value_or(fallback);
  }
  // "inf" or the decimal count.
  std::string to_string() const;

  friend bool operator==(const Extent&, const Extent&) = default;

 private:
  Extent() = default;
  std::optional<std::size_t> value_;
};

// Finite m x n array of doubles. All indexing is 1-based.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[(i - 1) * cols_ + (j - 1)];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[(i - 1) * cols_ + (j - 1)];
  }

  // Top-left block.
  DenseMatrix block(std::size_t rows, std::size_t cols) const;
  DenseMatrix transposed() const;

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class Structure { dense_finite, expr, banded, diagonal, finite_support };

const char* to_string(Structure structure);

// Declares |entry(i,j)| <= C * r^(i+j).
struct DecayCertificate {
  double C = 1.0;
  double r = 0.5;

  double bound(std::size_t i, std::size_t j) const;
};

using EntryOracle = std::function<double(std::size_t, std::size_t)>;

// A matrix of finite or infinite extent given by a pure element oracle.
// Immutable once built; copies share the oracle.
class MatrixSpec {
 public:
  MatrixSpec(Extent rows, Extent cols, EntryOracle entry,
             Structure structure = Structure::expr);

  const Extent& rows() const { return rows_; }
  const Extent& cols() const { return cols_; }
  Structure structure() const { return structure_; }
  bool is_square() const { return rows_ == cols_; }
  bool is_finite() const { return rows_.is_finite() && cols_.is_finite(); }

  // Raw oracle value; no range or finiteness check.
  double entry(std::size_t i, std::size_t j) const { return entry_(i, j); }
  // Checked access: throws NonFiniteEntry naming (i, j).
  double at(std::size_t i, std::size_t j) const;
  const EntryOracle& oracle() const { return entry_; }

  // Banded metadata: entry(i,j) = 0 when i - j > lower or j - i > upper.
  std::size_t lower_bandwidth() const { return lower_; }
  std::size_t upper_bandwidth() const { return upper_; }
  // Finite-support metadata: zero outside rows 1..support_rows and
  // columns 1..support_cols.
  std::size_t support_rows() const { return support_rows_; }
  std::size_t support_cols() const { return support_cols_; }

  const std::optional<DecayCertificate>& decay() const { return decay_; }

  MatrixSpec with_band(std::size_t lower, std::size_t upper) const;
  MatrixSpec with_support(std::size_t rows, std::size_t cols) const;
  MatrixSpec with_structure(Structure structure) const;
  MatrixSpec with_decay(std::optional<DecayCertificate> decay) const;

  // Column range [lo, hi] outside which row i is zero according to the
  // structure metadata and a finite column extent. nullopt: unbounded.
  // An empty range is reported as lo > hi.
  std::optional<std::pair<std::size_t, std::size_t>> row_support(
      std::size_t i) const;
  std::optional<std::pair<std::size_t, std::size_t>> col_support(
      std::size_t j) const;

 private:
  Extent rows_;
  Extent cols_;
  EntryOracle entry_;
  Structure structure_;
  std::size_t lower_ = 0;
  std::size_t upper_ = 0;
  std::size_t support_rows_ = 0;
  std::size_t support_cols_ = 0;
  std::optional<DecayCertificate> decay_;
};

// Factories.
MatrixSpec from_dense(const DenseMatrix& m);
MatrixSpec identity_spec(Extent n);
MatrixSpec zero_spec(Extent rows, Extent cols);
MatrixSpec diagonal_spec(Extent n, std::function<double(std::size_t)> diag);
// Bands keyed by offset j - i (positive offsets lie above the diagonal).
MatrixSpec banded_spec(
    Extent rows, Extent cols,
    std::vector<std::pair<long, std::function<double(std::size_t)>>> bands);
MatrixSpec finite_support_spec(Extent rows, Extent cols,
                               std::size_t support_rows,
                               std::size_t support_cols, EntryOracle entry);

// Top-left m x n section. Throws ExtentMismatch when the request exceeds a
// finite extent and NonFiniteEntry when the oracle misbehaves.
DenseMatrix truncate(const MatrixSpec& m, std::size_t rows, std::size_t cols);
inline DenseMatrix truncate(const MatrixSpec& m, std::size_t n) {
  return truncate(m, n, n);
}
// Whole matrix; requires finite extents.
DenseMatrix materialize(const MatrixSpec& m);

MatrixSpec transpose(const MatrixSpec& m);

// Checks `samples` pseudo-random indices inside the declared structure's
// zero region (deterministic for a given seed). Returns the first offending
// index, or nullopt when all sampled entries are exactly zero.
std::optional<std::pair<std::size_t, std::size_t>> find_structure_violation(
    const MatrixSpec& m, std::size_t samples = 200, unsigned seed = 1);

// Spot-check of the decay certificate at `samples` pseudo-random indices in
// [1, probe]^2 plus the leading 8 x 8 corner.
std::optional<std::pair<std::size_t, std::size_t>> find_decay_violation(
    const MatrixSpec& m, std::size_t samples = 200, std::size_t probe = 64,
    unsigned seed = 1);

// Max absolute row sum.
double norm_inf(const DenseMatrix& m);

}  // namespace infmat
