#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "infmat/algebra.hpp"
#include "infmat/matrix.hpp"
#include "infmat/series.hpp"

namespace infmat {

// Basis vectors v_1, v_2, ... given by their coordinates in a fixed ambient
// coordinate system: coordinate(i, k) is coordinate i of vector k.
// Linear independence is the caller's promise.
struct BasisFamily {
  Extent count;
  Extent dimension;
  std::function<double(std::size_t, std::size_t)> coordinate;

  Vector vector_at(std::size_t k) const;
  // Matrix whose k-th column is v_k.
  MatrixSpec as_columns() const;
};

BasisFamily standard_basis(Extent n);
BasisFamily basis_from_vectors(std::vector<std::vector<double>> vectors);

struct TransitionResult {
  // Entry (j, i) is coordinate j of u_i in the basis {v_j}.
  DenseMatrix matrix;
  // Infinite bases: per-coordinate stabilization, keyed (j, i).
  std::map<std::pair<std::size_t, std::size_t>, ConvergenceReport>
      coordinate_reports;
  // Worst coordinate status of each column; undetermined columns are kept,
  // not zeroed.
  std::vector<Status> column_status;
  std::size_t section = 0;
};

// Coordinates of u_1..u_count (from `to`) in the basis `from`, by solving
// V alpha = u_i on sections. Throws SingularSystem for a dependent family.
TransitionResult transition_matrix(const BasisFamily& from,
                                   const BasisFamily& to, std::size_t count,
                                   const TruncationSchedule& schedule,
                                   const ConvergencePolicy& policy);

// Matrix of a linear map from the coordinates of its images:
// image(j, i) = alpha_j^(i), the j-th target coordinate of L(u_i). The
// result has `n` rows and m columns (n columns when m is infinite).
DenseMatrix transformation_matrix(
    const std::function<double(std::size_t, std::size_t)>& image, Extent m,
    std::size_t n);

// Same, when the images L(u_i) are given in ambient coordinates and must be
// expressed in the target basis first.
TransitionResult transformation_matrix(const BasisFamily& images,
                                       const BasisFamily& target,
                                       std::size_t count,
                                       const TruncationSchedule& schedule,
                                       const ConvergencePolicy& policy);

struct OrthReport {
  DenseMatrix gram;         // A A^T before elimination
  DenseMatrix G;            // transformed Gram block, upper triangular
  DenseMatrix combination;  // unit lower triangular T with A' = T A
  MatrixSpec a_prime;       // rows of A' as lazy combinations of rows of A
  double max_offdiag_dot = 0.0;
  double max_row_norm2 = 0.0;
  bool orthogonal = false;
  // Infinite columns: Gram entries keyed (p, q), p <= q.
  std::map<std::pair<std::size_t, std::size_t>, ConvergenceReport>
      gram_reports;
};

// Reduces [A A^T | A] to [G | A'] by adding multiples of earlier rows to
// later rows only; the rows of A' are then pairwise orthogonal. A must have
// finitely many rows. Throws DependentRows on a vanishing pivot and
// ConvergenceFailure when a Gram entry series does not converge.
OrthReport orthogonalize(const MatrixSpec& a, const ConvergencePolicy& policy);

}  // namespace infmat
