#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "infmat/algebra.hpp"
#include "infmat/matrix.hpp"
#include "infmat/series.hpp"

namespace infmat {

struct InverseReport {
  // Finite input: the full inverse. Infinite input: the stabilized leading
  // block of the requested size.
  DenseMatrix block;
  // Infinite input: entries on demand (cached per section); finite input:
  // the block wrapped as a spec.
  std::optional<MatrixSpec> lazy;
  // ||I - A||_inf on the largest section that was examined.
  double norm_check = 0.0;
  // Terms of the Neumann series at the last section.
  std::size_t series_terms = 0;
  // ||A * A^-1 - I||_inf on the evaluated block.
  double residual = 0.0;
  // Infinite input: stabilization of the block across sections.
  ConvergenceReport report;
};

// A^-1 = sum_k (I - A)^k, stopped once ||(I - A)^k||_inf <= tol for
// `window` consecutive k. Throws PreconditionError (with the norm) when
// ||I - A||_inf >= 1 and ConvergenceFailure when max_terms is reached.
InverseReport neumann_inverse(const DenseMatrix& a,
                              const ConvergencePolicy& policy);

// Infinite square A: the leading block x block of the inverse, computed by
// the Neumann series on each scheduled section (sizes >= block) and
// stabilized entrywise across sections. The norm precondition is measured
// on the largest scheduled section.
InverseReport neumann_inverse(const MatrixSpec& a,
                              const ConvergencePolicy& policy,
                              const TruncationSchedule& schedule,
                              std::size_t block = 16);

// Numerical rank with pivot threshold 1e-10 * ||M||_inf. For infinite
// specs, the rank of n x n sections stabilized over the schedule.
ConvergenceReport rank_of(const MatrixSpec& m,
                          const TruncationSchedule& schedule,
                          const ConvergencePolicy& policy);
std::size_t rank_of(const DenseMatrix& m);

enum class Verdict { compatible, incompatible, undetermined };

const char* to_string(Verdict verdict);

enum class SolveRoute { compatibility, cramer, inverse_multiply };

const char* to_string(SolveRoute route);

struct SolveReport {
  Verdict compatible = Verdict::undetermined;
  std::optional<ConvergenceReport> rank_A;
  std::optional<ConvergenceReport> rank_Ab;
  std::map<std::size_t, ConvergenceReport> unknowns;
  SolveRoute route = SolveRoute::compatibility;
  // ||A_n x_n - b_n||_inf on the final section (solve routes).
  double residual = 0.0;
  // Size of the final section.
  std::size_t section = 0;
  // Whether tr A and every tr A_i summed to a converged value. Recorded for
  // the Cramer route only; it does not gate the result.
  std::optional<bool> trace_condition;
};

// rank A against rank [A|b]. For infinite A the b column is appended after
// the n columns of each n x n section.
SolveReport check_compatibility(const MatrixSpec& a, const Vector& b,
                                const TruncationSchedule& schedule,
                                const ConvergencePolicy& policy);

// x_i = det A_i / det A. For infinite systems the ratio is formed on each
// section and stabilized. Throws SingularSystem when det A is not a
// converged value larger than tol in magnitude.
SolveReport cramer_solve(const MatrixSpec& a, const Vector& b,
                         const std::vector<std::size_t>& wanted,
                         const TruncationSchedule& schedule,
                         const ConvergencePolicy& policy);

// x = sum_k (I - A)^k b, applied to b directly. Same preconditions and
// errors as neumann_inverse; infinite systems are stabilized per unknown.
// An empty `wanted` means every unknown of a finite system.
SolveReport solve_via_inverse(const MatrixSpec& a, const Vector& b,
                              const std::vector<std::size_t>& wanted,
                              const TruncationSchedule& schedule,
                              const ConvergencePolicy& policy);

}  // namespace infmat
