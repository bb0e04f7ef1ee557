#pragma once

#include <cstddef>
#include <vector>

#include "infmat/matrix.hpp"
#include "infmat/series.hpp"

namespace infmat {

enum class CharRoute { automatic, log_series, lu };

// det(A_n - lambda I) for the n x n section. `automatic` takes the log
// series when ||A_n - lambda I - I||_inf < 1 and elimination otherwise;
// forcing log_series outside that region throws PreconditionError.
double char_value(const MatrixSpec& a, double lambda, std::size_t n,
                  CharRoute route = CharRoute::automatic,
                  const ConvergencePolicy& policy = {});

struct EigenPair {
  double lambda = 0.0;
  // Null vector of the final section, scaled so its largest-magnitude entry
  // is exactly 1.
  std::vector<double> vector;
  double char_residual = 0.0;  // |det(A_n - lambda I)|
  double vec_residual = 0.0;   // ||(A_n - lambda I) v||_inf
  std::size_t section = 0;
  // False when the root moved by more than 1e-6 between the last two
  // scheduled sections.
  bool stable = true;
};

struct EigenSearch {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t grid_points = 256;
  std::size_t max_roots = 16;
};

// Sign changes of det(A_n - lambda I) on a uniform grid over [lo, hi] at the
// largest scheduled section, each refined by bisection to width 1e-10.
// Grid points where |det| has a local minimum without a sign change are
// resampled on finer grids (three levels of 33 points), which separates
// close pairs of simple roots. Roots without a sign change (even
// multiplicity) are not found. Results are sorted by lambda.
std::vector<EigenPair> find_eigenvalues(const MatrixSpec& a,
                                        const EigenSearch& search,
                                        const TruncationSchedule& schedule,
                                        const ConvergencePolicy& policy = {});

// Null vector of A_n - lambda I by elimination: the first pivot-free column
// gets 1, later free columns 0. Pivots at or below
// 1e-8 * max(1, ||A_n - lambda I||_inf) count as zero. Throws
// NotAnEigenvalue when the section has full numerical rank.
std::vector<double> eigenvector_for(const MatrixSpec& a, double lambda,
                                    std::size_t n);

}  // namespace infmat
