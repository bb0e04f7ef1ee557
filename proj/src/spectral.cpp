#include "infmat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "infmat/algebra.hpp"
#include "infmat/determinant.hpp"
#include "infmat/error.hpp"
#include "infmat/lu.hpp"

namespace infmat {

namespace {

void require_square_section(const MatrixSpec& a, std::size_t n) {
  if (!a.is_square())
    throw ExtentMismatch("spectral routines need a square matrix");
  if (n < 1 || (a.rows().is_finite() && n > a.rows().value()))
    throw ExtentMismatch("section size " + std::to_string(n) +
                         " is outside the matrix extent");
}

DenseMatrix shifted(DenseMatrix m, double lambda) {
  for (std::size_t i = 1; i <= m.rows(); ++i) m(i, i) -= lambda;
  return m;
}

int char_sign(const DenseMatrix& base, double lambda) {
  return LuDecomposition(shifted(base, lambda)).determinant_sign();
}

double bisect(const DenseMatrix& base, double lo, double hi, int sign_lo) {
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    const int s = char_sign(base, mid);
    if (s == 0) return mid;
    if (s == sign_lo)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Root of the characteristic sign function inside [lo, hi], if it changes
// sign there.
std::optional<double> root_in(const DenseMatrix& base, double lo, double hi) {
  const int s_lo = char_sign(base, lo);
  if (s_lo == 0) return lo;
  const int s_hi = char_sign(base, hi);
  if (s_hi == 0) return hi;
  if (s_lo == s_hi) return std::nullopt;
  return bisect(base, lo, hi, s_lo);
}

struct Sample {
  double lambda;
  int sign;
  double log_abs;
};

Sample sample(const DenseMatrix& base, double lambda) {
  const LuDecomposition lu(shifted(base, lambda));
  return {lambda, lu.determinant_sign(), lu.log_abs_determinant()};
}

// Sign changes between consecutive samples are bisected. A sample whose
// |det| is a strict local minimum without a neighbouring sign change may
// hide a pair of close roots; its neighbourhood is resampled more finely.
void scan(const DenseMatrix& base, const std::vector<Sample>& s, int depth,
          std::size_t max_roots, std::vector<double>& roots) {
  if (!s.empty() && s.front().sign == 0) roots.push_back(s.front().lambda);
  for (std::size_t g = 1; g < s.size(); ++g) {
    if (roots.size() >= max_roots) return;
    if (s[g].sign == 0)
      roots.push_back(s[g].lambda);
    else if (s[g - 1].sign != 0 && s[g].sign != s[g - 1].sign)
      roots.push_back(bisect(base, s[g - 1].lambda, s[g].lambda, s[g - 1].sign));
  }
  if (depth == 0) return;
  constexpr std::size_t kSub = 33;
  for (std::size_t g = 1; g + 1 < s.size(); ++g) {
    if (roots.size() >= max_roots) return;
    const bool same = s[g - 1].sign == s[g].sign && s[g].sign == s[g + 1].sign &&
                      s[g].sign != 0;
    if (!same || !(s[g].log_abs < s[g - 1].log_abs) ||
        !(s[g].log_abs < s[g + 1].log_abs))
      continue;
    const double lo = s[g - 1].lambda;
    const double hi = s[g + 1].lambda;
    std::vector<Sample> fine;
    for (std::size_t k = 0; k < kSub; ++k)
      fine.push_back(sample(base, k + 1 == kSub
                                      ? hi
                                      : lo + (hi - lo) * static_cast<double>(k) /
                                                 static_cast<double>(kSub - 1)));
    // Endpoints are already covered by the coarser pass.
    std::vector<double> found;
    scan(base, fine, depth - 1, max_roots - roots.size(), found);
    for (double r : found)
      if (r > lo && r < hi) roots.push_back(r);
  }
}

}  // namespace

double char_value(const MatrixSpec& a, double lambda, std::size_t n,
                  CharRoute route, const ConvergencePolicy& policy) {
  require_square_section(a, n);
  const DenseMatrix m = shifted(truncate(a, n), lambda);
  if (route == CharRoute::lu) return det_oracle(m);
  if (route == CharRoute::log_series) return det_log_series(m, policy).value;
  if (norm_inf(m - DenseMatrix::identity(n)) < 1.0) {
    try {
      return det_log_series(m, policy).value;
    } catch (const ConvergenceFailure&) {
    }
  }
  return det_oracle(m);
}

std::vector<double> eigenvector_for(const MatrixSpec& a, double lambda,
                                    std::size_t n) {
  require_square_section(a, n);
  DenseMatrix work = shifted(truncate(a, n), lambda);
  const double threshold = 1e-8 * std::max(1.0, norm_inf(work));

  std::vector<std::size_t> pivot_col;  // pivot column of each echelon row
  std::vector<bool> is_pivot(n + 1, false);
  std::size_t top = 1;
  for (std::size_t c = 1; c <= n && top <= n; ++c) {
    std::size_t best_row = top;
    double best = std::abs(work(top, c));
    for (std::size_t r = top + 1; r <= n; ++r) {
      const double v = std::abs(work(r, c));
      if (v > best) {
        best = v;
        best_row = r;
      }
    }
    if (best <= threshold) continue;
    if (best_row != top)
      for (std::size_t k = c; k <= n; ++k) std::swap(work(top, k), work(best_row, k));
    const double pivot = work(top, c);
    for (std::size_t r = top + 1; r <= n; ++r) {
      const double factor = work(r, c) / pivot;
      if (factor == 0.0) continue;
      work(r, c) = 0.0;
      for (std::size_t k = c + 1; k <= n; ++k) work(r, k) -= factor * work(top, k);
    }
    pivot_col.push_back(c);
    is_pivot[c] = true;
    ++top;
  }

  std::size_t free_col = 0;
  for (std::size_t c = 1; c <= n; ++c)
    if (!is_pivot[c]) {
      free_col = c;
      break;
    }
  if (free_col == 0)
    throw NotAnEigenvalue("A - lambda I has full numerical rank at size " +
                          std::to_string(n) + "; lambda = " +
                          std::to_string(lambda) + " is not an eigenvalue here");

  std::vector<double> x(n, 0.0);
  x[free_col - 1] = 1.0;
  for (std::size_t row = pivot_col.size(); row >= 1; --row) {
    const std::size_t c = pivot_col[row - 1];
    double acc = 0.0;
    for (std::size_t k = c + 1; k <= n; ++k) acc += work(row, k) * x[k - 1];
    x[c - 1] = -acc / work(row, c);
  }

  std::size_t biggest = 0;
  for (std::size_t idx = 1; idx < n; ++idx)
    if (std::abs(x[idx]) > std::abs(x[biggest])) biggest = idx;
  const double scale = x[biggest];
  for (double& v : x) v /= scale;
  x[biggest] = 1.0;
  return x;
}

std::vector<EigenPair> find_eigenvalues(const MatrixSpec& a,
                                        const EigenSearch& search,
                                        const TruncationSchedule& schedule,
                                        const ConvergencePolicy& policy) {
  policy.validate();
  if (!a.is_square())
    throw ExtentMismatch("spectral routines need a square matrix");
  if (!(search.lo < search.hi))
    throw InvalidArgument("eigenvalue interval needs lo < hi");
  if (search.grid_points < 2)
    throw InvalidArgument("eigenvalue grid needs at least 2 points");

  const std::vector<std::size_t> sizes =
      a.rows().is_finite() ? std::vector<std::size_t>{a.rows().value()}
                           : schedule.sizes();
  const std::size_t n = sizes.back();
  const DenseMatrix base = truncate(a, n);
  std::optional<DenseMatrix> coarse;
  if (sizes.size() >= 2) coarse = truncate(a, sizes[sizes.size() - 2]);

  const double step =
      (search.hi - search.lo) / static_cast<double>(search.grid_points - 1);
  auto grid = [&](std::size_t g) {
    return g + 1 == search.grid_points
               ? search.hi
               : search.lo + step * static_cast<double>(g);
  };

  std::vector<Sample> samples;
  for (std::size_t g = 0; g < search.grid_points; ++g)
    samples.push_back(sample(base, grid(g)));
  std::vector<double> roots;
  scan(base, samples, 3, search.max_roots, roots);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

  std::vector<EigenPair> out;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const double lambda = roots[k];
    double half = step;
    if (k > 0) half = std::min(half, 0.5 * (lambda - roots[k - 1]));
    if (k + 1 < roots.size()) half = std::min(half, 0.5 * (roots[k + 1] - lambda));
    EigenPair pair;
    pair.lambda = lambda;
    pair.section = n;
    pair.char_residual = std::abs(det_oracle(shifted(base, lambda)));
    if (coarse) {
      const auto again = root_in(*coarse, lambda - half, lambda + half);
      pair.stable = again && std::abs(*again - lambda) <= 1e-6;
    }
    try {
      pair.vector = eigenvector_for(a, lambda, n);
      const auto r = multiply(shifted(base, lambda),
                              std::span<const double>(pair.vector));
      for (double v : r) pair.vec_residual = std::max(pair.vec_residual, std::abs(v));
    } catch (const NotAnEigenvalue&) {
      pair.stable = false;
      pair.vec_residual = std::numeric_limits<double>::infinity();
    }
    out.push_back(std::move(pair));
  }
  return out;
}

}  // namespace infmat
