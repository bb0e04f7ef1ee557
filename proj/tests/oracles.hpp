#pragma once
// Reference implementations used only by the tests. Each one is written
// independently of the library code it checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include <boost/rational.hpp>

#include "infmat/matrix.hpp"

namespace oracle {

using Rows = std::vector<std::vector<double>>;

inline Rows rows_of(const infmat::DenseMatrix& m) {
  Rows out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i + 1, j + 1);
  return out;
}

inline infmat::DenseMatrix dense_of(const Rows& r) {
  infmat::DenseMatrix m(r.size(), r.empty() ? 0 : r.front().size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i + 1, j + 1) = r[i][j];
  return m;
}

// Laplace expansion along the first row.
inline double cofactor_det(const Rows& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  double sum = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    if (a[0][c] == 0.0) continue;
    Rows minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<double> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(row);
    }
    sum += (c % 2 == 0 ? 1.0 : -1.0) * a[0][c] * cofactor_det(minor);
  }
  return sum;
}

inline Rows brute_matmul(const Rows& a, const Rows& b) {
  Rows c(a.size(), std::vector<double>(b.front().size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.front().size(); ++j)
      for (std::size_t l = 0; l < b.size(); ++l) c[i][j] += a[i][l] * b[l][j];
  return c;
}

using Q = boost::rational<long long>;

// Rank over the rationals of an integer matrix.
inline std::size_t exact_rank(const std::vector<std::vector<long long>>& in) {
  std::vector<std::vector<Q>> a;
  for (const auto& row : in) a.emplace_back(row.begin(), row.end());
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a.front().size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c].numerator() == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (a[r][c].numerator() == 0) continue;
      const Q f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

// Classical Gram-Schmidt without normalization.
inline Rows gram_schmidt(const Rows& a) {
  Rows v;
  for (const auto& row : a) {
    std::vector<double> w = row;
    for (const auto& q : v) {
      double num = 0.0, den = 0.0;
      for (std::size_t k = 0; k < row.size(); ++k) {
        num += row[k] * q[k];
        den += q[k] * q[k];
      }
      for (std::size_t k = 0; k < row.size(); ++k) w[k] -= num / den * q[k];
    }
    v.push_back(w);
  }
  return v;
}

// Characteristic polynomial det(lambda I - A) by Faddeev-LeVerrier,
// coefficients from the leading 1 down to the constant term.
inline std::vector<double> char_poly(const Rows& a) {
  const std::size_t n = a.size();
  std::vector<double> c(n + 1, 0.0);
  c[0] = 1.0;
  Rows m(n, std::vector<double>(n, 0.0));
  for (std::size_t k = 1; k <= n; ++k) {
    Rows next = brute_matmul(a, m);
    for (std::size_t i = 0; i < n; ++i) next[i][i] += c[k - 1];
    m = next;
    const Rows am = brute_matmul(a, m);
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += am[i][i];
    c[k] = -tr / static_cast<double>(k);
  }
  return c;
}

inline std::complex<double> poly_at(const std::vector<double>& c,
                                    std::complex<double> x) {
  std::complex<double> v = 0.0;
  for (double coef : c) v = v * x + coef;
  return v;
}

// Real roots of a monic polynomial via Durand-Kerner, polished by Newton.
inline std::vector<double> real_roots(const std::vector<double>& c) {
  const std::size_t n = c.size() - 1;
  std::vector<std::complex<double>> z(n);
  for (std::size_t k = 0; k < n; ++k)
    z[k] = std::pow(std::complex<double>(0.4, 0.9), static_cast<double>(k));
  for (int iter = 0; iter < 2000; ++iter) {
    double moved = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      std::complex<double> den = 1.0;
      for (std::size_t m = 0; m < n; ++m)
        if (m != k) den *= z[k] - z[m];
      const auto step = poly_at(c, z[k]) / den;
      z[k] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-15) break;
  }
  std::vector<double> derivative;
  for (std::size_t k = 0; k < n; ++k)
    derivative.push_back(c[k] * static_cast<double>(n - k));
  std::vector<double> roots;
  for (const auto& root : z) {
    if (std::abs(root.imag()) > 1e-6 * std::max(1.0, std::abs(root))) continue;
    double x = root.real();
    for (int iter = 0; iter < 20; ++iter) {
      const double d = poly_at(derivative, x).real();
      if (d == 0.0) break;
      x -= poly_at(c, x).real() / d;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

inline Rows random_rows(std::mt19937& rng, std::size_t m, std::size_t n,
                        double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Rows r(m, std::vector<double>(n));
  for (auto& row : r)
    for (double& v : row) v = u(rng);
  return r;
}

inline double max_abs_diff(const Rows& a, const Rows& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      d = std::max(d, std::abs(a[i][j] - b[i][j]));
  return d;
}

}  // namespace oracle
