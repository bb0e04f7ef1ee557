#include "infmat/bases.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>

#include "infmat/error.hpp"
#include "infmat/lu.hpp"

namespace infmat {

Vector BasisFamily::vector_at(std::size_t k) const {
  auto coord = coordinate;
  return Vector(dimension, [coord, k](std::size_t i) { return coord(i, k); });
}

MatrixSpec BasisFamily::as_columns() const {
  return MatrixSpec(dimension, count, coordinate);
}

BasisFamily standard_basis(Extent n) {
  return {n, n, [](std::size_t i, std::size_t k) { return i == k ? 1.0 : 0.0; }};
}

BasisFamily basis_from_vectors(std::vector<std::vector<double>> vectors) {
  if (vectors.empty())
    throw InvalidArgument("a basis needs at least one vector");
  const std::size_t d = vectors.front().size();
  for (const auto& v : vectors)
    if (v.size() != d)
      throw ExtentMismatch("basis vectors must share one dimension");
  if (d == 0) throw InvalidArgument("basis vectors must be non-empty");
  auto shared =
      std::make_shared<const std::vector<std::vector<double>>>(std::move(vectors));
  return {Extent(shared->size()), Extent(d),
          [shared](std::size_t i, std::size_t k) {
            return (*shared)[k - 1][i - 1];
          }};
}

namespace {

// alpha (n x count) with V_n alpha = [u_1 .. u_count]_n.
DenseMatrix coordinates_on_section(const BasisFamily& from,
                                   const BasisFamily& to, std::size_t n,
                                   std::size_t count) {
  const LuDecomposition lu(truncate(from.as_columns(), n));
  DenseMatrix alpha(n, count);
  std::vector<double> u(n);
  for (std::size_t i = 1; i <= count; ++i) {
    for (std::size_t c = 1; c <= n; ++c) {
      u[c - 1] = to.coordinate(c, i);
      if (!std::isfinite(u[c - 1])) throw NonFiniteEntry(c, i);
    }
    const auto x = lu.solve(u);
    for (std::size_t j = 1; j <= n; ++j) alpha(j, i) = x[j - 1];
  }
  return alpha;
}

Status worse(Status a, Status b) {
  if (a == Status::diverged || b == Status::diverged) return Status::diverged;
  if (a == Status::undetermined || b == Status::undetermined)
    return Status::undetermined;
  return Status::converged;
}

}  // namespace

TransitionResult transition_matrix(const BasisFamily& from,
                                   const BasisFamily& to, std::size_t count,
                                   const TruncationSchedule& schedule,
                                   const ConvergencePolicy& policy) {
  policy.validate();
  if (count < 1) throw InvalidArgument("transition needs at least one column");
  if (!(from.count == from.dimension))
    throw ExtentMismatch("a basis needs as many vectors as coordinates (" +
                         from.count.to_string() + " vs " +
                         from.dimension.to_string() + ")");
  if (!(to.dimension == from.dimension))
    throw ExtentMismatch("both bases must live in the same space");
  if (to.count.is_finite() && count > to.count.value())
    throw ExtentMismatch("only " + to.count.to_string() +
                         " target vectors are available");

  TransitionResult out;
  if (from.dimension.is_finite()) {
    const std::size_t d = from.dimension.value();
    out.matrix = coordinates_on_section(from, to, d, count);
    out.column_status.assign(count, Status::converged);
    out.section = d;
    return out;
  }

  schedule.validate();
  std::vector<std::size_t> sizes;
  for (std::size_t n : schedule.sizes())
    if (n >= count) sizes.push_back(n);
  if (sizes.empty())
    throw InvalidArgument("max_size " + std::to_string(schedule.max_size) +
                          " is below the requested column count " +
                          std::to_string(count));

  std::map<std::size_t, DenseMatrix> sections;
  auto alpha_at = [&](std::size_t n) -> const DenseMatrix& {
    auto it = sections.find(n);
    if (it == sections.end())
      it = sections
               .emplace(n, coordinates_on_section(from, to, n, count)
                               .block(count, count))
               .first;
    return it->second;
  };

  out.matrix = DenseMatrix(count, count);
  out.column_status.assign(count, Status::converged);
  for (std::size_t i = 1; i <= count; ++i) {
    for (std::size_t j = 1; j <= count; ++j) {
      const auto report = limit_of_sequence(
          [&](std::size_t n) { return alpha_at(n)(j, i); }, sizes, policy);
      out.matrix(j, i) = report.estimate;
      out.column_status[i - 1] = worse(out.column_status[i - 1], report.status);
      out.section = std::max(out.section, report.last_index);
      out.coordinate_reports.emplace(std::make_pair(j, i), report);
    }
  }
  return out;
}

DenseMatrix transformation_matrix(
    const std::function<double(std::size_t, std::size_t)>& image, Extent m,
    std::size_t n) {
  if (n < 1) throw InvalidArgument("transformation needs n >= 1");
  const std::size_t cols = m.value_or(n);
  DenseMatrix out(n, cols);
  for (std::size_t i = 1; i <= cols; ++i)
    for (std::size_t j = 1; j <= n; ++j) {
      const double v = image(j, i);
      if (!std::isfinite(v)) throw NonFiniteEntry(j, i);
      out(j, i) = v;
    }
  return out;
}

TransitionResult transformation_matrix(const BasisFamily& images,
                                       const BasisFamily& target,
                                       std::size_t count,
                                       const TruncationSchedule& schedule,
                                       const ConvergencePolicy& policy) {
  return transition_matrix(target, images, count, schedule, policy);
}

OrthReport orthogonalize(const MatrixSpec& a, const ConvergencePolicy& policy) {
  policy.validate();
  if (a.rows().is_infinite())
    throw ExtentMismatch("orthogonalization needs finitely many rows");
  const std::size_t m = a.rows().value();
  const MatrixSpec at = transpose(a);

  OrthReport out{DenseMatrix(m, m), {}, DenseMatrix::identity(m),
                 zero_spec(Extent(m), a.cols()), 0.0, 0.0, false, {}};

  auto dot = [&](const MatrixSpec& x, const MatrixSpec& xt, std::size_t p,
                 std::size_t q) {
    if (x.cols().is_finite()) {
      double acc = 0.0;
      for (std::size_t l = 1; l <= x.cols().value(); ++l)
        acc += x.at(p, l) * x.at(q, l);
      return ConvergenceReport{acc, Status::converged, x.cols().value(), 0.0,
                               false, std::nullopt, x.cols().value()};
    }
    auto report = product_entry(x, xt, p, q, policy);
    if (!report.converged())
      throw ConvergenceFailure("inner product of rows " + std::to_string(p) +
                               " and " + std::to_string(q) + " " +
                               std::string(to_string(report.status)));
    return report;
  };

  for (std::size_t p = 1; p <= m; ++p)
    for (std::size_t q = p; q <= m; ++q) {
      const auto report = dot(a, at, p, q);
      out.gram(p, q) = out.gram(q, p) = report.estimate;
      if (a.cols().is_infinite())
        out.gram_reports.emplace(std::make_pair(p, q), report);
    }

  double scale = 0.0;
  for (std::size_t p = 1; p <= m; ++p)
    scale = std::max(scale, std::abs(out.gram(p, p)));

  DenseMatrix g = out.gram;
  DenseMatrix& t = out.combination;
  for (std::size_t c = 1; c <= m; ++c) {
    const double pivot = g(c, c);
    if (!(std::abs(pivot) > 1e-12 * scale))
      throw DependentRows(c, "row " + std::to_string(c) +
                                 " is a combination of earlier rows");
    for (std::size_t q = c + 1; q <= m; ++q) {
      const double f = g(q, c) / pivot;
      if (f == 0.0) continue;
      for (std::size_t k = 1; k <= m; ++k) {
        g(q, k) -= f * g(c, k);
        t(q, k) -= f * t(c, k);
      }
      g(q, c) = 0.0;
    }
  }
  out.G = g;

  auto coeffs = std::make_shared<const DenseMatrix>(t);
  auto base = a.oracle();
  MatrixSpec prime(Extent(m), a.cols(), [coeffs, base, m](std::size_t p,
                                                           std::size_t l) {
    double acc = 0.0;
    for (std::size_t q = 1; q <= p && q <= m; ++q) {
      const double c = (*coeffs)(p, q);
      if (c != 0.0) acc += c * base(q, l);
    }
    return acc;
  });
  if (a.decay()) {
    // |A'(p,l)| <= C r^l sum_q |T(p,q)| r^q, folded into one constant.
    const DecayCertificate d = *a.decay();
    double c_prime = 0.0;
    for (std::size_t p = 1; p <= m; ++p) {
      double s = 0.0;
      for (std::size_t q = 1; q <= p; ++q)
        s += std::abs(t(p, q)) * std::pow(d.r, static_cast<double>(q));
      c_prime = std::max(c_prime, d.C * s / std::pow(d.r, static_cast<double>(p)));
    }
    if (std::isfinite(c_prime) && d.r > 0.0)
      prime = prime.with_decay(DecayCertificate{c_prime, d.r});
  }
  out.a_prime = prime;

  const MatrixSpec prime_t = transpose(prime);
  for (std::size_t p = 1; p <= m; ++p)
    for (std::size_t q = p; q <= m; ++q) {
      const double v = dot(prime, prime_t, p, q).estimate;
      if (p == q)
        out.max_row_norm2 = std::max(out.max_row_norm2, std::abs(v));
      else
        out.max_offdiag_dot = std::max(out.max_offdiag_dot, std::abs(v));
    }
  out.orthogonal = out.max_offdiag_dot <= 1e-8 * std::max(1.0, out.max_row_norm2);
  return out;
}

}  // namespace infmat
