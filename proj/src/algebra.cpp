#include "infmat/algebra.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "infmat/error.hpp"

namespace infmat {

Vector::Vector(Extent extent, std::function<double(std::size_t)> entry)
    : extent_(extent), entry_(std::move(entry)) {
  if (!entry_) throw InvalidArgument("vector needs an entry oracle");
}

Vector::Vector(std::vector<double> values)
    : extent_(Extent(values.empty() ? 1 : values.size())) {
  if (values.empty()) throw InvalidArgument("vector must be non-empty");
  auto data = std::make_shared<const std::vector<double>>(std::move(values));
  entry_ = [data](std::size_t i) { return (*data)[i - 1]; };
}

double Vector::at(std::size_t i) const {
  const double value = entry_(i);
  if (!std::isfinite(value)) throw NonFiniteEntry(i, 1);
  return value;
}

std::vector<double> Vector::section(std::size_t n) const {
  if (extent_.is_finite() && n > extent_.value())
    throw ExtentMismatch("vector section exceeds extent");
  std::vector<double> out(n);
  for (std::size_t i = 1; i <= n; ++i) out[i - 1] = at(i);
  return out;
}

Vector unit_vector(Extent extent, std::size_t index) {
  return Vector(extent, [index](std::size_t i) { return i == index ? 1.0 : 0.0; });
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows())
    throw ExtentMismatch("dense product of " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 1; i <= a.rows(); ++i)
    for (std::size_t l = 1; l <= a.cols(); ++l) {
      const double ail = a(i, l);
      if (ail == 0.0) continue;
      for (std::size_t j = 1; j <= b.cols(); ++j) out(i, j) += ail * b(l, j);
    }
  return out;
}

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ExtentMismatch("dense operands differ in shape");
}

}  // namespace

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b);
  DenseMatrix out = a;
  for (std::size_t i = 1; i <= a.rows(); ++i)
    for (std::size_t j = 1; j <= a.cols(); ++j) out(i, j) += b(i, j);
  return out;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b);
  DenseMatrix out = a;
  for (std::size_t i = 1; i <= a.rows(); ++i)
    for (std::size_t j = 1; j <= a.cols(); ++j) out(i, j) -= b(i, j);
  return out;
}

DenseMatrix operator*(double c, const DenseMatrix& a) {
  DenseMatrix out = a;
  for (std::size_t i = 1; i <= a.rows(); ++i)
    for (std::size_t j = 1; j <= a.cols(); ++j) out(i, j) *= c;
  return out;
}

std::vector<double> multiply(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size())
    throw ExtentMismatch("matrix-vector sizes differ");
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t i = 1; i <= a.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= a.cols(); ++j) acc += a(i, j) * x[j - 1];
    out[i - 1] = acc;
  }
  return out;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b);
  double worst = 0.0;
  for (std::size_t i = 1; i <= a.rows(); ++i)
    for (std::size_t j = 1; j <= a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

namespace {

bool is_banded(const MatrixSpec& m) {
  return m.structure() == Structure::banded ||
         m.structure() == Structure::diagonal;
}

}  // namespace

MatrixSpec add(const MatrixSpec& a, const MatrixSpec& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ExtentMismatch("sum of " + a.rows().to_string() + "x" +
                         a.cols().to_string() + " and " +
                         b.rows().to_string() + "x" + b.cols().to_string());
  const EntryOracle fa = a.oracle();
  const EntryOracle fb = b.oracle();
  MatrixSpec out(a.rows(), a.cols(), [fa, fb](std::size_t i, std::size_t j) {
    return fa(i, j) + fb(i, j);
  });
  if (is_banded(a) && is_banded(b)) {
    out = out.with_band(std::max(a.lower_bandwidth(), b.lower_bandwidth()),
                        std::max(a.upper_bandwidth(), b.upper_bandwidth()));
  } else if (a.structure() == Structure::finite_support &&
             b.structure() == Structure::finite_support) {
    out = out.with_support(std::max(a.support_rows(), b.support_rows()),
                           std::max(a.support_cols(), b.support_cols()));
  } else if (a.is_finite()) {
    out = out.with_structure(Structure::dense_finite);
  }
  if (a.decay() && b.decay()) {
    const auto& ca = *a.decay();
    const auto& cb = *b.decay();
    const double r = std::max(ca.r, cb.r);
    out = out.with_decay(DecayCertificate{ca.C + cb.C, r});
  }
  return out;
}

MatrixSpec scale(double c, const MatrixSpec& a) {
  if (!std::isfinite(c)) throw InvalidArgument("scale factor must be finite");
  const EntryOracle fa = a.oracle();
  MatrixSpec out(a.rows(), a.cols(),
                 [fa, c](std::size_t i, std::size_t j) { return c * fa(i, j); },
                 a.structure());
  if (is_banded(a))
    out = out.with_band(a.lower_bandwidth(), a.upper_bandwidth());
  else if (a.structure() == Structure::finite_support)
    out = out.with_support(a.support_rows(), a.support_cols());
  if (a.decay() && c != 0.0)
    out = out.with_decay(DecayCertificate{std::abs(c) * a.decay()->C,
                                          a.decay()->r});
  return out;
}

const char* to_string(ProductStatus status) {
  switch (status) {
    case ProductStatus::converged: return "converged";
    case ProductStatus::partial: return "partial";
    case ProductStatus::failed: return "failed";
  }
  return "failed";
}

namespace {

struct InnerRange {
  std::size_t lo = 1;
  std::optional<std::size_t> hi;  // nullopt: unbounded
};

InnerRange inner_range(const MatrixSpec& a, const MatrixSpec& b, std::size_t i,
                       std::size_t j) {
  InnerRange range;
  if (const auto ra = a.row_support(i)) {
    range.lo = std::max(range.lo, ra->first);
    range.hi = ra->second;
  }
  if (const auto cb = b.col_support(j)) {
    range.lo = std::max(range.lo, cb->first);
    range.hi = range.hi ? std::min(*range.hi, cb->second) : cb->second;
  }
  return range;
}

ConvergenceReport exact_inner(const MatrixSpec& a, const MatrixSpec& b,
                              std::size_t i, std::size_t j, std::size_t lo,
                              std::size_t hi) {
  ConvergenceReport report;
  report.status = Status::converged;
  double acc = 0.0;
  for (std::size_t l = lo; l <= hi; ++l) {
    const double term = a.entry(i, l) * b.entry(l, j);
    ++report.terms_used;
    report.last_index = l;
    if (!std::isfinite(term)) {
      report.status = Status::diverged;
      report.offending_index = l;
      break;
    }
    acc += term;
  }
  report.estimate = acc;
  return report;
}

std::optional<GeometricBound> inner_bound(const MatrixSpec& a,
                                          const MatrixSpec& b, std::size_t i,
                                          std::size_t j, std::size_t lo) {
  if (!a.decay() || !b.decay()) return std::nullopt;
  const auto& ca = *a.decay();
  const auto& cb = *b.decay();
  const double rho = ca.r * cb.r;
  const double c = ca.C * cb.C * std::pow(ca.r, static_cast<double>(i)) *
                   std::pow(cb.r, static_cast<double>(j)) *
                   std::pow(rho, static_cast<double>(lo - 1));
  return GeometricBound{c, rho};
}

ConvergenceReport series_inner(const MatrixSpec& a, const MatrixSpec& b,
                               std::size_t i, std::size_t j, std::size_t lo,
                               const ConvergencePolicy& policy,
                               bool absolute) {
  const EntryOracle& fa = a.oracle();
  const EntryOracle& fb = b.oracle();
  auto term = [&](std::size_t k) {
    const std::size_t l = lo + k - 1;
    const double t = fa(i, l) * fb(l, j);
    return absolute ? std::abs(t) : t;
  };
  auto report = sum_series(term, policy, inner_bound(a, b, i, j, lo));
  if (report.offending_index) *report.offending_index += lo - 1;
  report.last_index += lo - 1;
  return report;
}

}  // namespace

ConvergenceReport product_entry(const MatrixSpec& a, const MatrixSpec& b,
                                std::size_t i, std::size_t j,
                                const ConvergencePolicy& policy) {
  if (a.cols() != b.rows())
    throw ExtentMismatch("product inner extents differ: " +
                         a.cols().to_string() + " vs " + b.rows().to_string());
  const InnerRange range = inner_range(a, b, i, j);
  if (range.hi) return exact_inner(a, b, i, j, range.lo, *range.hi);
  return series_inner(a, b, i, j, range.lo, policy, false);
}

ProductResult matmul(const MatrixSpec& a, const MatrixSpec& b,
                     const ConvergencePolicy& policy, std::size_t probe) {
  policy.validate();
  if (a.cols() != b.rows())
    throw ExtentMismatch("product inner extents differ: " +
                         a.cols().to_string() + " vs " + b.rows().to_string());

  if (a.is_finite() && b.is_finite()) {
    return ProductResult{from_dense(multiply(materialize(a), materialize(b))),
                         {},
                         ProductStatus::converged};
  }

  auto entry = [a, b, policy](std::size_t i, std::size_t j) {
    const auto report = product_entry(a, b, i, j, policy);
    return report.converged() ? report.estimate
                              : std::numeric_limits<double>::quiet_NaN();
  };
  MatrixSpec product(a.rows(), b.cols(), entry);
  if (is_banded(a) && is_banded(b))
    product = product.with_band(a.lower_bandwidth() + b.lower_bandwidth(),
                                a.upper_bandwidth() + b.upper_bandwidth());
  if (a.decay() && b.decay()) {
    const auto& ca = *a.decay();
    const auto& cb = *b.decay();
    const double rho = ca.r * cb.r;
    product = product.with_decay(DecayCertificate{
        ca.C * cb.C * rho / (1.0 - rho), std::max(ca.r, cb.r)});
  }

  ProductResult result{product, {}, ProductStatus::converged};
  if (a.cols().is_finite()) return result;

  const std::size_t rows = std::min(probe, a.rows().value_or(probe));
  const std::size_t cols = std::min(probe, b.cols().value_or(probe));
  const bool certified = a.decay() && b.decay();
  bool any_diverged = false;
  bool all_converged = true;
  for (std::size_t i = 1; i <= rows; ++i) {
    for (std::size_t j = 1; j <= cols; ++j) {
      const InnerRange range = inner_range(a, b, i, j);
      ConvergenceReport report;
      if (range.hi) {
        report = exact_inner(a, b, i, j, range.lo, *range.hi);
      } else {
        report = series_inner(a, b, i, j, range.lo, policy, false);
        if (report.converged() && !certified) {
          const auto abs_report =
              series_inner(a, b, i, j, range.lo, policy, true);
          if (!abs_report.converged()) report.status = abs_report.status;
        }
      }
      any_diverged = any_diverged || report.status == Status::diverged;
      all_converged = all_converged && report.converged();
      result.per_entry_reports.emplace(std::make_pair(i, j), report);
    }
  }
  result.overall_status = any_diverged    ? ProductStatus::failed
                          : all_converged ? ProductStatus::converged
                                          : ProductStatus::partial;
  return result;
}

MatvecResult matvec(const MatrixSpec& a, const Vector& x,
                    const ConvergencePolicy& policy, std::size_t probe) {
  if (a.cols() != x.extent())
    throw ExtentMismatch("matrix columns " + a.cols().to_string() +
                         " vs vector extent " + x.extent().to_string());
  MatrixSpec column(x.extent(), Extent(1),
                    [x](std::size_t l, std::size_t) { return x(l); });
  ProductResult product = matmul(a, column, policy, probe);
  const EntryOracle f = product.matrix.oracle();
  MatvecResult result{Vector(a.rows(), [f](std::size_t i) { return f(i, 1); }),
                      {},
                      product.overall_status};
  for (const auto& [key, report] : product.per_entry_reports)
    result.reports.emplace(key.first, report);
  return result;
}

ConvergenceReport trace_partial(const MatrixSpec& a,
                                const ConvergencePolicy& policy) {
  if (!a.is_square())
    throw ExtentMismatch("trace needs a square matrix, got " +
                         a.rows().to_string() + "x" + a.cols().to_string());
  std::optional<std::size_t> last;
  if (a.rows().is_finite()) last = a.rows().value();
  if (a.structure() == Structure::finite_support)
    last = std::min(a.support_rows(), a.support_cols());

  if (last) {
    ConvergenceReport report;
    report.status = Status::converged;
    double acc = 0.0;
    for (std::size_t i = 1; i <= *last; ++i) acc += a.at(i, i);
    report.estimate = acc;
    report.terms_used = *last;
    report.last_index = *last;
    return report;
  }
  std::optional<GeometricBound> bound;
  if (a.decay()) bound = GeometricBound{a.decay()->C, a.decay()->r * a.decay()->r};
  const EntryOracle& f = a.oracle();
  return sum_series([&](std::size_t k) { return f(k, k); }, policy, bound);
}

}  // namespace infmat
