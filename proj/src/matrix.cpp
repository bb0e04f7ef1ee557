#include "infmat/matrix.hpp"

#include <memory>
#include <cmath>
#include <random>

#include "infmat/error.hpp"

namespace infmat {

Extent::Extent(std::size_t value) : value_(value) {
  if (value < 1) throw InvalidArgument("finite extent must be >= 1");
}

std::size_t Extent::value() const {
  if (!value_) throw InvalidArgument("extent is infinite");
  return *value_;
}

std::string Extent::to_string() const {
  return value_ ? std::to_string(*value_) : std::string("inf");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(
    std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ > 0 ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_)
      throw InvalidArgument("ragged initializer for DenseMatrix");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix out(n, n);
  for (std::size_t i = 1; i <= n; ++i) out(i, i) = 1.0;
  return out;
}

DenseMatrix DenseMatrix::block(std::size_t rows, std::size_t cols) const {
  if (rows > rows_ || cols > cols_)
    throw ExtentMismatch("block exceeds matrix size");
  DenseMatrix out(rows, cols);
  for (std::size_t i = 1; i <= rows; ++i)
    for (std::size_t j = 1; j <= cols; ++j) out(i, j) = (*this)(i, j);
  return out;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t i = 1; i <= rows_; ++i)
    for (std::size_t j = 1; j <= cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

const char* to_string(Structure structure) {
  switch (structure) {
    case Structure::dense_finite: return "dense";
    case Structure::expr: return "expr";
    case Structure::banded: return "banded";
    case Structure::diagonal: return "diag";
    case Structure::finite_support: return "finite-support";
  }
  return "expr";
}

double DecayCertificate::bound(std::size_t i, std::size_t j) const {
  return C * std::pow(r, static_cast<double>(i + j));
}

MatrixSpec::MatrixSpec(Extent rows, Extent cols, EntryOracle entry,
                       Structure structure)
    : rows_(rows), cols_(cols), entry_(std::move(entry)),
      structure_(structure) {
  if (!entry_) throw InvalidArgument("matrix spec needs an entry oracle");
}

double MatrixSpec::at(std::size_t i, std::size_t j) const {
  const double value = entry_(i, j);
  if (!std::isfinite(value)) throw NonFiniteEntry(i, j);
  return value;
}

MatrixSpec MatrixSpec::with_band(std::size_t lower, std::size_t upper) const {
  MatrixSpec out = *this;
  out.structure_ =
      lower == 0 && upper == 0 ? Structure::diagonal : Structure::banded;
  out.lower_ = lower;
  out.upper_ = upper;
  return out;
}

MatrixSpec MatrixSpec::with_support(std::size_t rows, std::size_t cols) const {
  MatrixSpec out = *this;
  out.structure_ = Structure::finite_support;
  out.support_rows_ = rows;
  out.support_cols_ = cols;
  return out;
}

MatrixSpec MatrixSpec::with_structure(Structure structure) const {
  MatrixSpec out = *this;
  out.structure_ = structure;
  if (structure == Structure::diagonal) out.lower_ = out.upper_ = 0;
  return out;
}

MatrixSpec MatrixSpec::with_decay(std::optional<DecayCertificate> decay) const {
  if (decay && (!(decay->C > 0.0) || !(decay->r > 0.0) || !(decay->r < 1.0)))
    throw InvalidArgument("decay certificate needs C > 0 and 0 < r < 1");
  MatrixSpec out = *this;
  out.decay_ = decay;
  return out;
}

namespace {

using Range = std::pair<std::size_t, std::size_t>;

Range clamp(Range range, const Extent& extent) {
  if (extent.is_finite() && range.second > extent.value())
    range.second = extent.value();
  return range;
}

}  // namespace

std::optional<Range> MatrixSpec::row_support(std::size_t i) const {
  switch (structure_) {
    case Structure::diagonal:
      return clamp({i, i}, cols_);
    case Structure::banded:
      return clamp({i > lower_ ? i - lower_ : 1, i + upper_}, cols_);
    case Structure::finite_support:
      if (i > support_rows_) return Range{1, 0};
      return clamp({1, support_cols_}, cols_);
    default:
      if (cols_.is_finite()) return Range{1, cols_.value()};
      return std::nullopt;
  }
}

std::optional<Range> MatrixSpec::col_support(std::size_t j) const {
  switch (structure_) {
    case Structure::diagonal:
      return clamp({j, j}, rows_);
    case Structure::banded:
      return clamp({j > upper_ ? j - upper_ : 1, j + lower_}, rows_);
    case Structure::finite_support:
      if (j > support_cols_) return Range{1, 0};
      return clamp({1, support_rows_}, rows_);
    default:
      if (rows_.is_finite()) return Range{1, rows_.value()};
      return std::nullopt;
  }
}

MatrixSpec from_dense(const DenseMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0)
    throw InvalidArgument("dense matrix must be non-empty");
  auto data = std::make_shared<const DenseMatrix>(m);
  return MatrixSpec(
      Extent(m.rows()), Extent(m.cols()),
      [data](std::size_t i, std::size_t j) { return (*data)(i, j); },
      Structure::dense_finite);
}

MatrixSpec identity_spec(Extent n) {
  return MatrixSpec(n, n, [](std::size_t i, std::size_t j) {
           return i == j ? 1.0 : 0.0;
         }).with_band(0, 0);
}

MatrixSpec zero_spec(Extent rows, Extent cols) {
  return MatrixSpec(rows, cols, [](std::size_t, std::size_t) { return 0.0; })
      .with_band(0, 0);
}

MatrixSpec diagonal_spec(Extent n, std::function<double(std::size_t)> diag) {
  return MatrixSpec(n, n,
                    [diag = std::move(diag)](std::size_t i, std::size_t j) {
                      return i == j ? diag(i) : 0.0;
                    })
      .with_band(0, 0);
}

MatrixSpec banded_spec(
    Extent rows, Extent cols,
    std::vector<std::pair<long, std::function<double(std::size_t)>>> bands) {
  std::size_t lower = 0;
  std::size_t upper = 0;
  for (const auto& [offset, fn] : bands) {
    if (offset < 0)
      lower = std::max(lower, static_cast<std::size_t>(-offset));
    else
      upper = std::max(upper, static_cast<std::size_t>(offset));
  }
  auto shared = std::make_shared<const decltype(bands)>(std::move(bands));
  return MatrixSpec(rows, cols,
                    [shared](std::size_t i, std::size_t j) {
                      const long offset =
                          static_cast<long>(j) - static_cast<long>(i);
                      for (const auto& [off, fn] : *shared)
                        if (off == offset) return fn(i);
                      return 0.0;
                    })
      .with_band(lower, upper);
}

MatrixSpec finite_support_spec(Extent rows, Extent cols,
                               std::size_t support_rows,
                               std::size_t support_cols, EntryOracle entry) {
  return MatrixSpec(rows, cols,
                    [entry = std::move(entry), support_rows, support_cols](
                        std::size_t i, std::size_t j) {
                      if (i > support_rows || j > support_cols) return 0.0;
                      return entry(i, j);
                    })
      .with_support(support_rows, support_cols);
}

DenseMatrix truncate(const MatrixSpec& m, std::size_t rows, std::size_t cols) {
  if (rows < 1 || cols < 1)
    throw InvalidArgument("truncation sizes must be >= 1");
  if ((m.rows().is_finite() && rows > m.rows().value()) ||
      (m.cols().is_finite() && cols > m.cols().value()))
    throw ExtentMismatch("truncation " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " exceeds extent " +
                         m.rows().to_string() + "x" + m.cols().to_string());
  DenseMatrix out(rows, cols);
  for (std::size_t i = 1; i <= rows; ++i) {
    const auto support = m.row_support(i);
    std::size_t lo = 1;
    std::size_t hi = cols;
    if (support) {
      lo = support->first;
      hi = std::min(hi, support->second);
    }
    for (std::size_t j = lo; j <= hi; ++j) out(i, j) = m.at(i, j);
  }
  return out;
}

DenseMatrix materialize(const MatrixSpec& m) {
  return truncate(m, m.rows().value(), m.cols().value());
}

MatrixSpec transpose(const MatrixSpec& m) {
  const EntryOracle& inner = m.oracle();
  MatrixSpec out(m.cols(), m.rows(),
                 [inner](std::size_t i, std::size_t j) { return inner(j, i); },
                 m.structure());
  switch (m.structure()) {
    case Structure::banded:
    case Structure::diagonal:
      out = out.with_band(m.upper_bandwidth(), m.lower_bandwidth());
      break;
    case Structure::finite_support:
      out = out.with_support(m.support_cols(), m.support_rows());
      break;
    default:
      break;
  }
  return out.with_decay(m.decay());
}

std::optional<Range> find_structure_violation(const MatrixSpec& m,
                                              std::size_t samples,
                                              unsigned seed) {
  std::mt19937 rng(seed);
  const std::size_t row_cap = m.rows().value_or(500);
  const std::size_t col_cap = m.cols().value_or(500);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };

  const Structure s = m.structure();
  if (s != Structure::banded && s != Structure::diagonal &&
      s != Structure::finite_support)
    return std::nullopt;

  for (std::size_t n = 0; n < samples; ++n) {
    std::size_t i = 0;
    std::size_t j = 0;
    if (s == Structure::finite_support) {
      const bool beyond_rows = m.support_rows() < row_cap &&
                               (m.support_cols() >= col_cap || uniform(0, 1));
      if (beyond_rows) {
        i = uniform(m.support_rows() + 1, row_cap);
        j = uniform(1, col_cap);
      } else if (m.support_cols() < col_cap) {
        i = uniform(1, row_cap);
        j = uniform(m.support_cols() + 1, col_cap);
      } else {
        return std::nullopt;  // box covers the whole matrix
      }
    } else {
      // Pick a point below the lower band or above the upper band.
      const bool below = uniform(0, 1) == 1;
      const std::size_t band = below ? m.lower_bandwidth() : m.upper_bandwidth();
      const std::size_t d = band + uniform(1, 200);
      const std::size_t base = uniform(1, 300);
      i = below ? base + d : base;
      j = below ? base : base + d;
      if (i > row_cap || j > col_cap) continue;
    }
    if (m.entry(i, j) != 0.0) return Range{i, j};
  }
  return std::nullopt;
}

std::optional<Range> find_decay_violation(const MatrixSpec& m,
                                          std::size_t samples,
                                          std::size_t probe, unsigned seed) {
  if (!m.decay()) return std::nullopt;
  const DecayCertificate cert = *m.decay();
  const std::size_t row_cap = std::min(probe, m.rows().value_or(probe));
  const std::size_t col_cap = std::min(probe, m.cols().value_or(probe));
  auto check = [&](std::size_t i, std::size_t j) {
    return std::abs(m.entry(i, j)) <= cert.bound(i, j) + 1e-15;
  };
  for (std::size_t i = 1; i <= std::min<std::size_t>(8, row_cap); ++i)
    for (std::size_t j = 1; j <= std::min<std::size_t>(8, col_cap); ++j)
      if (!check(i, j)) return Range{i, j};
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> ri(1, row_cap);
  std::uniform_int_distribution<std::size_t> rj(1, col_cap);
  for (std::size_t n = 0; n < samples; ++n) {
    const std::size_t i = ri(rng);
    const std::size_t j = rj(rng);
    if (!check(i, j)) return Range{i, j};
  }
  return std::nullopt;
}

double norm_inf(const DenseMatrix& m) {
  double best = 0.0;
  for (std::size_t i = 1; i <= m.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 1; j <= m.cols(); ++j) row += std::abs(m(i, j));
    best = std::max(best, row);
  }
  return best;
}

}  // namespace infmat
