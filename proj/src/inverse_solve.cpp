#include "infmat/inverse_solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <string>

#include "infmat/determinant.hpp"
#include "infmat/error.hpp"
#include "infmat/lu.hpp"

namespace infmat {

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::compatible: return "compatible";
    case Verdict::incompatible: return "incompatible";
    case Verdict::undetermined: return "undetermined";
  }
  return "undetermined";
}

const char* to_string(SolveRoute route) {
  switch (route) {
    case SolveRoute::compatibility: return "compatibility";
    case SolveRoute::cramer: return "cramer";
    case SolveRoute::inverse_multiply: return "inverse-multiply";
  }
  return "compatibility";
}

namespace {

struct NeumannSum {
  DenseMatrix sum;
  std::size_t terms = 0;  // includes the k = 0 term
};

// sum_k E^k R, stopped when ||E^k R||_inf <= tol for `window` consecutive
// k, or immediately when a term is exactly zero.
NeumannSum neumann_apply(const DenseMatrix& e, const DenseMatrix& rhs,
                         const ConvergencePolicy& policy) {
  NeumannSum out{rhs, 1};
  DenseMatrix term = rhs;
  WindowDetector detector(policy);
  for (std::size_t k = 1; k <= policy.max_terms; ++k) {
    term = multiply(e, term);
    const double size = norm_inf(term);
    if (size == 0.0) return out;
    out.sum = out.sum + term;
    out.terms = k + 1;
    detector.observe(size, 0.0);
    if (detector.converged()) return out;
  }
  throw ConvergenceFailure("Neumann series did not converge within " +
                           std::to_string(policy.max_terms) + " terms");
}

DenseMatrix identity_minus(const DenseMatrix& a) {
  return DenseMatrix::identity(a.rows()) - a;
}

void require_contraction(double norm) {
  if (!(norm < 1.0))
    throw PreconditionError(
        "Neumann series needs ||I - A||_inf < 1, measured " +
            std::to_string(norm),
        norm);
}

// ||I - A_N||_inf on the largest scheduled section, plus the certified tail
// of the columns beyond N when A carries a decay certificate.
double measured_contraction(const MatrixSpec& a, std::size_t n) {
  double norm = norm_inf(identity_minus(truncate(a, n)));
  if (a.decay()) {
    const auto& c = *a.decay();
    norm += c.C * std::pow(c.r, static_cast<double>(n + 2)) / (1.0 - c.r);
  }
  return norm;
}

std::vector<std::size_t> sizes_at_least(const TruncationSchedule& schedule,
                                        std::size_t minimum) {
  std::vector<std::size_t> out;
  for (std::size_t size : schedule.sizes())
    if (size >= minimum) out.push_back(size);
  return out;
}

}  // namespace

InverseReport neumann_inverse(const DenseMatrix& a,
                              const ConvergencePolicy& policy) {
  policy.validate();
  if (!a.is_square()) throw ExtentMismatch("inverse needs a square matrix");
  const DenseMatrix e = identity_minus(a);
  InverseReport out;
  out.norm_check = norm_inf(e);
  require_contraction(out.norm_check);
  const std::size_t n = a.rows();
  const NeumannSum series = neumann_apply(e, DenseMatrix::identity(n), policy);
  out.block = series.sum;
  out.lazy = from_dense(series.sum);
  out.series_terms = series.terms;
  out.residual = norm_inf(multiply(a, out.block) - DenseMatrix::identity(n));
  out.report.estimate = norm_inf(out.block);
  out.report.status = Status::converged;
  out.report.terms_used = series.terms;
  out.report.last_index = n;
  return out;
}

InverseReport neumann_inverse(const MatrixSpec& a,
                              const ConvergencePolicy& policy,
                              const TruncationSchedule& schedule,
                              std::size_t block) {
  policy.validate();
  if (!a.is_square())
    throw ExtentMismatch("inverse needs a square matrix, got " +
                         a.rows().to_string() + "x" + a.cols().to_string());
  if (a.is_finite()) return neumann_inverse(materialize(a), policy);
  if (block < 1) throw InvalidArgument("inverse block must be >= 1");

  const std::vector<std::size_t> sizes = sizes_at_least(schedule, block);
  if (sizes.empty())
    throw InvalidArgument("schedule max_size is below the requested block");

  InverseReport out;
  out.norm_check = measured_contraction(a, sizes.back());
  require_contraction(out.norm_check);

  DenseMatrix previous;
  DenseMatrix columns;  // N x block slice of the section inverse
  DenseMatrix section;
  WindowDetector detector(policy);
  ConvergenceReport& report = out.report;
  for (std::size_t n : sizes) {
    if (report.terms_used >= policy.max_terms) break;
    section = truncate(a, n);
    DenseMatrix rhs(n, block);
    for (std::size_t j = 1; j <= block; ++j) rhs(j, j) = 1.0;
    const NeumannSum series = neumann_apply(identity_minus(section), rhs, policy);
    columns = series.sum;
    out.series_terms = series.terms;
    DenseMatrix current = columns.block(block, block);

    ++report.terms_used;
    report.last_index = n;
    report.estimate = norm_inf(current);
    if (previous.rows() > 0) {
      report.last_delta = max_abs_diff(current, previous);
      detector.observe(report.last_delta, report.estimate);
    }
    previous = std::move(current);
    if (detector.converged()) {
      report.status = Status::converged;
      break;
    }
  }
  out.block = previous;

  DenseMatrix expected(section.rows(), block);
  for (std::size_t j = 1; j <= block; ++j) expected(j, j) = 1.0;
  out.residual = norm_inf(multiply(section, columns) - expected);

  // Larger blocks are computed on demand and cached by block size.
  struct Cache {
    std::mutex mutex;
    std::map<std::size_t, DenseMatrix> blocks;
  };
  auto cache = std::make_shared<Cache>();
  cache->blocks.emplace(block, report.converged() ? out.block : DenseMatrix());
  const std::size_t base = block;
  out.lazy = MatrixSpec(
      a.rows(), a.cols(),
      [a, policy, schedule, cache, base](std::size_t i, std::size_t j) {
        std::size_t need = base;
        while (need < std::max(i, j)) need *= 2;
        std::lock_guard<std::mutex> lock(cache->mutex);
        auto it = cache->blocks.find(need);
        if (it == cache->blocks.end()) {
          DenseMatrix computed;
          try {
            const InverseReport r = neumann_inverse(a, policy, schedule, need);
            if (r.report.converged()) computed = r.block;
          } catch (const Error&) {
          }
          it = cache->blocks.emplace(need, std::move(computed)).first;
        }
        if (it->second.rows() == 0)
          return std::numeric_limits<double>::quiet_NaN();
        return it->second(i, j);
      });
  return out;
}

std::size_t rank_of(const DenseMatrix& m) { return numerical_rank(m, 1e-10); }

namespace {

ConvergenceReport exact_count(std::size_t value, std::size_t size) {
  ConvergenceReport report;
  report.estimate = static_cast<double>(value);
  report.status = Status::converged;
  report.terms_used = 1;
  report.last_index = size;
  return report;
}

// A growing rank is reported as undetermined rather than divergent.
ConvergenceReport rank_limit(const std::function<double(std::size_t)>& value_at,
                             const TruncationSchedule& schedule,
                             const ConvergencePolicy& policy) {
  ConvergenceReport report = limit_of_sequence(value_at, schedule, policy);
  if (report.status == Status::diverged) report.status = Status::undetermined;
  return report;
}

DenseMatrix augment(const DenseMatrix& a, const std::vector<double>& b) {
  DenseMatrix out(a.rows(), a.cols() + 1);
  for (std::size_t i = 1; i <= a.rows(); ++i) {
    for (std::size_t j = 1; j <= a.cols(); ++j) out(i, j) = a(i, j);
    out(i, a.cols() + 1) = b[i - 1];
  }
  return out;
}

void require_rhs_extent(const MatrixSpec& a, const Vector& b) {
  if (a.rows() != b.extent())
    throw ExtentMismatch("right-hand side extent " + b.extent().to_string() +
                         " differs from row extent " + a.rows().to_string());
}

}  // namespace

ConvergenceReport rank_of(const MatrixSpec& m,
                          const TruncationSchedule& schedule,
                          const ConvergencePolicy& policy) {
  if (m.is_finite())
    return exact_count(rank_of(materialize(m)), m.rows().value());
  auto value_at = [&](std::size_t n) {
    const std::size_t rows = std::min(n, m.rows().value_or(n));
    const std::size_t cols = std::min(n, m.cols().value_or(n));
    return static_cast<double>(rank_of(truncate(m, rows, cols)));
  };
  return rank_limit(value_at, schedule, policy);
}

SolveReport check_compatibility(const MatrixSpec& a, const Vector& b,
                                const TruncationSchedule& schedule,
                                const ConvergencePolicy& policy) {
  require_rhs_extent(a, b);
  SolveReport out;
  out.route = SolveRoute::compatibility;
  if (a.is_finite()) {
    const DenseMatrix m = materialize(a);
    const auto rhs = b.section(m.rows());
    out.rank_A = exact_count(rank_of(m), m.rows());
    out.rank_Ab = exact_count(rank_of(augment(m, rhs)), m.rows());
    out.section = m.rows();
  } else {
    out.rank_A = rank_of(a, schedule, policy);
    auto value_at = [&](std::size_t n) {
      const std::size_t rows = std::min(n, a.rows().value_or(n));
      const std::size_t cols = std::min(n, a.cols().value_or(n));
      return static_cast<double>(
          rank_of(augment(truncate(a, rows, cols), b.section(rows))));
    };
    out.rank_Ab = rank_limit(value_at, schedule, policy);
    out.section = out.rank_Ab->last_index;
  }
  if (out.rank_A->converged() && out.rank_Ab->converged())
    out.compatible = out.rank_A->estimate == out.rank_Ab->estimate
                         ? Verdict::compatible
                         : Verdict::incompatible;
  else
    out.compatible = Verdict::undetermined;
  return out;
}

namespace {

void require_wanted(const MatrixSpec& a, const std::vector<std::size_t>& wanted) {
  for (std::size_t i : wanted)
    if (i < 1 || (a.cols().is_finite() && i > a.cols().value()))
      throw InvalidArgument("unknown index " + std::to_string(i) +
                            " is out of range");
}

std::vector<std::size_t> all_unknowns(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i + 1;
  return out;
}

DenseMatrix replace_column(DenseMatrix m, std::size_t col,
                           const std::vector<double>& b) {
  for (std::size_t i = 1; i <= m.rows(); ++i) m(i, col) = b[i - 1];
  return m;
}

double residual_of(const DenseMatrix& m, const std::vector<double>& x,
                   const std::vector<double>& b) {
  const auto ax = multiply(m, std::span<const double>(x));
  double worst = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    worst = std::max(worst, std::abs(ax[i] - b[i]));
  return worst;
}

}  // namespace

SolveReport cramer_solve(const MatrixSpec& a, const Vector& b,
                         const std::vector<std::size_t>& wanted_in,
                         const TruncationSchedule& schedule,
                         const ConvergencePolicy& policy) {
  policy.validate();
  if (!a.is_square()) throw ExtentMismatch("Cramer's rule needs a square system");
  require_rhs_extent(a, b);
  require_wanted(a, wanted_in);

  SolveReport out;
  out.route = SolveRoute::cramer;

  if (a.is_finite()) {
    const DenseMatrix m = materialize(a);
    const std::size_t n = m.rows();
    const auto rhs = b.section(n);
    const double det = det_oracle(m);
    if (!(std::abs(det) > policy.tol))
      throw SingularSystem("det A = " + std::to_string(det) +
                           " is not above tol");
    std::vector<double> x(n);
    for (std::size_t i = 1; i <= n; ++i)
      x[i - 1] = det_oracle(replace_column(m, i, rhs)) / det;
    const auto wanted = wanted_in.empty() ? all_unknowns(n) : wanted_in;
    for (std::size_t i : wanted) out.unknowns.emplace(i, exact_count(0, n));
    for (auto& [i, report] : out.unknowns) report.estimate = x[i - 1];
    out.residual = residual_of(m, x, rhs);
    out.section = n;
    out.compatible = Verdict::compatible;
    out.trace_condition = true;
    return out;
  }

  if (wanted_in.empty())
    throw InvalidArgument("infinite systems need an explicit list of unknowns");
  const DetReport det = det_infinite(a, schedule, policy);
  if (!det.report.converged() || !(std::abs(det.value) > policy.tol))
    throw SingularSystem("det A did not converge to a value above tol (" +
                         std::string(to_string(det.report.status)) + ", " +
                         std::to_string(det.value) + ")");

  struct Section {
    DenseMatrix m;
    std::vector<double> rhs;
    double det = 0.0;
  };
  std::map<std::size_t, Section> sections;
  auto section_at = [&](std::size_t n) -> const Section& {
    auto it = sections.find(n);
    if (it == sections.end()) {
      Section s{truncate(a, n), b.section(n), 0.0};
      s.det = det_oracle(s.m);
      it = sections.emplace(n, std::move(s)).first;
    }
    return it->second;
  };

  std::size_t final_size = 0;
  for (std::size_t i : wanted_in) {
    const auto sizes = sizes_at_least(schedule, i);
    if (sizes.empty())
      throw InvalidArgument("unknown " + std::to_string(i) +
                            " lies beyond the schedule's max_size");
    auto value_at = [&](std::size_t n) {
      const Section& s = section_at(n);
      return det_oracle(replace_column(s.m, i, s.rhs)) / s.det;
    };
    const auto report = limit_of_sequence(
        value_at, std::span<const std::size_t>(sizes), policy);
    final_size = std::max(final_size, report.last_index);
    out.unknowns.emplace(i, report);
  }

  const Section& last = section_at(final_size);
  std::vector<double> x = LuDecomposition(last.m).solve(last.rhs);
  for (const auto& [i, report] : out.unknowns)
    if (i <= x.size()) x[i - 1] = report.estimate;
  out.residual = residual_of(last.m, x, last.rhs);
  out.section = final_size;
  out.compatible = Verdict::compatible;

  bool traces = trace_partial(a, policy).converged();
  for (std::size_t i : wanted_in) {
    if (!traces) break;
    const EntryOracle f = a.oracle();
    MatrixSpec replaced(a.rows(), a.cols(), [f, b, i](std::size_t r, std::size_t c) {
      return c == i ? b(r) : f(r, c);
    });
    traces = trace_partial(replaced, policy).converged();
  }
  out.trace_condition = traces;
  return out;
}

SolveReport solve_via_inverse(const MatrixSpec& a, const Vector& b,
                              const std::vector<std::size_t>& wanted_in,
                              const TruncationSchedule& schedule,
                              const ConvergencePolicy& policy) {
  policy.validate();
  if (!a.is_square()) throw ExtentMismatch("system must be square");
  require_rhs_extent(a, b);
  require_wanted(a, wanted_in);

  SolveReport out;
  out.route = SolveRoute::inverse_multiply;

  auto solve_section = [&](const DenseMatrix& m, const std::vector<double>& rhs) {
    DenseMatrix column(rhs.size(), 1);
    for (std::size_t i = 1; i <= rhs.size(); ++i) column(i, 1) = rhs[i - 1];
    return neumann_apply(identity_minus(m), column, policy);
  };
  auto as_vector = [](const DenseMatrix& column) {
    std::vector<double> x(column.rows());
    for (std::size_t i = 1; i <= column.rows(); ++i) x[i - 1] = column(i, 1);
    return x;
  };

  if (a.is_finite()) {
    const DenseMatrix m = materialize(a);
    require_contraction(norm_inf(identity_minus(m)));
    const auto rhs = b.section(m.rows());
    const NeumannSum series = solve_section(m, rhs);
    const auto x = as_vector(series.sum);
    const auto wanted = wanted_in.empty() ? all_unknowns(m.rows()) : wanted_in;
    for (std::size_t i : wanted) {
      auto report = exact_count(0, m.rows());
      report.estimate = x[i - 1];
      report.terms_used = series.terms;
      out.unknowns.emplace(i, report);
    }
    out.residual = residual_of(m, x, rhs);
    out.section = m.rows();
    out.compatible = Verdict::compatible;
    return out;
  }

  if (wanted_in.empty())
    throw InvalidArgument("infinite systems need an explicit list of unknowns");
  const auto all_sizes = schedule.sizes();
  require_contraction(measured_contraction(a, all_sizes.back()));

  struct Section {
    DenseMatrix m;
    std::vector<double> rhs;
    std::vector<double> x;
  };
  std::map<std::size_t, Section> sections;
  auto section_at = [&](std::size_t n) -> const Section& {
    auto it = sections.find(n);
    if (it == sections.end()) {
      Section s{truncate(a, n), b.section(n), {}};
      s.x = as_vector(solve_section(s.m, s.rhs).sum);
      it = sections.emplace(n, std::move(s)).first;
    }
    return it->second;
  };

  std::size_t final_size = 0;
  for (std::size_t i : wanted_in) {
    const auto sizes = sizes_at_least(schedule, i);
    if (sizes.empty())
      throw InvalidArgument("unknown " + std::to_string(i) +
                            " lies beyond the schedule's max_size");
    auto report = limit_of_sequence(
        [&](std::size_t n) { return section_at(n).x[i - 1]; },
        std::span<const std::size_t>(sizes), policy);
    final_size = std::max(final_size, report.last_index);
    out.unknowns.emplace(i, report);
  }
  const Section& last = section_at(final_size);
  out.residual = residual_of(last.m, last.x, last.rhs);
  out.section = final_size;
  out.compatible = Verdict::compatible;
  return out;
}

}  // namespace infmat
