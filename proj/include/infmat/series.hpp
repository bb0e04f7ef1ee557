#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "infmat/schedule.hpp"

namespace infmat {

enum class Status { converged, diverged, undetermined };

std::string_view to_string(Status status);

struct ConvergencePolicy {
  double tol = 1e-10;
  std::size_t window = 3;
  std::size_t max_terms = 100000;

  // Throws InvalidArgument unless tol > 0, window >= 1 and
  // max_terms >= window + 1.
  void validate() const;
};

// Declares |t_k| <= C * r^k for every k >= 1, with 0 <= r < 1.
struct GeometricBound {
  double C = 1.0;
  double r = 0.5;

  // Sum of the bound over all indices beyond `terms`.
  double tail_after(std::size_t terms) const;
};

struct ConvergenceReport {
  double estimate = 0.0;
  Status status = Status::undetermined;
  std::size_t terms_used = 0;
  double last_delta = 0.0;
  // True iff the stop was decided by an analytic tail bound.
  bool certified = false;
  // Term index (or schedule size) that produced a non-finite value.
  std::optional<std::size_t> offending_index;
  // Index of the last term, or the last schedule size, that was evaluated.
  std::size_t last_index = 0;

  bool converged() const { return status == Status::converged; }
};

// Window rule shared by every limit process in the library. Each observation
// is one step: `delta` is the change just seen, `magnitude` the size of the
// current value.
class WindowDetector {
 public:
  explicit WindowDetector(const ConvergencePolicy& policy);

  void observe(double delta, double magnitude);

  bool converged() const { return small_steps_ >= policy_.window; }
  bool diverging() const { return growing_steps_ >= policy_.window; }

 private:
  ConvergencePolicy policy_;
  std::size_t small_steps_ = 0;
  std::size_t growing_steps_ = 0;
  double last_magnitude_ = 0.0;
  bool has_magnitude_ = false;
};

// Term oracles are called with k = 1, 2, 3, ... in ascending order, once
// each, so an oracle may carry state that advances with k.
using TermOracle = std::function<double(std::size_t)>;

// Sums t_1 + t_2 + ... . Without a bound the window rule decides
// convergence. With a bound the sum stops as soon as the analytic tail is
// below tol * max(1, |partial sum|) and the report is certified.
ConvergenceReport sum_series(const TermOracle& term,
                             const ConvergencePolicy& policy,
                             std::optional<GeometricBound> bound = std::nullopt);

// Applies the stopping rule to v(n_1), v(n_2), ... over the given sizes.
ConvergenceReport limit_of_sequence(
    const std::function<double(std::size_t)>& value_at,
    std::span<const std::size_t> sizes, const ConvergencePolicy& policy);

ConvergenceReport limit_of_sequence(
    const std::function<double(std::size_t)>& value_at,
    const TruncationSchedule& schedule, const ConvergencePolicy& policy);

}  // namespace infmat
