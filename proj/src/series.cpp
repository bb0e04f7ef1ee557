#include "infmat/series.hpp"

#include <cmath>
#include <deque>
#include <string>

#include "infmat/error.hpp"

namespace infmat {

std::string_view to_string(Status status) {
  switch (status) {
    case Status::converged:
      return "converged";
    case Status::diverged:
      return "diverged";
    case Status::undetermined:
      return "undetermined";
  }
  return "undetermined";
}

void ConvergencePolicy::validate() const {
  if (!(tol > 0.0) || !std::isfinite(tol))
    throw InvalidArgument("policy tol must be a positive finite number");
  if (window < 1) throw InvalidArgument("policy window must be >= 1");
  if (max_terms < window + 1)
    throw InvalidArgument("policy max_terms must be >= window + 1");
}

double GeometricBound::tail_after(std::size_t terms) const {
  if (r == 0.0) return 0.0;
  return C * std::pow(r, static_cast<double>(terms + 1)) / (1.0 - r);
}

void TruncationSchedule::validate() const {
  if (start < 1) throw InvalidArgument("schedule start must be >= 1");
  if (!(growth >= 2.0) || !std::isfinite(growth))
    throw InvalidArgument("schedule growth must be >= 2");
  if (max_size < start)
    throw InvalidArgument("schedule max_size must be >= start");
}

std::vector<std::size_t> TruncationSchedule::sizes() const {
  validate();
  std::vector<std::size_t> out;
  double next = static_cast<double>(start);
  while (true) {
    auto size = static_cast<std::size_t>(std::llround(next));
    if (!out.empty() && size <= out.back()) size = out.back() + 1;
    if (size >= max_size) break;
    out.push_back(size);
    next *= growth;
  }
  out.push_back(max_size);
  return out;
}

std::vector<std::size_t> TruncationSchedule::sizes_up_to(
    std::size_t extent) const {
  std::vector<std::size_t> out;
  for (std::size_t size : sizes()) {
    if (size >= extent) {
      out.push_back(extent);
      break;
    }
    out.push_back(size);
  }
  return out;
}

WindowDetector::WindowDetector(const ConvergencePolicy& policy)
    : policy_(policy) {}

void WindowDetector::observe(double delta, double magnitude) {
  if (delta <= policy_.tol * std::max(1.0, magnitude))
    ++small_steps_;
  else
    small_steps_ = 0;

  if (has_magnitude_ && magnitude > 1.0 / policy_.tol &&
      magnitude > last_magnitude_)
    ++growing_steps_;
  else
    growing_steps_ = 0;
  last_magnitude_ = magnitude;
  has_magnitude_ = true;
}

namespace {

// Heuristic used only when the cap is reached: the last `window` steps all
// moved in the same direction by non-shrinking amounts, so the terms are not
// tending to zero.
bool drift_persists(const std::deque<double>& steps, std::size_t window) {
  if (steps.size() < window || window < 1) return false;
  for (std::size_t idx = 0; idx < steps.size(); ++idx) {
    if (steps[idx] == 0.0) return false;
    if (idx > 0) {
      if (std::signbit(steps[idx]) != std::signbit(steps[0])) return false;
      if (std::abs(steps[idx]) < std::abs(steps[idx - 1])) return false;
    }
  }
  return true;
}

// Drives the stopping rule over a stream of successive values.
class Tracker {
 public:
  explicit Tracker(const ConvergencePolicy& policy)
      : policy_(policy), detector_(policy) {}

  // Returns true once a verdict is reached.
  bool push(double value, std::size_t index) {
    ++report_.terms_used;
    report_.last_index = index;
    if (!std::isfinite(value)) {
      report_.status = Status::diverged;
      report_.offending_index = index;
      return true;
    }
    if (has_value_) {
      const double step = value - report_.estimate;
      report_.last_delta = std::abs(step);
      detector_.observe(report_.last_delta, std::abs(value));
      steps_.push_back(step);
      if (steps_.size() > policy_.window) steps_.pop_front();
    }
    report_.estimate = value;
    has_value_ = true;
    if (detector_.converged()) {
      report_.status = Status::converged;
      return true;
    }
    if (detector_.diverging()) {
      report_.status = Status::diverged;
      return true;
    }
    return false;
  }

  ConvergenceReport& report() { return report_; }

  ConvergenceReport finish_at_cap() {
    report_.status = drift_persists(steps_, policy_.window)
                         ? Status::diverged
                         : Status::undetermined;
    return report_;
  }

 private:
  ConvergencePolicy policy_;
  WindowDetector detector_;
  ConvergenceReport report_;
  std::deque<double> steps_;
  bool has_value_ = false;
};

}  // namespace

ConvergenceReport sum_series(const TermOracle& term,
                             const ConvergencePolicy& policy,
                             std::optional<GeometricBound> bound) {
  policy.validate();
  if (bound && (!(bound->r >= 0.0) || !(bound->r < 1.0) || !(bound->C >= 0.0)))
    throw InvalidArgument("geometric bound needs C >= 0 and 0 <= r < 1");

  Tracker tracker(policy);
  double partial = 0.0;
  for (std::size_t k = 1; k <= policy.max_terms; ++k) {
    const double t = term(k);
    if (!std::isfinite(t)) {
      auto& report = tracker.report();
      report.terms_used = k;
      report.last_index = k;
      report.status = Status::diverged;
      report.offending_index = k;
      return report;
    }
    partial += t;

    if (bound) {
      // Analytic stop only; the window rule is not consulted.
      auto& report = tracker.report();
      const double previous = report.estimate;
      report.terms_used = k;
      report.last_index = k;
      report.estimate = partial;
      if (!std::isfinite(partial)) {
        report.status = Status::diverged;
        report.offending_index = k;
        return report;
      }
      const double tail = bound->tail_after(k);
      report.last_delta = k > 1 ? std::abs(partial - previous) : std::abs(t);
      if (tail <= policy.tol * std::max(1.0, std::abs(partial))) {
        report.last_delta = tail;
        report.status = Status::converged;
        report.certified = true;
        return report;
      }
      continue;
    }

    if (tracker.push(partial, k)) return tracker.report();
  }
  if (bound) {
    auto report = tracker.report();
    report.status = Status::undetermined;
    return report;
  }
  return tracker.finish_at_cap();
}

ConvergenceReport limit_of_sequence(
    const std::function<double(std::size_t)>& value_at,
    std::span<const std::size_t> sizes, const ConvergencePolicy& policy) {
  policy.validate();
  Tracker tracker(policy);
  std::size_t evaluated = 0;
  for (std::size_t size : sizes) {
    if (evaluated++ >= policy.max_terms) break;
    if (tracker.push(value_at(size), size)) return tracker.report();
  }
  return tracker.finish_at_cap();
}

ConvergenceReport limit_of_sequence(
    const std::function<double(std::size_t)>& value_at,
    const TruncationSchedule& schedule, const ConvergencePolicy& policy) {
  const auto sizes = schedule.sizes();
  return limit_of_sequence(value_at, std::span<const std::size_t>(sizes),
                           policy);
}

}  // namespace infmat
