#pragma once

#include <cstddef>
#include <vector>

namespace epscap {

/// Right-continuous nondecreasing step function on [0, 1): the value at a
/// breakpoint belongs to the interval starting there (half-open
/// [eps_i, eps_{i+1}) semantics). Used for the epsilon-capacity curve.
class StepFunction {
  public:
    StepFunction(std::vector<double> breakpoints, std::vector<double> values);

    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t plateau_count() const noexcept { return values_.size(); }

    /// Value at eps in [0, 1): the plateau whose half-open interval contains eps.
    double value_at(double eps) const;

    /// Right edge of plateau i (1.0 for the last plateau).
    double interval_end(std::size_t i) const;

  private:
    std::vector<double> breakpoints_;  // sorted ascending, first is 0
    std::vector<double> values_;       // nondecreasing, one per breakpoint
};

}  // namespace epscap
