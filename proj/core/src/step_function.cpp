#include "epscap/step_function.hpp"

#include <algorithm>
#include <stdexcept>

namespace epscap {

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (breakpoints_.empty() || breakpoints_.size() != values_.size()) {
        throw std::invalid_argument("StepFunction: breakpoints/values size mismatch");
    }
    if (breakpoints_.front() != 0.0) {
        throw std::invalid_argument("StepFunction: first breakpoint must be 0");
    }
    for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
        if (!(breakpoints_[i] > breakpoints_[i - 1]) || !(breakpoints_[i] < 1.0)) {
            throw std::invalid_argument("StepFunction: breakpoints must be increasing in [0, 1)");
        }
        if (values_[i] < values_[i - 1]) {
            throw std::invalid_argument("StepFunction: plateau values must be nondecreasing");
        }
    }
}

double StepFunction::value_at(double eps) const {
    if (!(eps >= 0.0 && eps < 1.0)) {
        throw std::invalid_argument("StepFunction::value_at: eps must lie in [0, 1)");
    }
    // Last breakpoint <= eps: value at a breakpoint belongs to the interval
    // starting there (right continuity).
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), eps);
    const std::size_t idx = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    return values_[idx];
}

double StepFunction::interval_end(std::size_t i) const {
    if (i >= breakpoints_.size()) throw std::out_of_range("StepFunction::interval_end");
    return i + 1 < breakpoints_.size() ? breakpoints_[i + 1] : 1.0;
}

}  // namespace epscap
