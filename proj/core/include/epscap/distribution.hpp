#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace epscap {

/// Probability mass function on a finite alphabet {0, ..., size()-1}.
///
/// Construction validates: every entry >= 0, entries sum to 1 within 1e-12
/// (small deviations are renormalized, larger ones rejected). Immutable
/// after construction; safe to share across threads.
class Distribution {
  public:
    explicit Distribution(std::vector<double> probs);

    static Distribution uniform(std::size_t size);
    static Distribution point_mass(std::size_t size, std::size_t index);

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const noexcept { return probs_[i]; }
    const std::vector<double>& probs() const noexcept { return probs_; }
    std::span<const double> span() const noexcept { return probs_; }

    /// Expectation of a per-symbol value vector (e.g. a cost function).
    double expectation(std::span<const double> values) const;

    /// L1 (variational) distance to another law on the same alphabet.
    double l1_distance(const Distribution& other) const;

    bool operator==(const Distribution&) const = default;

    static constexpr double kSumTolerance = 1e-12;

  private:
    std::vector<double> probs_;
};

}  // namespace epscap
