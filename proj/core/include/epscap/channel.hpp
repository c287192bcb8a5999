#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "epscap/distribution.hpp"

namespace epscap {

/// Discrete memoryless channel: a row-stochastic |X| x |Y| matrix W(y|x).
/// Rows must be nonnegative and sum to 1 within 1e-12.
class Dmc {
  public:
    Dmc(std::size_t input_size, std::size_t output_size, std::vector<double> row_major);

    std::size_t input_size() const noexcept { return input_size_; }
    std::size_t output_size() const noexcept { return output_size_; }

    /// W(y|x)
    double operator()(std::size_t x, std::size_t y) const noexcept {
        return w_[x * output_size_ + y];
    }
    const std::vector<double>& row_major() const noexcept { return w_; }

    /// Output law (P W)(y) induced by an input law.
    Distribution output_law(const Distribution& input) const;

    /// Binary symmetric channel with the given crossover probability.
    static Dmc bsc(double crossover);
    /// Noiseless k-ary identity channel.
    static Dmc identity(std::size_t k);

    bool operator==(const Dmc&) const = default;

    static constexpr double kRowSumTolerance = 1e-12;

  private:
    std::size_t input_size_;
    std::size_t output_size_;
    std::vector<double> w_;  // row-major
};

/// Finite mixture of DMCs sharing one input and one output alphabet.
/// Weights are strictly positive and sum to 1 within 1e-12; an optional
/// per-symbol cost vector c(x) enables the cost-constrained problems.
///
/// Only finite mixtures are representable. Callers modelling a countable
/// mixture must truncate it themselves (the dropped tail weight can be
/// folded into the epsilon budget conservatively); construction rejects
/// weight vectors whose sum falls short of 1 beyond tolerance.
class MixedChannel {
  public:
    struct Component {
        double weight;
        Dmc channel;
    };

    explicit MixedChannel(std::vector<Component> components,
                          std::optional<std::vector<double>> cost = std::nullopt);

    std::size_t component_count() const noexcept { return components_.size(); }
    const Component& component(std::size_t i) const noexcept { return components_[i]; }
    const std::vector<Component>& components() const noexcept { return components_; }
    double weight(std::size_t i) const noexcept { return components_[i].weight; }
    const Dmc& channel(std::size_t i) const noexcept { return components_[i].channel; }

    std::size_t input_size() const noexcept { return components_.front().channel.input_size(); }
    std::size_t output_size() const noexcept { return components_.front().channel.output_size(); }

    bool has_cost() const noexcept { return cost_.has_value(); }
    const std::vector<double>& cost() const;
    double min_cost() const;
    double max_cost() const;

    /// Total weight of a component subset.
    double subset_weight(const std::vector<std::size_t>& subset) const;

    static constexpr double kWeightSumTolerance = 1e-12;

  private:
    std::vector<Component> components_;
    std::optional<std::vector<double>> cost_;
};

}  // namespace epscap
