#include "epscap/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace epscap {

Dmc::Dmc(std::size_t input_size, std::size_t output_size, std::vector<double> row_major)
    : input_size_(input_size), output_size_(output_size), w_(std::move(row_major)) {
    if (input_size_ == 0 || output_size_ == 0) {
        throw std::invalid_argument("Dmc: empty alphabet");
    }
    if (w_.size() != input_size_ * output_size_) {
        throw std::invalid_argument("Dmc: matrix size does not match alphabets");
    }
    for (std::size_t x = 0; x < input_size_; ++x) {
        double row_sum = 0.0;
        for (std::size_t y = 0; y < output_size_; ++y) {
            const double v = w_[x * output_size_ + y];
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw std::invalid_argument("Dmc: W(" + std::to_string(y) + "|" +
                                            std::to_string(x) + ") is negative or non-finite");
            }
            row_sum += v;
        }
        if (std::abs(row_sum - 1.0) > kRowSumTolerance) {
            throw std::invalid_argument("Dmc: row " + std::to_string(x) + " sums to " +
                                        std::to_string(row_sum) + ", not 1 within 1e-12");
        }
        if (row_sum != 1.0) {
            for (std::size_t y = 0; y < output_size_; ++y) w_[x * output_size_ + y] /= row_sum;
        }
    }
}

Distribution Dmc::output_law(const Distribution& input) const {
    if (input.size() != input_size_) {
        throw std::invalid_argument("Dmc::output_law: input law dimension mismatch");
    }
    std::vector<double> q(output_size_, 0.0);
    for (std::size_t x = 0; x < input_size_; ++x) {
        const double px = input[x];
        if (px == 0.0) continue;
        for (std::size_t y = 0; y < output_size_; ++y) q[y] += px * (*this)(x, y);
    }
    return Distribution(std::move(q));
}

Dmc Dmc::bsc(double crossover) {
    if (!(crossover >= 0.0 && crossover <= 1.0)) {
        throw std::invalid_argument("Dmc::bsc: crossover must lie in [0, 1]");
    }
    return Dmc(2, 2, {1.0 - crossover, crossover, crossover, 1.0 - crossover});
}

Dmc Dmc::identity(std::size_t k) {
    std::vector<double> w(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) w[i * k + i] = 1.0;
    return Dmc(k, k, std::move(w));
}

MixedChannel::MixedChannel(std::vector<Component> components,
                           std::optional<std::vector<double>> cost)
    : components_(std::move(components)), cost_(std::move(cost)) {
    if (components_.empty()) {
        throw std::invalid_argument("MixedChannel: at least one component required");
    }
    const std::size_t in = components_.front().channel.input_size();
    const std::size_t out = components_.front().channel.output_size();
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i) {
        const Component& c = components_[i];
        if (c.channel.input_size() != in || c.channel.output_size() != out) {
            throw std::invalid_argument("MixedChannel: component " + std::to_string(i) +
                                        " has mismatched alphabets");
        }
        if (!(c.weight > 0.0) || !std::isfinite(c.weight)) {
            throw std::invalid_argument("MixedChannel: component " + std::to_string(i) +
                                        " weight must be strictly positive");
        }
        weight_sum += c.weight;
    }
    if (std::abs(weight_sum - 1.0) > kWeightSumTolerance) {
        throw std::invalid_argument("MixedChannel: weights sum to " + std::to_string(weight_sum) +
                                    ", not 1 within 1e-12 (truncated mixtures must be "
                                    "renormalized by the caller)");
    }
    if (weight_sum != 1.0) {
        for (Component& c : components_) c.weight /= weight_sum;
    }
    if (cost_ && cost_->size() != in) {
        throw std::invalid_argument("MixedChannel: cost vector length must equal |X|");
    }
}

const std::vector<double>& MixedChannel::cost() const {
    if (!cost_) throw std::logic_error("MixedChannel::cost: no cost vector present");
    return *cost_;
}

double MixedChannel::min_cost() const {
    const auto& c = cost();
    double m = c.front();
    for (double v : c) m = std::min(m, v);
    return m;
}

double MixedChannel::max_cost() const {
    const auto& c = cost();
    double m = c.front();
    for (double v : c) m = std::max(m, v);
    return m;
}

double MixedChannel::subset_weight(const std::vector<std::size_t>& subset) const {
    double w = 0.0;
    for (std::size_t i : subset) {
        if (i >= components_.size()) {
            throw std::out_of_range("MixedChannel::subset_weight: component index out of range");
        }
        w += components_[i].weight;
    }
    return w;
}

}  // namespace epscap
