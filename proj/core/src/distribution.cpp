#include "epscap/distribution.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace epscap {

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
        throw std::invalid_argument("Distribution: empty probability vector");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        const double v = probs_[i];
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("Distribution: entry " + std::to_string(i) +
                                        " is negative or non-finite (" + std::to_string(v) + ")");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw std::invalid_argument("Distribution: entries sum to " + std::to_string(sum) +
                                    ", not 1 within 1e-12");
    }
    if (sum != 1.0) {
        for (double& v : probs_) v /= sum;
    }
}

Distribution Distribution::uniform(std::size_t size) {
    return Distribution(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

Distribution Distribution::point_mass(std::size_t size, std::size_t index) {
    if (index >= size) throw std::invalid_argument("Distribution::point_mass: index out of range");
    std::vector<double> p(size, 0.0);
    p[index] = 1.0;
    return Distribution(std::move(p));
}

double Distribution::expectation(std::span<const double> values) const {
    if (values.size() != probs_.size()) {
        throw std::invalid_argument("Distribution::expectation: dimension mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) acc += probs_[i] * values[i];
    return acc;
}

double Distribution::l1_distance(const Distribution& other) const {
    if (other.size() != size()) {
        throw std::invalid_argument("Distribution::l1_distance: dimension mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) acc += std::abs(probs_[i] - other.probs_[i]);
    return acc;
}

}  // namespace epscap
