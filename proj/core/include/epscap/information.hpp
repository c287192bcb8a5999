#pragma once

#include <cstddef>
#include <vector>

#include "epscap/channel.hpp"
#include "epscap/distribution.hpp"

namespace epscap {

/// Mutual information I(P; W) in bits. Terms with P(x) W(y|x) = 0
/// contribute zero; the result lies in [0, log2 min(|X|, |Y|)].
double mutual_information(const Distribution& input, const Dmc& channel);

/// Per-row divergence D(W(.|x) || q) in bits for every input symbol.
/// These are the capacity KKT quantities: max_x of this vector upper-bounds
/// the capacity for any output law q, and it equals the gradient of
/// I(P; W) with respect to P up to an additive constant.
std::vector<double> row_divergences_bits(const Dmc& channel, const Distribution& output_law);

/// Exact finite law of the single-letter information density
/// log2 W(y|x) / (PW)(y) under the joint law P(x) W(y|x).
/// Pairs with zero joint mass are never materialized.
class InformationDensityTable {
  public:
    struct Entry {
        double value_bits;  // log2( W(y|x) / (PW)(y) )
        double joint_prob;  // P(x) W(y|x)
        std::size_t x;
        std::size_t y;
    };

    InformationDensityTable(const Distribution& input, const Dmc& channel);

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    double mean_bits() const noexcept { return mean_; }
    double variance_bits2() const noexcept { return variance_; }
    double max_abs_value_bits() const noexcept { return max_abs_; }

  private:
    std::vector<Entry> entries_;
    double mean_ = 0.0;
    double variance_ = 0.0;
    double max_abs_ = 0.0;
};

struct ComponentCapacityOptions {
    double tol = 1e-10;       // certified bracket width, bits
    long max_iterations = 100000;
};

struct ComponentCapacity {
    double bits = 0.0;            // best lower bound I(P; W) found
    double upper_bound_bits = 0.0;  // max_x D(W(.|x) || PW), certifies bits <= C <= upper
    Distribution input = Distribution::uniform(1);
    bool converged = false;
    long iterations = 0;
};

/// Channel capacity of a single DMC by Blahut-Arimoto alternating
/// maximization. Stops when the bracket max_x D(W(.|x)||PW) - I(P;W)
/// drops below tol; reports the best iterate with converged=false when the
/// iteration cap is hit first.
ComponentCapacity component_capacity(const Dmc& channel, const ComponentCapacityOptions& opts = {});

}  // namespace epscap
