#pragma once

// Internal concave max-min engine shared by the compound, cost-constrained
// and well-ordered searches. Not installed.

#include <cstddef>
#include <optional>
#include <vector>

#include "epscap/channel.hpp"
#include "epscap/epsilon_capacity.hpp"

namespace epscap::detail {

// One concave objective term: offset + scale * I(P; W_channel), scale > 0.
struct ObjectiveTerm {
    std::size_t channel = 0;
    double offset = 0.0;
    double scale = 1.0;
};

// Feasible set is the simplex intersected with {P : <cost, P> <= gamma}.
struct CostHalfspace {
    std::vector<double> cost;
    double gamma = 0.0;
};

struct MaxMinProblem {
    const MixedChannel* channel = nullptr;
    std::vector<ObjectiveTerm> terms;
    std::optional<CostHalfspace> constraint;
    // Additional warm starts (projected onto the feasible set before use).
    std::vector<std::vector<double>> extra_starts;
};

struct MaxMinSolution {
    std::vector<double> p;
    double value = 0.0;        // min over terms at p, bits
    double upper_bound = 0.0;  // dual certificate, bits
    long iterations = 0;
    bool converged = false;
};

MaxMinSolution solve_max_min(const MaxMinProblem& prob, const SolverOptions& opts);

// Euclidean projection onto the probability simplex.
void project_simplex(std::vector<double>& v);

// Projection onto simplex ∩ half-space (Dykstra when the constraint is set).
void project_feasible(std::vector<double>& v, const std::optional<CostHalfspace>& hs);

// min c'x s.t. A x = b, x >= 0 by two-phase dense simplex with Bland's rule.
// Returns the optimal x, or nullopt when infeasible/unbounded/failed.
std::optional<std::vector<double>> solve_lp_standard(const std::vector<std::vector<double>>& A,
                                                     const std::vector<double>& b,
                                                     const std::vector<double>& c);

}  // namespace epscap::detail
