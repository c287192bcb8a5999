#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "epscap/channel.hpp"
#include "epscap/distribution.hpp"
#include "epscap/step_function.hpp"

namespace epscap {

// ---------------------------------------------------------------------------
// Options and result types
// ---------------------------------------------------------------------------

struct SolverOptions {
    double tol = 1e-6;                // target certified tolerance, bits
    std::size_t max_components = 20;  // enumeration cap on the mixture size
    int restarts = 10;                // random restarts of the supergradient phase
    int supergradient_iterations = 2000;
    int polish_iterations = 400;      // per smoothing level
    std::uint64_t seed = 20240913;    // deterministic default for restarts
    bool grid_verify = false;         // cross-check against the quantile grid when |X| <= 3
    double grid_verify_resolution = 0.01;
    int threads = 1;                  // per-subset solves run in parallel when > 1
};

enum class CapacityMethod {
    subset_solver,
    quantile_grid,
    well_ordered_closed_form,
};

struct CapacityResult {
    double bits = 0.0;
    Distribution input_law = Distribution::uniform(1);
    std::vector<std::size_t> subset;  // arg max S with w(S) >= 1 - eps
    double feasible_weight = 0.0;     // w(subset)
    CapacityMethod method = CapacityMethod::subset_solver;

    struct Diagnostics {
        double certified_tol = 0.0;   // true value <= bits + certified_tol
        long iterations = 0;
        std::size_t subsets_evaluated = 0;
        bool converged = true;
        // |subset solve - quantile grid| when grid_verify was enabled, else NaN.
        double grid_verify_delta = std::numeric_limits<double>::quiet_NaN();
    } diagnostics;
};

// ---------------------------------------------------------------------------
// Quantile form
// ---------------------------------------------------------------------------

/// F_w(r | p) = sum_l w_l 1{ I_p(X; Y_l) <= r }: the weighted CDF of the
/// component mutual informations at input law p.
double mixture_rate_cdf(const MixedChannel& ch, const Distribution& input, double rate_bits);

/// A(p, delta) = sup{ R : F_w(R | p) <= delta } for delta in [0, 1).
/// Computed exactly on the sorted component informations: the result is the
/// value of the first indicator jump whose cumulative weight strictly
/// exceeds delta (ties among equal informations merge into one jump).
double rate_quantile(const MixedChannel& ch, const Distribution& input, double delta);

// ---------------------------------------------------------------------------
// Subset form
// ---------------------------------------------------------------------------

/// All subsets S with w(S) >= 1 - eps that are minimal under inclusion.
/// Dropping components from a feasible S can only raise inf_{l in S} I, so
/// the outer sup over feasible subsets is attained on this antichain.
/// Enumerated through maximal droppable complements T with w(T) <= eps.
std::vector<std::vector<std::size_t>> feasible_minimal_subsets(const MixedChannel& ch,
                                                               double eps,
                                                               std::size_t max_components = 20);

struct CompoundCapacity {
    double bits = 0.0;              // min_l I(P; W_l) at the returned law
    double upper_bound_bits = 0.0;  // dual certificate: true value <= upper_bound
    Distribution input = Distribution::uniform(1);
    bool converged = false;
    long iterations = 0;
};

/// Compound channel capacity max_P min_{l in subset} I(P; W_l), a concave
/// max-min over the simplex. Projected supergradient ascent with Polyak
/// averaging and random restarts, followed by a smoothed polish; the dual
/// bound max_x sum_l lambda_l D(W_l(.|x) || P W_l) certifies the gap.
CompoundCapacity compound_capacity(const MixedChannel& ch,
                                   const std::vector<std::size_t>& subset,
                                   const SolverOptions& opts = {});

/// Epsilon-capacity by the subset form: the max of compound_capacity over
/// the feasible minimal subsets. At eps = 0 this is exactly the compound
/// capacity over the whole mixture.
CapacityResult epsilon_capacity(const MixedChannel& ch, double eps, const SolverOptions& opts = {});

/// Brute-force quantile-form evaluation: max of rate_quantile(p, eps) over a
/// simplex lattice with the given spacing, then refine_rounds deterministic
/// local zooms (factor 10 each) around the best lattice point. Requires
/// |X| <= 4. Serves as the independent cross-check for the subset solver.
double epsilon_capacity_quantile_grid(const MixedChannel& ch, double eps, double grid_resolution,
                                      int refine_rounds = 3, int threads = 1);

// ---------------------------------------------------------------------------
// Well-ordered mixtures
// ---------------------------------------------------------------------------

struct WellOrderedCertificate {
    struct ComponentWitness {
        std::size_t component = 0;     // original component index
        double capacity_bits = 0.0;    // C_l
        Distribution witness = Distribution::uniform(1);          // input law checked against condition (11)
        double membership_deficit = 0.0;  // C_l - I_witness(X; Y_l)
        double min_margin = 0.0;       // min over higher-capacity j of I_witness(X;Y_j) - C_l
        enum class Status { holds, fails, unknown } status = Status::holds;
    };

    bool well_ordered = false;
    bool conclusive = true;  // false when any component search ended "unknown"
    std::vector<ComponentWitness> witnesses;
};

/// Checks the well-ordering condition: components sorted by capacity
/// (stable in the original index on ties) and, for each component, some
/// capacity-achieving input law whose mutual information across every
/// higher-capacity component stays at or above that component's capacity
/// (all comparisons within tol). The Blahut-Arimoto optimizer is tried
/// first; a penalized max-min search over near-optimal inputs follows. An
/// inconclusive search reports false with conclusive=false.
WellOrderedCertificate is_well_ordered(const MixedChannel& ch, double tol = 1e-7,
                                       const SolverOptions& opts = {});

/// Closed-form epsilon-capacity for a well-ordered mixture: the component
/// capacity C_{k*} selected by the cumulative-weight rule
/// sum_{C_l < C_{k*}} w_l <= eps < sum_{C_l <= C_{k*}} w_l.
/// Caller contract: is_well_ordered(ch) holds.
double well_ordered_capacity(const MixedChannel& ch, double eps, const SolverOptions& opts = {});

// ---------------------------------------------------------------------------
// Curve
// ---------------------------------------------------------------------------

/// The full epsilon-capacity step function. Breakpoints are the distinct
/// subset weights {1 - w(S)} inside [0, 1); on each half-open interval the
/// feasible family is constant, so one subset solve per interval suffices.
/// Consecutive plateaus whose values agree within merge_tol are merged.
StepFunction epsilon_capacity_curve(const MixedChannel& ch, const SolverOptions& opts = {},
                                    double merge_tol = 1e-9);

}  // namespace epscap
