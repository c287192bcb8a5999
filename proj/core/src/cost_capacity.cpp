#include "epscap/cost_capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "epscap/errors.hpp"
#include "epscap/parallel.hpp"
#include "maxmin_solver.hpp"

namespace epscap {

namespace {

detail::CostHalfspace halfspace_for(const MixedChannel& ch, double gamma) {
    return detail::CostHalfspace{ch.cost(), gamma};
}

CapacityResult solve_constrained(const MixedChannel& ch, double eps, double gamma,
                                 const SolverOptions& opts) {
    const auto subsets = feasible_minimal_subsets(ch, eps, opts.max_components);

    struct Solve {
        detail::MaxMinSolution sol;
        long ba_iterations = 0;
    };
    std::vector<Solve> solves(subsets.size());
    SolverOptions inner = opts;
    inner.threads = 1;
    parallel_for_index(subsets.size(), opts.threads, [&](std::size_t i) {
        detail::MaxMinProblem prob;
        prob.channel = &ch;
        for (std::size_t l : subsets[i]) prob.terms.push_back(detail::ObjectiveTerm{l, 0.0, 1.0});
        prob.constraint = halfspace_for(ch, gamma);
        solves[i].sol = detail::solve_max_min(prob, inner);
    });

    std::size_t best = 0;
    double max_upper = -std::numeric_limits<double>::infinity();
    long iterations = 0;
    bool converged = true;
    for (std::size_t i = 0; i < solves.size(); ++i) {
        if (solves[i].sol.value > solves[best].sol.value) best = i;
        max_upper = std::max(max_upper, solves[i].sol.upper_bound);
        iterations += solves[i].sol.iterations;
        converged = converged && solves[i].sol.converged;
    }

    CapacityResult result;
    result.bits = solves[best].sol.value;
    result.input_law = Distribution(solves[best].sol.p);
    result.subset = subsets[best];
    result.feasible_weight = ch.subset_weight(subsets[best]);
    result.method = CapacityMethod::subset_solver;
    result.diagnostics.certified_tol = std::max(0.0, max_upper - result.bits);
    result.diagnostics.iterations = iterations;
    result.diagnostics.subsets_evaluated = subsets.size();
    result.diagnostics.converged = converged;
    return result;
}

}  // namespace

CapacityResult cost_constrained_capacity(const MixedChannel& ch, double eps, double gamma,
                                         const SolverOptions& opts) {
    if (!ch.has_cost()) {
        throw std::invalid_argument("cost_constrained_capacity: channel has no cost vector");
    }
    if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in [0, 1)");
    if (gamma < ch.min_cost()) {
        throw std::invalid_argument("cost_constrained_capacity: gamma below the minimum symbol "
                                    "cost leaves no feasible input law");
    }
    return solve_constrained(ch, eps, gamma, opts);
}

CostCurve capacity_cost_curve(const MixedChannel& ch, double eps,
                              const std::vector<double>& gamma_grid, const SolverOptions& opts,
                              double plateau_tol) {
    if (!ch.has_cost()) {
        throw std::invalid_argument("capacity_cost_curve: channel has no cost vector");
    }
    if (gamma_grid.empty()) throw std::invalid_argument("capacity_cost_curve: empty gamma grid");
    if (!std::is_sorted(gamma_grid.begin(), gamma_grid.end())) {
        throw std::invalid_argument("capacity_cost_curve: gamma grid must be sorted ascending");
    }
    if (gamma_grid.front() < ch.min_cost()) {
        throw std::invalid_argument("capacity_cost_curve: grid starts below the minimum cost");
    }

    CostCurve curve;
    curve.gamma_grid = gamma_grid;
    curve.values_bits.resize(gamma_grid.size());
    curve.optimizer_costs.resize(gamma_grid.size());

    SolverOptions inner = opts;
    inner.threads = 1;
    parallel_for_index(gamma_grid.size(), opts.threads, [&](std::size_t i) {
        const CapacityResult r = cost_constrained_capacity(ch, eps, gamma_grid[i], inner);
        curve.values_bits[i] = r.bits;
        curve.optimizer_costs[i] = r.input_law.expectation(ch.cost());
    });

    curve.unconstrained_bits = epsilon_capacity(ch, eps, opts).bits;

    // Smallest gamma whose constrained value reaches the unconstrained one:
    // the curve is nondecreasing in gamma, so bisection applies. At
    // gamma >= max cost the constraint is vacuous.
    const double lo0 = ch.min_cost();
    const double hi0 = ch.max_cost();
    auto reaches = [&](double g) {
        return cost_constrained_capacity(ch, eps, g, inner).bits >=
               curve.unconstrained_bits - plateau_tol;
    };
    if (hi0 <= lo0 || reaches(lo0)) {
        curve.gamma_star = lo0;
    } else {
        double lo = lo0, hi = hi0;
        for (int it = 0; it < 50 && hi - lo > 1e-9 * std::max(1.0, std::abs(hi0)); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (reaches(mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        curve.gamma_star = hi;
    }
    return curve;
}

CostCurveReport verify_cost_properties(const CostCurve& curve, double tol) {
    if (curve.gamma_grid.size() < 3) {
        throw std::invalid_argument("verify_cost_properties: need at least 3 grid points");
    }
    CostCurveReport report;
    const auto& g = curve.gamma_grid;
    const auto& v = curve.values_bits;

    for (std::size_t i = 0; i + 2 < g.size(); ++i) {
        // chord interpolation of v at the middle abscissa
        const double t = (g[i + 1] - g[i]) / (g[i + 2] - g[i]);
        const double chord = v[i] + t * (v[i + 2] - v[i]);
        if (v[i + 1] < chord - tol) {
            report.concave = false;
            report.violations.push_back("concavity violated on triple at gamma=" +
                                        std::to_string(g[i + 1]) + " (value " +
                                        std::to_string(v[i + 1]) + " < chord " +
                                        std::to_string(chord) + ")");
        }
    }
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        if (v[i + 1] < v[i] - tol) {
            report.violations.push_back("monotonicity violated between gamma=" +
                                        std::to_string(g[i]) + " and " + std::to_string(g[i + 1]));
        }
        const bool both_below = g[i + 1] < curve.gamma_star - tol;
        if (both_below && !(v[i + 1] - v[i] > tol)) {
            report.strictly_increasing = false;
            report.violations.push_back("no strict increase between gamma=" + std::to_string(g[i]) +
                                        " and " + std::to_string(g[i + 1]) +
                                        " below gamma_star");
        }
    }
    if (!curve.optimizer_costs.empty()) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i] < curve.gamma_star - tol &&
                std::abs(curve.optimizer_costs[i] - g[i]) > tol) {
                report.boundary_attained = false;
                report.violations.push_back("optimizer cost " +
                                            std::to_string(curve.optimizer_costs[i]) +
                                            " off the boundary at gamma=" + std::to_string(g[i]));
            }
        }
    }
    return report;
}

}  // namespace epscap
