#pragma once

#include <string>
#include <vector>

#include "epscap/channel.hpp"
#include "epscap/epsilon_capacity.hpp"

namespace epscap {

/// (eps, Gamma)-capacity: the subset-form solve with every inner compound
/// max-min restricted to the closed convex set {P : E_P c(X) <= gamma}
/// (simplex intersected with one half-space; Dykstra projection).
/// Requires ch.has_cost() and gamma >= min_x c(x).
CapacityResult cost_constrained_capacity(const MixedChannel& ch, double eps, double gamma,
                                         const SolverOptions& opts = {});

struct CostCurve {
    std::vector<double> gamma_grid;
    std::vector<double> values_bits;       // nondecreasing along the grid
    std::vector<double> optimizer_costs;   // E_P c at each grid point
    double gamma_star = 0.0;               // smallest gamma reaching the unconstrained value
    double unconstrained_bits = 0.0;       // C(eps | W)
};

/// Pointwise cost-constrained capacity over a sorted gamma grid plus the
/// saturation cost gamma_star, located by bisection on the smallest gamma
/// whose value is within plateau_tol of the unconstrained epsilon-capacity.
CostCurve capacity_cost_curve(const MixedChannel& ch, double eps,
                              const std::vector<double>& gamma_grid,
                              const SolverOptions& opts = {}, double plateau_tol = 1e-6);

struct CostCurveReport {
    bool concave = true;            // midpoint concavity on consecutive triples
    bool strictly_increasing = true;  // below gamma_star
    bool boundary_attained = true;  // E_P c = gamma (within tol) below gamma_star
    std::vector<std::string> violations;
};

/// Numerical verification of the structural capacity-cost properties:
/// concavity, strict increase below the saturation cost, and boundary
/// attainment of the constrained optimizer. Needs >= 3 grid points.
CostCurveReport verify_cost_properties(const CostCurve& curve, double tol = 1e-6);

}  // namespace epscap
