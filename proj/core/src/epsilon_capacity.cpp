#include "epscap/epsilon_capacity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "epscap/errors.hpp"
#include "epscap/information.hpp"
#include "epscap/parallel.hpp"
#include "maxmin_solver.hpp"

namespace epscap {

namespace {

// Subset weights are always accumulated in ascending component order so that
// feasibility tests and curve breakpoints agree bit-for-bit.
double mask_weight(const MixedChannel& ch, std::uint32_t mask) {
    double w = 0.0;
    for (std::size_t i = 0; i < ch.component_count(); ++i) {
        if (mask & (1u << i)) w += ch.weight(i);
    }
    return w;
}

std::vector<double> component_informations(const MixedChannel& ch, const Distribution& input) {
    std::vector<double> info(ch.component_count());
    for (std::size_t l = 0; l < ch.component_count(); ++l) {
        info[l] = mutual_information(input, ch.channel(l));
    }
    return info;
}

void require_eps(double eps) {
    if (!(eps >= 0.0 && eps < 1.0)) {
        throw std::invalid_argument("eps must lie in [0, 1)");
    }
}

void require_enumerable(const MixedChannel& ch, std::size_t cap) {
    if (ch.component_count() > cap || ch.component_count() > 31) {
        throw CapExceeded("mixture has " + std::to_string(ch.component_count()) +
                          " components, above the enumeration cap of " + std::to_string(cap));
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Quantile form
// ---------------------------------------------------------------------------

double mixture_rate_cdf(const MixedChannel& ch, const Distribution& input, double rate_bits) {
    const std::vector<double> info = component_informations(ch, input);
    double acc = 0.0;
    for (std::size_t l = 0; l < info.size(); ++l) {
        if (info[l] <= rate_bits) acc += ch.weight(l);
    }
    return acc;
}

double rate_quantile(const MixedChannel& ch, const Distribution& input, double delta) {
    require_eps(delta);
    std::vector<std::pair<double, double>> jumps;  // (I_l, w_l) ascending
    const std::vector<double> info = component_informations(ch, input);
    jumps.reserve(info.size());
    for (std::size_t l = 0; l < info.size(); ++l) jumps.emplace_back(info[l], ch.weight(l));
    std::sort(jumps.begin(), jumps.end());
    // sup{R : F_w(R) <= delta} is the first jump whose cumulative weight
    // strictly exceeds delta; equal informations accumulate into one jump.
    double cum = 0.0;
    for (std::size_t k = 0; k < jumps.size(); ++k) {
        cum += jumps[k].second;
        if (cum > delta) return jumps[k].first;
    }
    return jumps.back().first;  // unreachable: total weight 1 > delta
}

// ---------------------------------------------------------------------------
// Subset form
// ---------------------------------------------------------------------------

std::vector<std::vector<std::size_t>> feasible_minimal_subsets(const MixedChannel& ch, double eps,
                                                               std::size_t max_components) {
    require_eps(eps);
    require_enumerable(ch, max_components);
    const std::size_t m = ch.component_count();
    const std::uint32_t full = (m == 31) ? 0x7fffffffu : ((1u << m) - 1u);

    // Droppable complements T with w(T) <= eps form a downward-closed family,
    // so T is maximal iff no single component can be added. S = Omega \ T.
    std::vector<std::vector<std::size_t>> result;
    for (std::uint32_t t = 0; t <= full; ++t) {
        const double wt = mask_weight(ch, t);
        if (wt > eps) continue;
        bool maximal = true;
        for (std::size_t i = 0; i < m && maximal; ++i) {
            if (t & (1u << i)) continue;
            if (wt + ch.weight(i) <= eps) maximal = false;
        }
        if (!maximal) continue;
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < m; ++i) {
            if (!(t & (1u << i))) subset.push_back(i);
        }
        result.push_back(std::move(subset));
    }
    return result;
}

CompoundCapacity compound_capacity(const MixedChannel& ch, const std::vector<std::size_t>& subset,
                                   const SolverOptions& opts) {
    if (subset.empty()) throw std::invalid_argument("compound_capacity: empty subset");
    for (std::size_t l : subset) {
        if (l >= ch.component_count()) {
            throw std::invalid_argument("compound_capacity: component index out of range");
        }
    }
    // Duplicate channels add nothing to the min.
    std::vector<std::size_t> distinct;
    for (std::size_t l : subset) {
        bool dup = false;
        for (std::size_t k : distinct) {
            if (ch.channel(l) == ch.channel(k)) {
                dup = true;
                break;
            }
        }
        if (!dup) distinct.push_back(l);
    }

    CompoundCapacity out;
    if (distinct.size() == 1) {
        ComponentCapacityOptions ba;
        ba.tol = std::min(opts.tol, 1e-9);
        const ComponentCapacity cc = component_capacity(ch.channel(distinct.front()), ba);
        out.bits = cc.bits;
        out.upper_bound_bits = cc.upper_bound_bits;
        out.input = cc.input;
        out.converged = cc.converged;
        out.iterations = cc.iterations;
        return out;
    }

    detail::MaxMinProblem prob;
    prob.channel = &ch;
    for (std::size_t l : distinct) prob.terms.push_back(detail::ObjectiveTerm{l, 0.0, 1.0});
    const detail::MaxMinSolution sol = detail::solve_max_min(prob, opts);
    out.bits = sol.value;
    out.upper_bound_bits = sol.upper_bound;
    out.input = Distribution(sol.p);
    out.converged = sol.converged;
    out.iterations = sol.iterations;
    return out;
}

CapacityResult epsilon_capacity(const MixedChannel& ch, double eps, const SolverOptions& opts) {
    require_eps(eps);
    const auto subsets = feasible_minimal_subsets(ch, eps, opts.max_components);

    std::vector<CompoundCapacity> solves(subsets.size());
    SolverOptions inner = opts;
    inner.threads = 1;
    parallel_for_index(subsets.size(), opts.threads,
                       [&](std::size_t i) { solves[i] = compound_capacity(ch, subsets[i], inner); });

    std::size_t best = 0;
    double max_upper = -std::numeric_limits<double>::infinity();
    long iterations = 0;
    bool converged = true;
    for (std::size_t i = 0; i < solves.size(); ++i) {
        if (solves[i].bits > solves[best].bits) best = i;
        max_upper = std::max(max_upper, solves[i].upper_bound_bits);
        iterations += solves[i].iterations;
        converged = converged && solves[i].converged;
    }
    CapacityResult result;
    result.bits = solves[best].bits;
    result.input_law = solves[best].input;
    result.subset = subsets[best];
    result.feasible_weight = ch.subset_weight(subsets[best]);
    result.method = CapacityMethod::subset_solver;
    result.diagnostics.certified_tol = std::max(0.0, max_upper - result.bits);
    result.diagnostics.iterations = iterations;
    result.diagnostics.subsets_evaluated = subsets.size();
    result.diagnostics.converged = converged;
    if (opts.grid_verify && ch.input_size() <= 3) {
        const double oracle =
            epsilon_capacity_quantile_grid(ch, eps, opts.grid_verify_resolution, 3, opts.threads);
        result.diagnostics.grid_verify_delta = std::abs(result.bits - oracle);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Quantile grid evaluation
// ---------------------------------------------------------------------------

namespace {

void enumerate_compositions(std::size_t dims, long total,
                            const std::function<void(const std::vector<long>&)>& emit) {
    std::vector<long> counts(dims, 0);
    std::function<void(std::size_t, long)> rec = [&](std::size_t d, long rest) {
        if (d + 1 == dims) {
            counts[d] = rest;
            emit(counts);
            return;
        }
        for (long k = 0; k <= rest; ++k) {
            counts[d] = k;
            rec(d + 1, rest - k);
        }
    };
    rec(0, total);
}

}  // namespace

double epsilon_capacity_quantile_grid(const MixedChannel& ch, double eps, double grid_resolution,
                                      int refine_rounds, int threads) {
    require_eps(eps);
    if (ch.input_size() > 4) {
        throw CapExceeded("quantile grid evaluation supports |X| <= 4");
    }
    if (!(grid_resolution > 0.0 && grid_resolution <= 0.5)) {
        throw std::invalid_argument("grid_resolution must lie in (0, 0.5]");
    }
    const std::size_t nx = ch.input_size();
    const long steps = std::max<long>(1, std::lround(1.0 / grid_resolution));

    std::vector<std::vector<double>> lattice;
    enumerate_compositions(nx, steps, [&](const std::vector<long>& counts) {
        std::vector<double> p(nx);
        for (std::size_t i = 0; i < nx; ++i) {
            p[i] = static_cast<double>(counts[i]) / static_cast<double>(steps);
        }
        lattice.push_back(std::move(p));
    });

    std::vector<double> values(lattice.size());
    parallel_for_index(lattice.size(), threads, [&](std::size_t i) {
        values[i] = rate_quantile(ch, Distribution(lattice[i]), eps);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    double best_value = values[best];
    std::vector<double> center = lattice[best];

    // Deterministic local zoom: the quantile objective is continuous in the
    // input law, so refining around the lattice argmax converges to the
    // local (here: global, the coarse pass saw every basin) maximum.
    double spacing = 1.0 / static_cast<double>(steps);
    for (int round = 0; round < refine_rounds; ++round) {
        const double fine = spacing / 10.0;
        const long radius = 12;
        std::vector<std::vector<double>> cand;
        std::vector<long> offs(nx - 1, -radius);
        for (;;) {
            std::vector<double> p(nx, 0.0);
            double sum = 0.0;
            bool ok = true;
            for (std::size_t i = 0; i + 1 < nx; ++i) {
                p[i] = center[i] + static_cast<double>(offs[i]) * fine;
                if (p[i] < -1e-15 || p[i] > 1.0 + 1e-15) {
                    ok = false;
                    break;
                }
                p[i] = std::clamp(p[i], 0.0, 1.0);
                sum += p[i];
            }
            if (ok && sum <= 1.0 + 1e-15) {
                p[nx - 1] = std::max(0.0, 1.0 - sum);
                cand.push_back(std::move(p));
            }
            std::size_t d = 0;
            while (d + 1 < nx && offs[d] == radius) {
                offs[d] = -radius;
                ++d;
            }
            if (d + 1 >= nx) break;
            ++offs[d];
        }
        std::vector<double> cand_values(cand.size());
        parallel_for_index(cand.size(), threads, [&](std::size_t i) {
            double s = std::accumulate(cand[i].begin(), cand[i].end(), 0.0);
            std::vector<double> p = cand[i];
            for (double& v : p) v /= s;
            cand_values[i] = rate_quantile(ch, Distribution(p), eps);
        });
        for (std::size_t i = 0; i < cand.size(); ++i) {
            if (cand_values[i] > best_value) {
                best_value = cand_values[i];
                center = cand[i];
            }
        }
        spacing = fine;
    }
    return best_value;
}

// ---------------------------------------------------------------------------
// Well-ordered mixtures
// ---------------------------------------------------------------------------

namespace {

struct ComponentOrder {
    std::vector<std::size_t> order;       // indices sorted by (capacity, index)
    std::vector<ComponentCapacity> caps;  // per original index
};

ComponentOrder ordered_capacities(const MixedChannel& ch) {
    ComponentOrder out;
    out.caps.resize(ch.component_count());
    for (std::size_t l = 0; l < ch.component_count(); ++l) {
        ComponentCapacityOptions ba;
        ba.tol = 1e-10;
        out.caps[l] = component_capacity(ch.channel(l), ba);
    }
    out.order.resize(ch.component_count());
    std::iota(out.order.begin(), out.order.end(), std::size_t{0});
    std::stable_sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
        return out.caps[a].bits < out.caps[b].bits;
    });
    return out;
}

constexpr double kCapacityTieTol = 1e-9;

}  // namespace

WellOrderedCertificate is_well_ordered(const MixedChannel& ch, double tol,
                                       const SolverOptions& opts) {
    const ComponentOrder oc = ordered_capacities(ch);
    WellOrderedCertificate cert;
    cert.well_ordered = true;
    cert.conclusive = true;

    for (std::size_t l : oc.order) {
        const double cl = oc.caps[l].bits;
        std::vector<std::size_t> higher;  // j with C_j >= C_l (ties included), j != l
        for (std::size_t j = 0; j < ch.component_count(); ++j) {
            if (j != l && oc.caps[j].bits >= cl - kCapacityTieTol) higher.push_back(j);
        }

        WellOrderedCertificate::ComponentWitness w;
        w.component = l;
        w.capacity_bits = cl;

        auto margins_at = [&](const Distribution& p) {
            double min_margin = std::numeric_limits<double>::infinity();
            for (std::size_t j : higher) {
                min_margin = std::min(min_margin, mutual_information(p, ch.channel(j)) - cl);
            }
            return min_margin;
        };

        // Fast path: the Blahut-Arimoto optimizer itself.
        const Distribution& ba_opt = oc.caps[l].input;
        const double ba_deficit = cl - mutual_information(ba_opt, ch.channel(l));
        const double ba_margin = higher.empty() ? 0.0 : margins_at(ba_opt);
        if (ba_deficit <= tol && ba_margin >= -tol) {
            w.witness = ba_opt;
            w.membership_deficit = std::max(0.0, ba_deficit);
            w.min_margin = ba_margin;
            w.status = WellOrderedCertificate::ComponentWitness::Status::holds;
            cert.witnesses.push_back(std::move(w));
            continue;
        }

        // Search over near-optimal inputs: maximize
        //   min( min_j I_j(P), C_l + beta (I_l(P) - C_l) )
        // which reaches C_l iff some capacity achiever also satisfies (11).
        constexpr double beta = 100.0;
        detail::MaxMinProblem prob;
        prob.channel = &ch;
        for (std::size_t j : higher) prob.terms.push_back(detail::ObjectiveTerm{j, 0.0, 1.0});
        prob.terms.push_back(detail::ObjectiveTerm{l, (1.0 - beta) * cl, beta});
        prob.extra_starts.push_back(ba_opt.probs());
        if (ch.input_size() <= 3) {
            // Coarse simplex scan feeds extra warm starts near Pi_l.
            const long steps = 24;
            std::vector<std::pair<double, std::vector<double>>> scored;
            enumerate_compositions(ch.input_size(), steps, [&](const std::vector<long>& counts) {
                std::vector<double> p(ch.input_size());
                for (std::size_t i = 0; i < p.size(); ++i) {
                    p[i] = static_cast<double>(counts[i]) / static_cast<double>(steps);
                }
                const Distribution pd(p);
                const double pen = std::min(
                    higher.empty() ? std::numeric_limits<double>::infinity() : margins_at(pd) + cl,
                    cl + beta * (mutual_information(pd, ch.channel(l)) - cl));
                scored.emplace_back(pen, p);
            });
            std::sort(scored.begin(), scored.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
            for (std::size_t k = 0; k < std::min<std::size_t>(3, scored.size()); ++k) {
                prob.extra_starts.push_back(scored[k].second);
            }
        }
        SolverOptions sopts = opts;
        sopts.tol = std::min(opts.tol, tol);
        const detail::MaxMinSolution sol = detail::solve_max_min(prob, sopts);

        const Distribution pw(sol.p);
        const double deficit = cl - mutual_information(pw, ch.channel(l));
        const double margin = higher.empty() ? 0.0 : margins_at(pw);
        w.witness = pw;
        w.membership_deficit = std::max(0.0, deficit);
        w.min_margin = margin;
        if (deficit <= tol && margin >= -tol) {
            w.status = WellOrderedCertificate::ComponentWitness::Status::holds;
        } else if (sol.upper_bound < cl - tol) {
            w.status = WellOrderedCertificate::ComponentWitness::Status::fails;
            cert.well_ordered = false;
        } else {
            w.status = WellOrderedCertificate::ComponentWitness::Status::unknown;
            cert.well_ordered = false;
            cert.conclusive = false;
        }
        cert.witnesses.push_back(std::move(w));
    }
    return cert;
}

double well_ordered_capacity(const MixedChannel& ch, double eps, const SolverOptions& opts) {
    (void)opts;
    require_eps(eps);
    const ComponentOrder oc = ordered_capacities(ch);
    // Walk capacity groups (ties merged) with cumulative weight:
    // pick the first group whose cumulative jump passes eps.
    double cum_before = 0.0;
    std::size_t i = 0;
    while (i < oc.order.size()) {
        const double c = oc.caps[oc.order[i]].bits;
        double group_weight = 0.0;
        double group_cap = c;
        std::size_t j = i;
        while (j < oc.order.size() && oc.caps[oc.order[j]].bits <= c + kCapacityTieTol) {
            group_weight += ch.weight(oc.order[j]);
            group_cap = std::max(group_cap, oc.caps[oc.order[j]].bits);
            ++j;
        }
        if (eps < cum_before + group_weight) return group_cap;
        cum_before += group_weight;
        i = j;
    }
    return oc.caps[oc.order.back()].bits;  // unreachable for eps < 1
}

// ---------------------------------------------------------------------------
// Curve
// ---------------------------------------------------------------------------

StepFunction epsilon_capacity_curve(const MixedChannel& ch, const SolverOptions& opts,
                                    double merge_tol) {
    require_enumerable(ch, opts.max_components);
    const std::size_t m = ch.component_count();
    const std::uint32_t full = (m == 31) ? 0x7fffffffu : ((1u << m) - 1u);

    std::vector<double> breakpoints;
    for (std::uint32_t mask = 0; mask <= full; ++mask) {
        const double b = mask_weight(ch, mask);  // = 1 - w(complement)
        if (b >= 0.0 && b < 1.0) breakpoints.push_back(b);
    }
    std::sort(breakpoints.begin(), breakpoints.end());
    std::vector<double> distinct;
    for (double b : breakpoints) {
        if (distinct.empty() || b - distinct.back() > 1e-12) distinct.push_back(b);
    }
    if (distinct.empty() || distinct.front() != 0.0) {
        distinct.insert(distinct.begin(), 0.0);
    }
    if (distinct.size() > 10000) {
        throw CapExceeded("epsilon-capacity curve would need " + std::to_string(distinct.size()) +
                          " plateaus; reduce the mixture size");
    }

    std::vector<double> values(distinct.size());
    SolverOptions inner = opts;
    inner.threads = 1;
    parallel_for_index(distinct.size(), opts.threads, [&](std::size_t i) {
        values[i] = epsilon_capacity(ch, distinct[i], inner).bits;
    });
    // The exact curve is nondecreasing; clamp solver noise, then merge
    // plateaus whose values agree.
    for (std::size_t i = 1; i < values.size(); ++i) values[i] = std::max(values[i], values[i - 1]);
    std::vector<double> keep_b{distinct.front()};
    std::vector<double> keep_v{values.front()};
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] - keep_v.back() > merge_tol) {
            keep_b.push_back(distinct[i]);
            keep_v.push_back(values[i]);
        }
    }
    return StepFunction(std::move(keep_b), std::move(keep_v));
}

}  // namespace epscap
