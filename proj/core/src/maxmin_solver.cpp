#include "maxmin_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "epscap/information.hpp"

namespace epscap::detail {

namespace {

constexpr double kTiny = 1e-13;

struct TermEval {
    std::vector<double> values;           // per-term value, bits
    std::size_t active = 0;               // argmin term
    double min_value = 0.0;
};

// Evaluates all terms at p; output laws are computed once per distinct channel.
TermEval evaluate_terms(const MaxMinProblem& prob, const Distribution& p) {
    TermEval ev;
    ev.values.resize(prob.terms.size());
    std::vector<double> info(prob.channel->component_count(),
                             std::numeric_limits<double>::quiet_NaN());
    for (std::size_t j = 0; j < prob.terms.size(); ++j) {
        const ObjectiveTerm& t = prob.terms[j];
        if (std::isnan(info[t.channel])) {
            info[t.channel] = mutual_information(p, prob.channel->channel(t.channel));
        }
        ev.values[j] = t.offset + t.scale * info[t.channel];
    }
    ev.active = static_cast<std::size_t>(
        std::min_element(ev.values.begin(), ev.values.end()) - ev.values.begin());
    ev.min_value = ev.values[ev.active];
    return ev;
}

std::vector<double> term_gradient(const MaxMinProblem& prob, const Distribution& p,
                                  std::size_t term) {
    const ObjectiveTerm& t = prob.terms[term];
    const Dmc& w = prob.channel->channel(t.channel);
    std::vector<double> g = row_divergences_bits(w, w.output_law(p));
    for (double& v : g) {
        if (!std::isfinite(v)) v = 0.0;  // unreachable rows carry no useful direction
        v *= t.scale;
    }
    return g;
}

Distribution as_distribution(std::vector<double> p) {
    // Iterates can carry -0 or 1 +/- few ulps after projection.
    double s = 0.0;
    for (double& v : p) {
        v = std::max(v, 0.0);
        s += v;
    }
    for (double& v : p) v /= s;
    return Distribution(std::move(p));
}

// ---------------------------------------------------------------------------
// Projections
// ---------------------------------------------------------------------------

}  // namespace

void project_simplex(std::vector<double>& v) {
    // Sort-based Euclidean projection.
    std::vector<double> u(v);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0;
    double theta = 0.0;
    std::size_t rho = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        cum += u[k];
        const double t = (cum - 1.0) / static_cast<double>(k + 1);
        if (u[k] - t > 0.0) {
            rho = k + 1;
            theta = t;
        }
    }
    if (rho == 0) {  // all mass collapses; fall back to uniform
        std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(v.size()));
        return;
    }
    for (double& x : v) x = std::max(x - theta, 0.0);
}

void project_feasible(std::vector<double>& v, const std::optional<CostHalfspace>& hs) {
    if (!hs) {
        project_simplex(v);
        return;
    }
    const std::vector<double>& c = hs->cost;
    double c_norm2 = 0.0;
    for (double ci : c) c_norm2 += ci * ci;

    auto project_halfspace = [&](std::vector<double>& y) {
        if (c_norm2 == 0.0) return;  // constant cost: half-space is all or nothing
        double dot = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) dot += c[i] * y[i];
        const double excess = dot - hs->gamma;
        if (excess <= 0.0) return;
        const double step = excess / c_norm2;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] -= step * c[i];
    };

    // Dykstra alternation between the simplex and the half-space.
    std::vector<double> x = v;
    std::vector<double> p_inc(v.size(), 0.0), q_inc(v.size(), 0.0);
    std::vector<double> prev(v.size());
    for (int it = 0; it < 500; ++it) {
        prev = x;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += p_inc[i];
        std::vector<double> y = x;
        project_halfspace(y);
        for (std::size_t i = 0; i < x.size(); ++i) p_inc[i] = x[i] - y[i];
        x = y;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += q_inc[i];
        y = x;
        project_simplex(y);
        for (std::size_t i = 0; i < x.size(); ++i) q_inc[i] = x[i] - y[i];
        x = y;
        double delta = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) delta += std::abs(x[i] - prev[i]);
        if (delta < 1e-15) break;
    }
    // Exact feasibility: fold any residual half-space violation toward the
    // cheapest vertex along a straight line inside the simplex.
    if (c_norm2 > 0.0) {
        double dot = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) dot += c[i] * x[i];
        if (dot > hs->gamma) {
            const std::size_t cheapest = static_cast<std::size_t>(
                std::min_element(c.begin(), c.end()) - c.begin());
            const double cmin = c[cheapest];
            if (dot - cmin > 0.0) {
                double t = (hs->gamma - cmin) / (dot - cmin);
                t = std::clamp(t, 0.0, 1.0);
                for (std::size_t i = 0; i < x.size(); ++i) x[i] *= t;
                x[cheapest] += 1.0 - t;
            }
        }
    }
    v = std::move(x);
}

// ---------------------------------------------------------------------------
// Dense two-phase simplex (Bland's rule), used only for the dual certificate.
// ---------------------------------------------------------------------------

std::optional<std::vector<double>> solve_lp_standard(const std::vector<std::vector<double>>& A_in,
                                                     const std::vector<double>& b_in,
                                                     const std::vector<double>& c_in) {
    const std::size_t m = A_in.size();
    const std::size_t n = c_in.size();
    if (m == 0 || n == 0) return std::nullopt;

    // Tableau with artificial variables appended: columns [0, n) original,
    // [n, n+m) artificial, last column = rhs.
    std::vector<std::vector<double>> tab(m, std::vector<double>(n + m + 1, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        const double sign = b_in[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) tab[i][j] = sign * A_in[i][j];
        tab[i][n + i] = 1.0;
        tab[i][n + m] = sign * b_in[i];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    auto pivot = [&](std::size_t row, std::size_t col) {
        const double piv = tab[row][col];
        for (double& v : tab[row]) v /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row) continue;
            const double f = tab[i][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= n + m; ++j) tab[i][j] -= f * tab[row][j];
        }
        basis[row] = col;
    };

    auto run_phase = [&](const std::vector<double>& cost, std::size_t ncols) -> bool {
        for (long guard = 0; guard < 20000; ++guard) {
            // reduced costs under the current basis
            std::vector<double> y(m, 0.0);
            std::vector<double> reduced(ncols);
            std::size_t enter = ncols;
            for (std::size_t j = 0; j < ncols; ++j) {
                double r = cost[j];
                for (std::size_t i = 0; i < m; ++i) r -= cost[basis[i]] * tab[i][j];
                reduced[j] = r;
                if (r < -1e-11 && enter == ncols) enter = j;  // Bland: first improving index
            }
            if (enter == ncols) return true;  // optimal
            std::size_t leave = m;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                if (tab[i][enter] > 1e-11) {
                    const double ratio = tab[i][n + m] / tab[i][enter];
                    if (ratio < best_ratio - 1e-14 ||
                        (ratio < best_ratio + 1e-14 && (leave == m || basis[i] < basis[leave]))) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave == m) return false;  // unbounded
            pivot(leave, enter);
        }
        return false;  // iteration guard tripped
    };

    // Phase 1: minimize the artificial mass.
    std::vector<double> cost1(n + m, 0.0);
    for (std::size_t j = n; j < n + m; ++j) cost1[j] = 1.0;
    if (!run_phase(cost1, n + m)) return std::nullopt;
    double art = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] >= n) art += tab[i][n + m];
    if (art > 1e-8) return std::nullopt;  // infeasible

    // Drive remaining artificials out of the basis when possible.
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        std::size_t col = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(tab[i][j]) > 1e-9) {
                col = j;
                break;
            }
        }
        if (col < n) pivot(i, col);
        // else: redundant row, its artificial stays basic at value ~0
    }

    // Phase 2 with the original costs (artificials pinned by huge cost).
    std::vector<double> cost2(n + m, 0.0);
    for (std::size_t j = 0; j < n; ++j) cost2[j] = c_in[j];
    for (std::size_t j = n; j < n + m; ++j) cost2[j] = 1e30;
    if (!run_phase(cost2, n + m)) return std::nullopt;

    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) x[basis[i]] = tab[i][n + m];
    }
    return x;
}

// ---------------------------------------------------------------------------
// Dual certificate
// ---------------------------------------------------------------------------

namespace {

// Column matrix Dt[x][j] = offset_j + scale_j * D(W_j(.|x) || q_j) with the
// output laws taken at a slightly smoothed input so that all reachable
// outputs carry mass (any q gives a valid bound).
std::vector<std::vector<double>> certificate_matrix(const MaxMinProblem& prob,
                                                    const std::vector<double>& p) {
    const std::size_t nx = prob.channel->input_size();
    std::vector<double> blended(p);
    const double eta = 1e-10;
    for (double& v : blended) v = (1.0 - eta) * v + eta / static_cast<double>(nx);
    const Distribution pb = as_distribution(blended);

    std::vector<std::vector<double>> columns(prob.terms.size());
    std::vector<std::optional<std::vector<double>>> cache(prob.channel->component_count());
    for (std::size_t j = 0; j < prob.terms.size(); ++j) {
        const ObjectiveTerm& t = prob.terms[j];
        if (!cache[t.channel]) {
            const Dmc& w = prob.channel->channel(t.channel);
            cache[t.channel] = row_divergences_bits(w, w.output_law(pb));
        }
        columns[j].resize(nx);
        for (std::size_t x = 0; x < nx; ++x) {
            columns[j][x] = t.offset + t.scale * (*cache[t.channel])[x];
        }
    }
    std::vector<std::vector<double>> dt(nx, std::vector<double>(prob.terms.size()));
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t j = 0; j < prob.terms.size(); ++j) dt[x][j] = columns[j][x];
    return dt;
}

double upper_bound_at(const MaxMinProblem& prob, const std::vector<std::vector<double>>& dt,
                      const std::vector<double>& lambda, double mu) {
    double ub = -std::numeric_limits<double>::infinity();
    const std::size_t nx = dt.size();
    for (std::size_t x = 0; x < nx; ++x) {
        double v = 0.0;
        for (std::size_t j = 0; j < lambda.size(); ++j) v += lambda[j] * dt[x][j];
        if (prob.constraint) v -= mu * (prob.constraint->cost[x] - prob.constraint->gamma);
        ub = std::max(ub, v);
    }
    return ub;
}

// min_{lambda in simplex, mu >= 0} max_x ( <lambda, Dt[x]> - mu (c(x) - gamma) )
// as a small LP; falls back to a frequency-weighted lambda when the LP fails.
std::pair<std::vector<double>, double> solve_certificate_game(
    const MaxMinProblem& prob, const std::vector<std::vector<double>>& dt,
    const std::vector<double>& fallback_lambda) {
    const std::size_t nx = dt.size();
    const std::size_t nj = prob.terms.size();
    const bool has_cost = prob.constraint.has_value();
    // variables: lambda_j (nj), mu (0/1), z+, z-, slack_x (nx)
    const std::size_t nmu = has_cost ? 1 : 0;
    const std::size_t nvar = nj + nmu + 2 + nx;
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (std::size_t x = 0; x < nx; ++x) {
        std::vector<double> row(nvar, 0.0);
        for (std::size_t j = 0; j < nj; ++j) row[j] = dt[x][j];
        if (has_cost) row[nj] = -(prob.constraint->cost[x] - prob.constraint->gamma);
        row[nj + nmu] = -1.0;      // -z+
        row[nj + nmu + 1] = 1.0;   // +z-
        row[nj + nmu + 2 + x] = 1.0;
        A.push_back(std::move(row));
        b.push_back(0.0);
    }
    std::vector<double> sum_row(nvar, 0.0);
    for (std::size_t j = 0; j < nj; ++j) sum_row[j] = 1.0;
    A.push_back(std::move(sum_row));
    b.push_back(1.0);

    std::vector<double> cost(nvar, 0.0);
    cost[nj + nmu] = 1.0;
    cost[nj + nmu + 1] = -1.0;

    if (auto x = solve_lp_standard(A, b, cost)) {
        std::vector<double> lambda(x->begin(), x->begin() + nj);
        double lsum = std::accumulate(lambda.begin(), lambda.end(), 0.0);
        if (lsum > 0.5) {  // sanity: a valid simplex point came back
            for (double& v : lambda) v = std::max(v, 0.0) / lsum;
            const double mu = has_cost ? std::max(0.0, (*x)[nj]) : 0.0;
            return {lambda, mu};
        }
    }
    // Fallback: active-frequency lambda; mu by golden-section when constrained.
    double mu = 0.0;
    if (has_cost) {
        double lo = 0.0, hi = 1.0;
        double spread = 0.0;
        for (const auto& row : dt)
            for (double v : row) spread = std::max(spread, std::abs(v));
        hi = spread + 1.0;
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = lo, bb = hi;
        double x1 = bb - phi * (bb - a), x2 = a + phi * (bb - a);
        double f1 = upper_bound_at(prob, dt, fallback_lambda, x1);
        double f2 = upper_bound_at(prob, dt, fallback_lambda, x2);
        for (int it = 0; it < 200; ++it) {
            if (f1 <= f2) {
                bb = x2;
                x2 = x1;
                f2 = f1;
                x1 = bb - phi * (bb - a);
                f1 = upper_bound_at(prob, dt, fallback_lambda, x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + phi * (bb - a);
                f2 = upper_bound_at(prob, dt, fallback_lambda, x2);
            }
        }
        mu = 0.5 * (a + bb);
    }
    return {fallback_lambda, mu};
}

}  // namespace

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

MaxMinSolution solve_max_min(const MaxMinProblem& prob, const SolverOptions& opts) {
    if (prob.terms.empty()) throw std::invalid_argument("solve_max_min: no objective terms");
    const std::size_t nx = prob.channel->input_size();

    MaxMinSolution best;
    best.p.assign(nx, 1.0 / static_cast<double>(nx));
    project_feasible(best.p, prob.constraint);
    best.value = -std::numeric_limits<double>::infinity();

    std::vector<double> active_count(prob.terms.size(), 0.0);
    long iterations = 0;

    auto consider = [&](const std::vector<double>& cand) {
        std::vector<double> p = cand;
        project_feasible(p, prob.constraint);
        const TermEval ev = evaluate_terms(prob, as_distribution(p));
        if (ev.min_value > best.value) {
            best.value = ev.min_value;
            best.p = p;
        }
    };

    // Warm starts: uniform, each term channel's single-channel optimizer,
    // then seeded random interior points.
    std::vector<std::vector<double>> starts;
    starts.emplace_back(nx, 1.0 / static_cast<double>(nx));
    for (const auto& s : prob.extra_starts) starts.push_back(s);
    {
        std::vector<bool> seen(prob.channel->component_count(), false);
        for (const ObjectiveTerm& t : prob.terms) {
            if (seen[t.channel]) continue;
            seen[t.channel] = true;
            ComponentCapacityOptions ba;
            ba.tol = 1e-9;
            starts.push_back(component_capacity(prob.channel->channel(t.channel), ba).input.probs());
        }
    }
    std::mt19937_64 rng(opts.seed);
    std::exponential_distribution<double> expd(1.0);
    while (starts.size() < static_cast<std::size_t>(std::max(1, opts.restarts))) {
        std::vector<double> p(nx);
        double s = 0.0;
        for (double& v : p) {
            v = expd(rng) + kTiny;
            s += v;
        }
        for (double& v : p) v /= s;
        starts.push_back(std::move(p));
    }

    // Phase 1: projected supergradient with Polyak averaging per start.
    const double step_scale = 0.25;
    for (const std::vector<double>& start : starts) {
        std::vector<double> p = start;
        project_feasible(p, prob.constraint);
        std::vector<double> pbar = p;
        for (int t = 1; t <= opts.supergradient_iterations; ++t) {
            ++iterations;
            const Distribution pd = as_distribution(p);
            const TermEval ev = evaluate_terms(prob, pd);
            active_count[ev.active] += 1.0;
            if (ev.min_value > best.value) {
                best.value = ev.min_value;
                best.p = p;
            }
            const std::vector<double> g = term_gradient(prob, pd, ev.active);
            const double step = step_scale / std::sqrt(static_cast<double>(t));
            for (std::size_t i = 0; i < nx; ++i) p[i] += step * g[i];
            project_feasible(p, prob.constraint);
            const double w_new = 1.0 / static_cast<double>(t + 1);
            for (std::size_t i = 0; i < nx; ++i) pbar[i] = (1.0 - w_new) * pbar[i] + w_new * p[i];
        }
        consider(pbar);
        consider(p);
    }

    // Phase 2: smoothed polish (softmin surrogate, backtracking projected
    // ascent) with a decreasing temperature schedule. Keeps the exact-value
    // best point.
    auto polish = [&](int iters_per_level) {
        std::vector<double> p = best.p;
        for (double tau = 1e-2; tau >= 0.9e-9; tau *= 0.1) {
            for (int it = 0; it < iters_per_level; ++it) {
                ++iterations;
                const Distribution pd = as_distribution(p);
                const TermEval ev = evaluate_terms(prob, pd);
                if (ev.min_value > best.value) {
                    best.value = ev.min_value;
                    best.p = p;
                }
                // softmin weights
                std::vector<double> sigma(prob.terms.size());
                double z = 0.0;
                for (std::size_t j = 0; j < sigma.size(); ++j) {
                    sigma[j] = std::exp(-(ev.values[j] - ev.min_value) / tau);
                    z += sigma[j];
                }
                std::vector<double> g(nx, 0.0);
                for (std::size_t j = 0; j < sigma.size(); ++j) {
                    if (sigma[j] / z < 1e-14) continue;
                    const std::vector<double> gj = term_gradient(prob, pd, j);
                    const double wj = sigma[j] / z;
                    for (std::size_t i = 0; i < nx; ++i) g[i] += wj * gj[i];
                }
                auto surrogate = [&](const Distribution& q) {
                    const TermEval e2 = evaluate_terms(prob, q);
                    double acc = 0.0;
                    for (double v : e2.values) acc += std::exp(-(v - e2.min_value) / tau);
                    return e2.min_value - tau * std::log(acc);
                };
                const double f0 = surrogate(pd);
                double step = 1.0;
                bool moved = false;
                for (int bt = 0; bt < 30; ++bt) {
                    std::vector<double> cand = p;
                    for (std::size_t i = 0; i < nx; ++i) cand[i] += step * g[i];
                    project_feasible(cand, prob.constraint);
                    double delta = 0.0;
                    for (std::size_t i = 0; i < nx; ++i) delta += std::abs(cand[i] - p[i]);
                    if (delta < 1e-16) break;
                    if (surrogate(as_distribution(cand)) > f0 + 1e-15) {
                        p = std::move(cand);
                        moved = true;
                        break;
                    }
                    step *= 0.5;
                }
                if (!moved) break;
            }
        }
        consider(p);
    };
    polish(std::max(1, opts.polish_iterations));

    // Dual certificate, escalating the polish while the gap misses tol.
    double active_total = std::accumulate(active_count.begin(), active_count.end(), 0.0);
    std::vector<double> fallback(prob.terms.size(), 0.0);
    if (active_total > 0.0) {
        for (std::size_t j = 0; j < fallback.size(); ++j) fallback[j] = active_count[j] / active_total;
    } else {
        fallback.assign(prob.terms.size(), 1.0 / static_cast<double>(prob.terms.size()));
    }

    double ub = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 4; ++attempt) {
        const auto dt = certificate_matrix(prob, best.p);
        const auto [lambda, mu] = solve_certificate_game(prob, dt, fallback);
        ub = std::min(ub, upper_bound_at(prob, dt, lambda, mu));
        if (ub - best.value <= opts.tol) break;
        polish(std::max(1, opts.polish_iterations) * (2 << attempt));
    }

    MaxMinSolution sol;
    sol.p = best.p;
    sol.value = best.value;
    sol.upper_bound = std::max(ub, best.value);
    sol.iterations = iterations;
    sol.converged = (sol.upper_bound - sol.value) <= opts.tol + 1e-12;
    return sol;
}

}  // namespace epscap::detail
