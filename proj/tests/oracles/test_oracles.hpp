#pragma once

// Test-only oracles, independent of the library's solver paths. Everything
// here recomputes expected values from first principles (closed forms,
// exhaustive enumeration, 1-D scans) so the tests never assert a value the
// oracle did not produce.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "epscap/channel.hpp"
#include "epscap/distribution.hpp"

namespace oracles {

// Binary entropy, bits.
inline double h2(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// I(P; BSC(delta)) with P = (1-q, q), from the closed form
// h2(delta + q (1 - 2 delta)) - h2(delta).
inline double bsc_mutual_information(double delta, double q) {
    return h2(delta + q * (1.0 - 2.0 * delta)) - h2(delta);
}

// ---------------------------------------------------------------------------
// Brute-force Neyman-Pearson over randomized threshold-free tests: every
// acceptance set plus one randomized boundary outcome. The optimum over all
// randomized tests is attained in this family.
// ---------------------------------------------------------------------------

inline double brute_force_beta(const std::vector<double>& p, const std::vector<double>& q,
                               double alpha) {
    const std::size_t n = p.size();
    double best = 1.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double cov = 0.0, qs = 0.0;
        for (std::size_t z = 0; z < n; ++z) {
            if (mask & (1u << z)) {
                cov += p[z];
                qs += q[z];
            }
        }
        if (cov >= 1.0 - alpha - 1e-15) best = std::min(best, qs);
        for (std::size_t j = 0; j < n; ++j) {
            if (mask & (1u << j)) continue;
            const double need = 1.0 - alpha - cov;
            double theta;
            if (need <= 0.0) {
                theta = 0.0;
            } else if (p[j] > 0.0) {
                theta = need / p[j];
                if (theta > 1.0 + 1e-15) continue;
                theta = std::min(theta, 1.0);
            } else {
                continue;  // cannot make up the missing coverage
            }
            best = std::min(best, qs + theta * q[j]);
        }
    }
    return best;
}

inline double brute_force_alpha(const std::vector<double>& p, const std::vector<double>& q,
                                double beta) {
    const std::size_t n = p.size();
    double best = 1.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double cov = 0.0, qs = 0.0;
        for (std::size_t z = 0; z < n; ++z) {
            if (mask & (1u << z)) {
                cov += p[z];
                qs += q[z];
            }
        }
        if (qs <= beta + 1e-15) best = std::min(best, 1.0 - cov);
        for (std::size_t j = 0; j < n; ++j) {
            if (mask & (1u << j)) continue;
            if (qs > beta + 1e-15) continue;
            double theta;
            if (q[j] > 0.0) {
                theta = std::min(1.0, (beta - qs) / q[j]);
            } else {
                theta = 1.0;
            }
            best = std::min(best, 1.0 - cov - theta * p[j]);
        }
    }
    return std::max(0.0, best);
}

// ---------------------------------------------------------------------------
// Exhaustive n-letter information spectrum: every (x, y) sequence pair.
// ---------------------------------------------------------------------------

struct RawAtom {
    double value;
    double prob;
};

inline std::vector<RawAtom> exhaustive_spectrum(const epscap::Distribution& p,
                                                const epscap::Dmc& w, int n) {
    const std::size_t nx = w.input_size();
    const std::size_t ny = w.output_size();
    const epscap::Distribution q = w.output_law(p);

    std::vector<RawAtom> atoms;
    std::vector<std::size_t> xs(n, 0), ys(n, 0);
    auto advance = [](std::vector<std::size_t>& v, std::size_t base) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (++v[i] < base) return true;
            v[i] = 0;
        }
        return false;
    };
    do {
        double px = 1.0;
        for (int i = 0; i < n; ++i) px *= p[xs[i]];
        if (px == 0.0) continue;
        std::fill(ys.begin(), ys.end(), 0);
        do {
            double pw = 1.0;
            double value = 0.0;
            for (int i = 0; i < n; ++i) {
                const double wi = w(xs[i], ys[i]);
                if (wi == 0.0) {
                    pw = 0.0;
                    break;
                }
                pw *= wi;
                value += std::log2(wi / q[ys[i]]);
            }
            if (pw > 0.0) atoms.push_back(RawAtom{value, px * pw});
        } while (advance(ys, ny));
    } while (advance(xs, nx));

    std::sort(atoms.begin(), atoms.end(),
              [](const RawAtom& a, const RawAtom& b) { return a.value < b.value; });
    std::vector<RawAtom> merged;
    for (const RawAtom& a : atoms) {
        if (!merged.empty() && a.value - merged.back().value <= 1e-9) {
            const double total = merged.back().prob + a.prob;
            merged.back().value =
                (merged.back().value * merged.back().prob + a.value * a.prob) / total;
            merged.back().prob = total;
        } else {
            merged.push_back(a);
        }
    }
    return merged;
}

// ---------------------------------------------------------------------------
// Random instances (seeded; tests stay deterministic).
// ---------------------------------------------------------------------------

inline epscap::Distribution random_distribution(std::mt19937_64& rng, std::size_t n,
                                                double floor = 0.0) {
    std::exponential_distribution<double> expd(1.0);
    std::vector<double> p(n);
    double s = 0.0;
    for (double& v : p) {
        v = expd(rng) + floor;
        s += v;
    }
    for (double& v : p) v /= s;
    return epscap::Distribution(p);
}

inline epscap::Dmc random_dmc(std::mt19937_64& rng, std::size_t nx, std::size_t ny,
                              double entry_floor = 0.02) {
    std::exponential_distribution<double> expd(1.0);
    std::vector<double> rows;
    rows.reserve(nx * ny);
    for (std::size_t x = 0; x < nx; ++x) {
        std::vector<double> row(ny);
        double s = 0.0;
        for (double& v : row) {
            v = expd(rng) + entry_floor;
            s += v;
        }
        for (double v : row) rows.push_back(v / s);
    }
    return epscap::Dmc(nx, ny, std::move(rows));
}

inline epscap::MixedChannel random_mixed_channel(std::mt19937_64& rng, std::size_t nx,
                                                 std::size_t ny, std::size_t components,
                                                 double weight_floor = 0.05) {
    std::exponential_distribution<double> expd(1.0);
    std::vector<double> w(components);
    double s = 0.0;
    for (double& v : w) {
        v = expd(rng) + weight_floor;
        s += v;
    }
    std::vector<epscap::MixedChannel::Component> comps;
    for (std::size_t l = 0; l < components; ++l) {
        comps.push_back({w[l] / s, random_dmc(rng, nx, ny)});
    }
    return epscap::MixedChannel(std::move(comps));
}

// ---------------------------------------------------------------------------
// 1-D scans for |X| = 2 instances.
// ---------------------------------------------------------------------------

// max over q in [0, 1] of f(q) on a lattice followed by local zoom.
template <typename F>
double scan_maximum_1d(F&& f, double lo, double hi, int steps, int zoom_rounds = 4) {
    double best_q = lo, best = -1e300;
    double a = lo, b = hi;
    for (int round = 0; round <= zoom_rounds; ++round) {
        for (int i = 0; i <= steps; ++i) {
            const double qv = a + (b - a) * i / static_cast<double>(steps);
            const double v = f(qv);
            if (v > best) {
                best = v;
                best_q = qv;
            }
        }
        const double width = (b - a) / static_cast<double>(steps);
        a = std::max(lo, best_q - 2.0 * width);
        b = std::min(hi, best_q + 2.0 * width);
    }
    return best;
}

}  // namespace oracles
