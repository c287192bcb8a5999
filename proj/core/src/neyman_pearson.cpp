#include "epscap/neyman_pearson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace epscap {

HypTestPair::HypTestPair(Distribution p_, Distribution q_) : p(std::move(p_)), q(std::move(q_)) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("HypTestPair: hypotheses must share one outcome set");
    }
}

namespace {

struct RatioAtom {
    double ratio;  // P/Q; +inf when Q = 0 < P
    double p;
    double q;
};

// Outcomes grouped by likelihood ratio, descending. Outcomes with P = 0
// never help a test that guards P-mass, so they are dropped (their Q-mass is
// free rejection budget). Equal ratios merge: randomization within a level
// set is equivalent to a constant fraction of the merged atom.
std::vector<RatioAtom> ratio_atoms_desc(const HypTestPair& t) {
    std::vector<RatioAtom> atoms;
    atoms.reserve(t.p.size());
    for (std::size_t z = 0; z < t.p.size(); ++z) {
        const double pz = t.p[z];
        const double qz = t.q[z];
        if (pz == 0.0) continue;
        const double r = qz == 0.0 ? std::numeric_limits<double>::infinity() : pz / qz;
        atoms.push_back(RatioAtom{r, pz, qz});
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const RatioAtom& a, const RatioAtom& b) { return a.ratio > b.ratio; });
    std::vector<RatioAtom> merged;
    for (const RatioAtom& a : atoms) {
        if (!merged.empty() && merged.back().ratio == a.ratio) {
            merged.back().p += a.p;
            merged.back().q += a.q;
        } else {
            merged.push_back(a);
        }
    }
    return merged;
}

}  // namespace

double neyman_pearson_beta(const HypTestPair& t, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("neyman_pearson_beta: alpha must lie in [0, 1]");
    }
    const auto atoms = ratio_atoms_desc(t);
    // Accept P-mass >= 1 - alpha at minimal Q-cost: greedily take atoms in
    // decreasing ratio order, randomizing on the boundary atom.
    double target = 1.0 - alpha;
    double beta = 0.0;
    for (const RatioAtom& a : atoms) {
        if (target <= 0.0) break;
        if (a.p >= target) {
            beta += a.q * (target / a.p);
            target = 0.0;
        } else {
            beta += a.q;
            target -= a.p;
        }
    }
    return std::clamp(beta, 0.0, 1.0);
}

double neyman_pearson_alpha(const HypTestPair& t, double beta) {
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw std::invalid_argument("neyman_pearson_alpha: beta must lie in [0, 1]");
    }
    const auto atoms = ratio_atoms_desc(t);
    // Cover the most P-mass within the Q budget; boundary atom randomized.
    double budget = beta;
    double covered = 0.0;
    for (const RatioAtom& a : atoms) {
        if (a.q == 0.0) {  // infinite ratio: free acceptance
            covered += a.p;
            continue;
        }
        if (budget <= 0.0) break;
        if (a.q <= budget) {
            covered += a.p;
            budget -= a.q;
        } else {
            covered += a.p * (budget / a.q);
            budget = 0.0;
        }
    }
    return std::clamp(1.0 - covered, 0.0, 1.0);
}

}  // namespace epscap
