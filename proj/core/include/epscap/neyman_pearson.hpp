#pragma once

#include "epscap/distribution.hpp"

namespace epscap {

/// Simple binary hypothesis test H0: Z ~ p vs H1: Z ~ q on a shared finite
/// outcome set.
struct HypTestPair {
    Distribution p;
    Distribution q;

    HypTestPair(Distribution p_, Distribution q_);
};

/// beta_alpha(P, Q): the exact minimal type-II error (Q-mass accepted)
/// among randomized tests whose type-I error (P-mass rejected) is <= alpha.
/// Neyman-Pearson: accept outcomes in decreasing likelihood-ratio order,
/// randomizing on the boundary atom.
double neyman_pearson_beta(const HypTestPair& t, double alpha);

/// alpha_beta(P, Q): the exact minimal type-I error among randomized tests
/// whose type-II error is <= beta. Dual of neyman_pearson_beta through the
/// achievable (alpha, beta) region.
double neyman_pearson_alpha(const HypTestPair& t, double beta);

}  // namespace epscap
