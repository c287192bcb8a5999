#pragma once

#include <cstddef>
#include <vector>

#include "epscap/channel.hpp"
#include "epscap/distribution.hpp"
#include "epscap/spectrum.hpp"

namespace epscap {

struct FblOptions {
    SpectrumOptions spectrum;
    std::size_t type_cap = 200000;       // max number of input types enumerated
    double rate_tol = 1e-5;              // bisection resolution on rates, bits
    int gamma_scan_points = 160;         // log-spaced scan of gamma in (0, 1]
    int gamma_golden_iterations = 64;    // golden-section refinement around the scan best
    int threads = 1;
};

// ---------------------------------------------------------------------------
// Mixture information-spectrum divergence D_s
// ---------------------------------------------------------------------------

struct WeightedSpectrum {
    double weight;
    Spectrum spectrum;
    // P-mass at likelihood ratio +infinity (outcomes with Q = 0 < P);
    // such mass never enters the CDF at finite thresholds.
    double upper_tail_mass = 0.0;
};

struct DsResult {
    double value_bits = 0.0;
    // The feasible set {R : F(R) <= eps} is an open half-line below a jump;
    // value_bits is its boundary (the sup, not attained).
    bool open = true;
    // Set when the mixture CDF never exceeds eps at finite R (possible only
    // with upper_tail_mass > 0); value_bits is meaningless then.
    bool unbounded = false;
};

/// D_s^eps({P_l} || {Q_l}) on exact spectra of the log-likelihood ratios:
/// sup{ R : sum_l w_l P_l[ log P_l/Q_l <= R ] <= eps }, eps in [0, 1).
/// Exact on the merged weighted atoms: the result is the value of the first
/// jump at which the mixture CDF strictly exceeds eps.
DsResult spectrum_divergence(const std::vector<WeightedSpectrum>& parts, double eps);

// ---------------------------------------------------------------------------
// Feinstein achievability
// ---------------------------------------------------------------------------

struct FeinsteinBound {
    double raw = 0.0;    // the bound as computed (can exceed 1)
    double value = 0.0;  // clipped to [0, 1]
};

/// Mixed-channel Feinstein bound for i.i.d. inputs: there is an (n, M)
/// code with average error at most
///   sum_l w_l Pr[ (1/n) i_l <= (1/n) log2 M + gamma + (1/n) log2(1/w_l) ]
///   + 2^{-n gamma},
/// evaluated on exact spectra. gamma > 0; rates and gamma in bits.
FeinsteinBound feinstein_error_bound(const MixedChannel& ch, const Distribution& input, int n,
                                     double log2_M, double gamma, const FblOptions& opts = {});

struct FeinsteinRate {
    double rate_bits = 0.0;       // largest (1/n) log2 M with bound <= eps
    double error_bound = 0.0;     // bound achieved at that rate
    double gamma = 0.0;           // optimizing gamma
    bool rate_zero_infeasible = false;  // even M = 1 exceeded eps
};

/// Largest rate whose Feinstein bound stays within eps: bisection over
/// log2 M with an inner scan + golden-section search over gamma in (0, 1].
/// Deterministic given the resolution options.
FeinsteinRate feinstein_max_rate(const MixedChannel& ch, const Distribution& input, int n,
                                 double eps, const FblOptions& opts = {});

// ---------------------------------------------------------------------------
// Meta-converse
// ---------------------------------------------------------------------------

struct MetaconverseRate {
    double rate_bits = 0.0;     // valid upper bound on (1/n) log2 M_n
    double best_type_ds = 0.0;  // max over types of (1/n) D_s at eps_n + delta
    double slack_bits = 0.0;    // (1/n) log2(|T_n| / delta)
    std::size_t type_count = 0;
};

/// Upper bound on the rate of any (n, M_n, eps_n) code: for each input type
/// the per-component density spectrum against that type's product output law
/// is formed exactly, D_s of the weighted mixture is taken at eps_n + delta,
/// and the max over types plus the (1/n) log2(|T_n|/delta) correction yields
/// the bound. Requires eps_n + delta < 1; delta defaults to 1/n at the CLI.
MetaconverseRate metaconverse_rate_bound(const MixedChannel& ch, int n, double eps_n, double delta,
                                         const FblOptions& opts = {});

/// Meta-converse lower bound on the average error of an (n, M) code,
/// evaluated at the i.i.d. input law induced by `composition` with each
/// auxiliary output law Q_l the product output law:
///   eps >= sum_l w_l alpha_{1/M}( P W_l^n, P x Q_l ).
/// Computed exactly through the scalar likelihood-ratio reduction (the
/// Q-law of the density spectrum is the 2^-v tilt of the P-law).
double metaconverse_error_lower_bound(const MixedChannel& ch, const Distribution& composition,
                                      int n, double log2_M, const FblOptions& opts = {});

}  // namespace epscap
