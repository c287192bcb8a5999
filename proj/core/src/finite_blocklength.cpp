#include "epscap/finite_blocklength.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "epscap/errors.hpp"
#include "epscap/neyman_pearson.hpp"
#include "epscap/parallel.hpp"

namespace epscap {

// ---------------------------------------------------------------------------
// D_s on materialized spectra
// ---------------------------------------------------------------------------

DsResult spectrum_divergence(const std::vector<WeightedSpectrum>& parts, double eps) {
    if (!(eps >= 0.0 && eps < 1.0)) {
        throw std::invalid_argument("spectrum_divergence: eps must lie in [0, 1)");
    }
    if (parts.empty()) throw std::invalid_argument("spectrum_divergence: no spectra");
    double weight_sum = 0.0;
    std::vector<std::pair<double, double>> atoms;  // (value, weighted prob)
    for (const WeightedSpectrum& ws : parts) {
        weight_sum += ws.weight;
        for (const auto& a : ws.spectrum.atoms()) {
            atoms.emplace_back(a.value_bits, ws.weight * a.prob);
        }
    }
    if (std::abs(weight_sum - 1.0) > 1e-9) {
        throw std::invalid_argument("spectrum_divergence: weights sum to " +
                                    std::to_string(weight_sum));
    }
    std::sort(atoms.begin(), atoms.end());
    // sup{R : F(R) <= eps}: the feasible set is the open half-line below the
    // first jump where the mixture CDF strictly exceeds eps; its boundary is
    // the sup (not attained, hence the open flag).
    double cum = 0.0;
    for (const auto& [value, prob] : atoms) {
        cum += prob;
        if (cum > eps) return DsResult{value, true, false};
    }
    // Reachable only when enough mass sits at likelihood ratio +infinity.
    return DsResult{std::numeric_limits<double>::infinity(), true, true};
}

// ---------------------------------------------------------------------------
// Feinstein achievability
// ---------------------------------------------------------------------------

namespace {

double feinstein_raw(const MixedChannel& ch, const std::vector<Spectrum>& spectra, int n,
                     double rate_bits, double gamma) {
    double acc = 0.0;
    for (std::size_t l = 0; l < spectra.size(); ++l) {
        const double w = ch.weight(l);
        const double threshold =
            rate_bits + gamma + std::log2(1.0 / w) / static_cast<double>(n);
        acc += w * spectra[l].cdf_normalized(threshold);
    }
    return acc + std::exp2(-static_cast<double>(n) * gamma);
}

struct GammaBest {
    double bound;
    double gamma;
};

// gamma scan on a log grid followed by golden-section refinement around the
// best bracket. The bound is quasiconvex in gamma up to CDF steps; the scan
// makes the refinement robust to those plateaus.
GammaBest best_gamma(const MixedChannel& ch, const std::vector<Spectrum>& spectra, int n,
                     double rate_bits, const FblOptions& opts) {
    const int points = std::max(8, opts.gamma_scan_points);
    const double lg_lo = std::log(1e-6);
    const double lg_hi = std::log(1.0);
    std::vector<double> gammas(points);
    for (int i = 0; i < points; ++i) {
        gammas[i] = std::exp(lg_lo + (lg_hi - lg_lo) * i / static_cast<double>(points - 1));
    }
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
        const double v = feinstein_raw(ch, spectra, n, rate_bits, gammas[i]);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    double a = gammas[std::max(0, best - 1)];
    double b = gammas[std::min(points - 1, best + 1)];
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = feinstein_raw(ch, spectra, n, rate_bits, x1);
    double f2 = feinstein_raw(ch, spectra, n, rate_bits, x2);
    for (int it = 0; it < opts.gamma_golden_iterations; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = feinstein_raw(ch, spectra, n, rate_bits, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = feinstein_raw(ch, spectra, n, rate_bits, x2);
        }
    }
    const double g = 0.5 * (a + b);
    const double v = feinstein_raw(ch, spectra, n, rate_bits, g);
    if (v < best_val) return {v, g};
    return {best_val, gammas[best]};
}

std::vector<Spectrum> component_spectra(const MixedChannel& ch, const Distribution& input, int n,
                                        const FblOptions& opts) {
    std::vector<Spectrum> spectra;
    spectra.reserve(ch.component_count());
    for (std::size_t l = 0; l < ch.component_count(); ++l) {
        spectra.push_back(information_spectrum(input, ch.channel(l), n, opts.spectrum));
    }
    return spectra;
}

}  // namespace

FeinsteinBound feinstein_error_bound(const MixedChannel& ch, const Distribution& input, int n,
                                     double log2_M, double gamma, const FblOptions& opts) {
    if (n < 1) throw std::invalid_argument("feinstein_error_bound: n must be >= 1");
    if (!(gamma > 0.0)) throw std::invalid_argument("feinstein_error_bound: gamma must be > 0");
    const auto spectra = component_spectra(ch, input, n, opts);
    const double raw = feinstein_raw(ch, spectra, n, log2_M / static_cast<double>(n), gamma);
    return FeinsteinBound{raw, std::clamp(raw, 0.0, 1.0)};
}

FeinsteinRate feinstein_max_rate(const MixedChannel& ch, const Distribution& input, int n,
                                 double eps, const FblOptions& opts) {
    if (n < 1) throw std::invalid_argument("feinstein_max_rate: n must be >= 1");
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("feinstein_max_rate: eps must lie in (0, 1)");
    }
    const auto spectra = component_spectra(ch, input, n, opts);

    FeinsteinRate out;
    const GammaBest at_zero = best_gamma(ch, spectra, n, 0.0, opts);
    if (at_zero.bound > eps) {
        out.rate_zero_infeasible = true;
        out.rate_bits = 0.0;
        out.error_bound = std::clamp(at_zero.bound, 0.0, 1.0);
        out.gamma = at_zero.gamma;
        return out;
    }
    double lo = 0.0;
    double hi = std::log2(static_cast<double>(ch.input_size())) + 1.0;
    GammaBest lo_best = at_zero;
    while (hi - lo > opts.rate_tol) {
        const double mid = 0.5 * (lo + hi);
        const GammaBest gb = best_gamma(ch, spectra, n, mid, opts);
        if (gb.bound <= eps) {
            lo = mid;
            lo_best = gb;
        } else {
            hi = mid;
        }
    }
    out.rate_bits = lo;
    out.error_bound = std::clamp(lo_best.bound, 0.0, 1.0);
    out.gamma = lo_best.gamma;
    return out;
}

// ---------------------------------------------------------------------------
// Meta-converse: per-type spectra in a two-part representation
// ---------------------------------------------------------------------------

namespace {

// m-fold i.i.d. sum of a small single-letter law, materialized exactly.
Spectrum iid_sum_law(const Spectrum& single, int m, const SpectrumOptions& opts) {
    if (m == 0) return Spectrum({Spectrum::Atom{0.0, 1.0}}, 0, opts.merge_tol);
    Spectrum result = single;
    int remaining = m - 1;
    Spectrum power = single;
    while (remaining > 0) {
        if (remaining & 1) result = convolve(result, power, opts);
        remaining >>= 1;
        if (remaining > 0) power = convolve(power, power, opts);
    }
    return result;
}

// Law of A + B kept as a pair when the joint support would be too large.
// CDF queries run in O(|A| + |B|) with a two-pointer sweep.
struct PairLaw {
    std::vector<Spectrum::Atom> a;  // sorted ascending
    std::vector<Spectrum::Atom> b;  // sorted ascending
    std::vector<double> b_prefix;   // b_prefix[j] = mass of the first j atoms of b

    static PairLaw make(Spectrum lhs, Spectrum rhs) {
        PairLaw law;
        law.a = lhs.atoms();
        law.b = rhs.atoms();
        if (law.a.size() > law.b.size()) std::swap(law.a, law.b);
        law.b_prefix.resize(law.b.size() + 1, 0.0);
        for (std::size_t j = 0; j < law.b.size(); ++j) {
            law.b_prefix[j + 1] = law.b_prefix[j] + law.b[j].prob;
        }
        return law;
    }

    double min_value() const { return a.front().value_bits + b.front().value_bits; }
    double max_value() const { return a.back().value_bits + b.back().value_bits; }

    double cdf(double threshold) const {
        double acc = 0.0;
        std::size_t j = b.size();
        for (const auto& atom : a) {  // thresholds decrease as a-values increase
            const double t = threshold - atom.value_bits;
            while (j > 0 && b[j - 1].value_bits > t) --j;
            acc += atom.prob * b_prefix[j];
        }
        return acc;
    }
};

// Upper end of the bisection bracket around sup{R : sum_l w_l F_l(R) <= eps}.
// Always >= the true sup, which keeps converse bounds valid.
double mixture_quantile_upper(const std::vector<std::pair<double, PairLaw>>& laws, double eps) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& [w, law] : laws) {
        lo = std::min(lo, law.min_value());
        hi = std::max(hi, law.max_value());
    }
    lo -= 1.0;
    auto cdf = [&](double r) {
        double acc = 0.0;
        for (const auto& [w, law] : laws) acc += w * law.cdf(r);
        return acc;
    };
    if (cdf(hi) <= eps) return hi;  // total mass never exceeds eps: sup at the top atom
    for (int it = 0; it < 100 && hi - lo > 1e-12 * (1.0 + std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) <= eps) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

// Number of compositions of n into k parts, saturating at cap + 1.
std::size_t composition_count(long n, std::size_t k, std::size_t cap) {
    double count = 1.0;
    for (std::size_t i = 1; i < k; ++i) {
        count *= static_cast<double>(n + static_cast<long>(i));
        count /= static_cast<double>(i);
        if (count > static_cast<double>(cap) * 2.0) return cap + 1;
    }
    return static_cast<std::size_t>(count + 0.5);
}

void for_each_composition(long n, std::size_t k, const std::function<void(const std::vector<long>&)>& emit) {
    std::vector<long> counts(k, 0);
    std::function<void(std::size_t, long)> rec = [&](std::size_t d, long rest) {
        if (d + 1 == k) {
            counts[d] = rest;
            emit(counts);
            return;
        }
        for (long v = 0; v <= rest; ++v) {
            counts[d] = v;
            rec(d + 1, rest - v);
        }
    };
    rec(0, n);
}

}  // namespace

MetaconverseRate metaconverse_rate_bound(const MixedChannel& ch, int n, double eps_n, double delta,
                                         const FblOptions& opts) {
    if (n < 1) throw std::invalid_argument("metaconverse_rate_bound: n must be >= 1");
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw std::invalid_argument("metaconverse_rate_bound: delta must lie in (0, 1]");
    }
    if (!(eps_n >= 0.0) || eps_n + delta >= 1.0) {
        throw std::invalid_argument("metaconverse_rate_bound: need eps_n >= 0 and eps_n + delta < 1");
    }
    const std::size_t nx = ch.input_size();
    const std::size_t type_count = composition_count(n, nx, opts.type_cap);
    if (type_count > opts.type_cap) {
        throw CapExceeded("metaconverse_rate_bound: |T_n| exceeds the type cap of " +
                          std::to_string(opts.type_cap));
    }

    std::vector<std::vector<long>> types;
    types.reserve(type_count);
    for_each_composition(n, nx, [&](const std::vector<long>& c) { types.push_back(c); });

    std::vector<double> per_type(types.size());
    parallel_for_index(types.size(), opts.threads, [&](std::size_t ti) {
        const std::vector<long>& counts = types[ti];
        std::vector<double> type_probs(nx);
        for (std::size_t x = 0; x < nx; ++x) {
            type_probs[x] = static_cast<double>(counts[x]) / static_cast<double>(n);
        }
        const Distribution type_law(type_probs);

        std::vector<std::pair<double, PairLaw>> laws;
        laws.reserve(ch.component_count());
        for (std::size_t l = 0; l < ch.component_count(); ++l) {
            const Dmc& w = ch.channel(l);
            const Distribution q = w.output_law(type_law);
            // One part per used input symbol: the m_x-fold sum of the
            // density log2 W(y|x)/q(y) under W(.|x).
            std::vector<Spectrum> parts;
            for (std::size_t x = 0; x < nx; ++x) {
                if (counts[x] == 0) continue;
                std::vector<Spectrum::Atom> atoms;
                for (std::size_t y = 0; y < w.output_size(); ++y) {
                    const double wy = w(x, y);
                    if (wy == 0.0) continue;
                    atoms.push_back(Spectrum::Atom{std::log2(wy / q[y]), wy});
                }
                parts.push_back(iid_sum_law(Spectrum(std::move(atoms), 1, opts.spectrum.merge_tol),
                                            static_cast<int>(counts[x]), opts.spectrum));
            }
            std::sort(parts.begin(), parts.end(),
                      [](const Spectrum& s1, const Spectrum& s2) { return s1.size() < s2.size(); });
            Spectrum combined({Spectrum::Atom{0.0, 1.0}}, 0, opts.spectrum.merge_tol);
            for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
                combined = convolve(combined, parts[i], opts.spectrum);
            }
            laws.emplace_back(ch.weight(l), PairLaw::make(std::move(combined), parts.back()));
        }
        per_type[ti] = mixture_quantile_upper(laws, eps_n + delta) / static_cast<double>(n);
    });

    MetaconverseRate out;
    out.type_count = types.size();
    out.best_type_ds = *std::max_element(per_type.begin(), per_type.end());
    out.slack_bits = (std::log2(static_cast<double>(types.size())) + std::log2(1.0 / delta)) /
                     static_cast<double>(n);
    out.rate_bits = out.best_type_ds + out.slack_bits;
    return out;
}

double metaconverse_error_lower_bound(const MixedChannel& ch, const Distribution& composition,
                                      int n, double log2_M, const FblOptions& opts) {
    if (n < 1) throw std::invalid_argument("metaconverse_error_lower_bound: n must be >= 1");
    if (log2_M < 0.0) {
        throw std::invalid_argument("metaconverse_error_lower_bound: log2_M must be >= 0");
    }
    if (composition.size() != ch.input_size()) {
        throw std::invalid_argument("metaconverse_error_lower_bound: composition dimension");
    }
    const double beta_budget = std::exp2(-log2_M);

    double bound = 0.0;
    for (std::size_t l = 0; l < ch.component_count(); ++l) {
        const Spectrum spec = information_spectrum(composition, ch.channel(l), n, opts.spectrum);
        // Scalar likelihood-ratio reduction: under the product hypothesis
        // P x Q the density atom at v carries mass P(atom) 2^{-v}; whatever
        // is left sits at ratio -infinity and is never accepted.
        const std::size_t k = spec.size();
        std::vector<double> p_vec(k + 1, 0.0), q_vec(k + 1, 0.0);
        double q_sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const auto& a = spec.atoms()[i];
            p_vec[i] = a.prob;
            q_vec[i] = std::exp2(std::log2(a.prob) - a.value_bits);
            q_sum += q_vec[i];
        }
        if (q_sum > 1.0) {
            // Merge drift can push the tilted mass a hair above 1; scaling Q
            // down only shrinks alpha, so the lower bound stays valid.
            for (double& v : q_vec) v /= q_sum;
        } else {
            q_vec[k] = 1.0 - q_sum;
        }
        const double alpha =
            neyman_pearson_alpha(HypTestPair(Distribution(p_vec), Distribution(q_vec)), beta_budget);
        bound += ch.weight(l) * alpha;
    }
    return std::clamp(bound, 0.0, 1.0);
}

}  // namespace epscap
