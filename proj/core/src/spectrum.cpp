#include "epscap/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "epscap/errors.hpp"

namespace epscap {

namespace {

// Sorts raw atoms and collapses values within merge_tol. The merged value is
// the probability-weighted mean, so sums of value*prob are preserved.
std::vector<Spectrum::Atom> sort_and_merge(std::vector<Spectrum::Atom> atoms, double merge_tol) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Spectrum::Atom& a, const Spectrum::Atom& b) {
                  return a.value_bits < b.value_bits;
              });
    std::vector<Spectrum::Atom> merged;
    merged.reserve(atoms.size());
    for (const Spectrum::Atom& a : atoms) {
        if (a.prob == 0.0) continue;
        if (!merged.empty() && a.value_bits - merged.back().value_bits <= merge_tol) {
            Spectrum::Atom& m = merged.back();
            const double total = m.prob + a.prob;
            m.value_bits = (m.value_bits * m.prob + a.value_bits * a.prob) / total;
            m.prob = total;
        } else {
            merged.push_back(a);
        }
    }
    return merged;
}

}  // namespace

Spectrum::Spectrum(std::vector<Atom> atoms, int blocklength, double merge_tol)
    : atoms_(sort_and_merge(std::move(atoms), merge_tol)), n_(blocklength) {
    if (atoms_.empty()) throw std::invalid_argument("Spectrum: no atoms");
    double total = 0.0;
    for (const Atom& a : atoms_) {
        if (!(a.prob >= 0.0) || !std::isfinite(a.value_bits)) {
            throw std::invalid_argument("Spectrum: invalid atom");
        }
        total += a.prob;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw std::invalid_argument("Spectrum: probabilities sum to " + std::to_string(total));
    }
}

double Spectrum::mean_bits() const {
    double m = 0.0;
    for (const Atom& a : atoms_) m += a.prob * a.value_bits;
    return m;
}

double Spectrum::variance_bits2() const {
    const double m = mean_bits();
    double v = 0.0;
    for (const Atom& a : atoms_) {
        const double d = a.value_bits - m;
        v += a.prob * d * d;
    }
    return v;
}

double Spectrum::cdf(double threshold_bits) const {
    // Atoms are sorted; accumulate mass of values <= threshold.
    double acc = 0.0;
    for (const Atom& a : atoms_) {
        if (a.value_bits > threshold_bits) break;
        acc += a.prob;
    }
    return acc;
}

double Spectrum::cdf_normalized(double per_letter_bits) const {
    return cdf(per_letter_bits * static_cast<double>(n_));
}

double Spectrum::band_mass(double center_per_letter, double half_width) const {
    const double lo = (center_per_letter - half_width) * static_cast<double>(n_);
    const double hi = (center_per_letter + half_width) * static_cast<double>(n_);
    double acc = 0.0;
    for (const Atom& a : atoms_) {
        if (a.value_bits < lo) continue;
        if (a.value_bits > hi) break;
        acc += a.prob;
    }
    return acc;
}

double spectrum_cdf(const Spectrum& s, double threshold_bits) { return s.cdf(threshold_bits); }

Spectrum single_letter_spectrum(const Distribution& input, const Dmc& channel,
                                const SpectrumOptions& opts) {
    const InformationDensityTable table(input, channel);
    std::vector<Spectrum::Atom> atoms;
    atoms.reserve(table.entries().size());
    for (const auto& e : table.entries()) {
        atoms.push_back(Spectrum::Atom{e.value_bits, e.joint_prob});
    }
    return Spectrum(std::move(atoms), 1, opts.merge_tol);
}

Spectrum convolve(const Spectrum& a, const Spectrum& b, const SpectrumOptions& opts) {
    const std::size_t pairs = a.size() * b.size();
    if (pairs > opts.atom_cap) {
        throw CapExceeded("spectrum convolution would form " + std::to_string(pairs) +
                          " atom pairs (cap " + std::to_string(opts.atom_cap) +
                          "); coarsen merge_tol or reduce the blocklength");
    }
    std::vector<Spectrum::Atom> atoms;
    atoms.reserve(pairs);
    for (const auto& x : a.atoms()) {
        for (const auto& y : b.atoms()) {
            atoms.push_back(Spectrum::Atom{x.value_bits + y.value_bits, x.prob * y.prob});
        }
    }
    return Spectrum(std::move(atoms), a.blocklength() + b.blocklength(), opts.merge_tol);
}

Spectrum information_spectrum(const Distribution& input, const Dmc& channel, int n,
                              const SpectrumOptions& opts) {
    if (n < 1) throw std::invalid_argument("information_spectrum: n must be >= 1");
    const Spectrum base = single_letter_spectrum(input, channel, opts);
    // binary exponentiation over the convolution semigroup
    Spectrum result = base;
    int remaining = n - 1;
    Spectrum power = base;
    while (remaining > 0) {
        if (remaining & 1) result = convolve(result, power, opts);
        remaining >>= 1;
        if (remaining > 0) power = convolve(power, power, opts);
    }
    return result;
}

}  // namespace epscap
