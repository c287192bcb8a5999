#pragma once

#include <cstddef>
#include <vector>

#include "epscap/channel.hpp"
#include "epscap/distribution.hpp"
#include "epscap/information.hpp"

namespace epscap {

struct SpectrumOptions {
    double merge_tol = 1e-9;        // atom values closer than this merge
    std::size_t atom_cap = 4000000;  // max atoms in any intermediate law
};

/// Exact finite-support law of the n-letter information density (raw sum,
/// in bits). Atoms are sorted by value and distinct after merging; merging
/// sums probabilities and keeps the probability-weighted mean value, so the
/// law's expectation is preserved exactly.
class Spectrum {
  public:
    struct Atom {
        double value_bits;
        double prob;
    };

    Spectrum() = default;
    /// Takes unsorted raw atoms, sorts, merges, validates total mass 1 (1e-10).
    Spectrum(std::vector<Atom> atoms, int blocklength, double merge_tol = 1e-9);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    int blocklength() const noexcept { return n_; }
    std::size_t size() const noexcept { return atoms_.size(); }

    double mean_bits() const;
    double variance_bits2() const;
    double min_value() const { return atoms_.front().value_bits; }
    double max_value() const { return atoms_.back().value_bits; }

    /// Pr[ S <= threshold ] on the raw (unnormalized) sum, closed inequality.
    double cdf(double threshold_bits) const;
    /// Pr[ S/n <= per_letter ] = cdf(n * per_letter).
    double cdf_normalized(double per_letter_bits) const;
    /// Mass of the closed band { |S/n - center| <= half_width }.
    double band_mass(double center_per_letter, double half_width) const;

  private:
    std::vector<Atom> atoms_;
    int n_ = 0;
};

/// Single-letter spectrum from an information density table (n = 1).
Spectrum single_letter_spectrum(const Distribution& input, const Dmc& channel,
                                const SpectrumOptions& opts = {});

/// Convolution of two independent spectra (values add, probabilities
/// multiply), with value merging. Throws CapExceeded past opts.atom_cap.
Spectrum convolve(const Spectrum& a, const Spectrum& b, const SpectrumOptions& opts = {});

/// Exact n-fold convolution of the single-letter information density law
/// for i.i.d. inputs, by binary exponentiation with merging.
Spectrum information_spectrum(const Distribution& input, const Dmc& channel, int n,
                              const SpectrumOptions& opts = {});

/// Pr[ S <= threshold ] on the raw sum (free-function form of Spectrum::cdf).
double spectrum_cdf(const Spectrum& s, double threshold_bits);

}  // namespace epscap
