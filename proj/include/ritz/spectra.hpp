#pragma once

// Synthetic spectra for experiments: uniform bands separated by voids, and the
// 46-eigenvalue spectrum used for the convergence figure.

#include "ritz/operator.hpp"

#include <cstddef>

namespace ritz {

struct BandedSpectrumSpec {
  std::size_t bands = 1;  // k
  std::size_t total = 1;  // N, divisible by k
  double void_width = 0;  // Delta between consecutive bands
  double lo = 0.0;
  double hi = 1.0;
  bool allow_degenerate = false; // admit delta = 0 (k values of multiplicity N/k)
};

/// Intra-band spacing delta = (hi - lo - (k-1) Delta) / N.
double band_spacing(const BandedSpectrumSpec& spec);

/// k bands of N/k eigenvalues spaced by delta, anchored at `hi` and filled
/// downward; the top of band b sits b * ((N/k) delta + Delta) below hi.
/// Throws std::invalid_argument for k = 0, N not divisible by k, an empty or
/// inverted range, delta < 0, or delta = 0 without allow_degenerate.
Spectrum banded_spectrum(const BandedSpectrumSpec& spec);

/// Reconstructed spectrum of the convergence figure (N = 46): isolated
/// lambda_1 = 14, a band 10.0 .. 9.0 with spacing 0.05, interior eigenvalues
/// 6.0, 0.7, 0.2, a band -9.0 .. -9.9 with spacing 0.05, and the close bottom
/// pair -13.1, -13.2. Only the bottom pair, the spacing and N are given by the
/// figure; the other values are reconstruction constants.
Spectrum figure1_spectrum();

/// Shift used for targets 23, 24 and 25 in the figure.
inline constexpr double kFigure1Shift = 0.45;

/// Equal overlap 1/sqrt(N) with every eigenvector.
OverlapProfile equal_overlap_start(std::size_t n);

} // namespace ritz
