#include "ritz/spectra.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ritz {

double band_spacing(const BandedSpectrumSpec& spec) {
  const double width = spec.hi - spec.lo;
  return (width - static_cast<double>(spec.bands - 1) * spec.void_width) /
         static_cast<double>(spec.total);
}

Spectrum banded_spectrum(const BandedSpectrumSpec& spec) {
  if (spec.bands == 0 || spec.total == 0)
    throw std::invalid_argument("banded spectrum needs at least one band and one eigenvalue");
  if (spec.total % spec.bands != 0)
    throw std::invalid_argument("N = " + std::to_string(spec.total) +
                                " is not divisible by k = " + std::to_string(spec.bands));
  if (!std::isfinite(spec.lo) || !std::isfinite(spec.hi) || !(spec.hi > spec.lo))
    throw std::invalid_argument("banded spectrum range must satisfy lo < hi");
  if (!(spec.void_width >= 0.0))
    throw std::invalid_argument("void width must be non-negative");

  const double delta = band_spacing(spec);
  if (delta < 0.0)
    throw std::invalid_argument("voids do not fit in the range: (k-1) * Delta exceeds its width");
  if (delta == 0.0 && !spec.allow_degenerate)
    throw std::invalid_argument("band spacing is zero; set allow_degenerate for degenerate bands");

  const std::size_t per_band = spec.total / spec.bands;
  const double band_step = static_cast<double>(per_band) * delta + spec.void_width;
  std::vector<double> values;
  values.reserve(spec.total);
  for (std::size_t b = 0; b < spec.bands; ++b)
    for (std::size_t i = 0; i < per_band; ++i)
      values.push_back(spec.hi - static_cast<double>(b) * band_step - static_cast<double>(i) * delta);
  return Spectrum(std::move(values));
}

Spectrum figure1_spectrum() {
  std::vector<double> v;
  v.reserve(46);
  v.push_back(14.0);
  for (int i = 0; i <= 20; ++i)
    v.push_back((200 - i) / 20.0); // 10.0 .. 9.0
  v.push_back(6.0);
  v.push_back(0.7);
  v.push_back(0.2);
  for (int i = 0; i <= 18; ++i)
    v.push_back(-(180 + i) / 20.0); // -9.0 .. -9.9
  v.push_back(-13.1);
  v.push_back(-13.2);
  return Spectrum(std::move(v));
}

OverlapProfile equal_overlap_start(std::size_t n) {
  if (n == 0)
    throw std::invalid_argument("equal_overlap_start: N must be positive");
  return OverlapProfile(std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n))));
}

} // namespace ritz
