#pragma once

#include <map>

#include "manispline/manifold.hpp"
#include "manispline/spectrum.hpp"

namespace manispline {

/// Finitely supported spectral coefficient map (band-limited function).
using SpectralCoeffs = std::map<SpectralIndex, double>;

inline int series_max_degree(const SpectralCoeffs& c) {
  return c.empty() ? -1 : c.rbegin()->first.degree;
}

inline double evaluate_series(const Manifold& m, const SpectralCoeffs& c,
                              const Point& p) {
  double s = 0.0;
  for (const auto& [idx, v] : c) s += v * evaluate_basis(m, idx, p);
  return s;
}

/// Spectral H_t inner product of two finitely supported series.
inline double series_sobolev_inner(const Manifold& m, const SpectralCoeffs& a,
                                   const SpectralCoeffs& b, double t) {
  double s = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      double w = std::pow(1.0 + eigenvalue(m, ia->first.degree), t);
      s += w * ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return s;
}

}  // namespace manispline
