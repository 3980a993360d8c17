#pragma once

#include <functional>
#include <optional>
#include <string>

#include "manispline/manifold.hpp"
#include "manispline/series.hpp"
#include "manispline/spectrum.hpp"

namespace manispline {

enum class FunctionalKind { dirac, hemisphere, great_circle, arc, total_integral };

const char* functional_kind_name(FunctionalKind k);

struct QuadApplyResult {
  double value = 0.0;
  bool resolution_warning = false;
};

/// A linear functional represented through its spectral coefficients
/// F(phi_{j,i}). All kinds except the circle arc are zonal: F(phi_{j,i}) =
/// c_j phi_{j,i}(pole) for a per-degree weight sequence c_j.
class Functional {
 public:
  static Functional dirac(const Manifold& m, const Point& p);
  /// Integral over the open hemisphere xi . x > 0 (surface measure).
  static Functional hemisphere(const Point& xi);
  /// Arc-length integral over the equator orthogonal to the pole.
  static Functional great_circle(const Point& pole);
  /// Integral over the circle arc [a, b), 0 <= a < b <= 2pi.
  static Functional arc(double a, double b);
  static Functional total_integral(const Manifold& m);

  FunctionalKind kind() const { return kind_; }
  const Manifold& manifold() const { return manifold_; }
  const Point& pole() const { return pole_; }
  double arc_start() const { return a_; }
  double arc_end() const { return b_; }

  /// Sobolev order t0 with F in H_{-t0}: d/2 + 1/4 for diracs, 0 for the
  /// integral kinds.
  double sobolev_order() const { return t0_; }

  bool is_zonal() const { return kind_ != FunctionalKind::arc; }

  /// Per-degree weight c_j of a zonal functional (dirac: 1 for every j).
  double zonal_weight(int degree) const;

  /// F(phi_{j,i}).
  double coefficient(SpectralIndex index) const;

  /// Pairing with a band-limited function: sum F(phi_{j,i}) c_{j,i}.
  double apply_to_series(const SpectralCoeffs& coeffs) const;

  /// Independent oracle: integrates f over the functional's support with a
  /// product rule of the given exact degree (diracs evaluate directly).
  /// When the band limit of f is declared, a resolution below twice the
  /// band sets the warning flag.
  QuadApplyResult apply_by_quadrature(
      const std::function<double(const Point&)>& f, int resolution,
      std::optional<int> band_limit = std::nullopt) const;

  /// Monotone majorant sum_i F(phi_{j,i})^2 <= C j^p for j >= 1, used by
  /// the truncation-degree bound.
  double degree_bound_constant() const;
  double degree_bound_exponent() const;

  /// sum_i F(phi_{j,i})^2 at j = 0.
  double degree_zero_sum_sq() const;

  std::string describe() const;

 private:
  Functional(FunctionalKind k, Manifold m) : kind_(k), manifold_(m) {}

  FunctionalKind kind_;
  Manifold manifold_;
  Point pole_{};
  double a_ = 0.0, b_ = 0.0;  // arc endpoints
  double t0_ = 0.0;
};

}  // namespace manispline
