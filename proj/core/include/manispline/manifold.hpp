#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace manispline {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kFourPi = 4.0 * kPi;

enum class ManifoldKind { circle, sphere2 };

/// A compact model manifold: the circle S^1 with arc-length measure or
/// the unit sphere S^2 with surface measure (both unnormalized).
struct Manifold {
  ManifoldKind kind;
  int dim;
  double total_measure;

  static Manifold circle() { return {ManifoldKind::circle, 1, kTwoPi}; }
  static Manifold sphere2() { return {ManifoldKind::sphere2, 2, kFourPi}; }

  bool is_circle() const { return kind == ManifoldKind::circle; }
  bool is_sphere() const { return kind == ManifoldKind::sphere2; }

  const char* name() const { return is_circle() ? "circle" : "sphere2"; }

  /// Largest geodesic distance between two points.
  double diameter() const { return kPi; }

  friend bool operator==(const Manifold& a, const Manifold& b) {
    return a.kind == b.kind;
  }
};

/// A point on a model manifold. Circle points carry an angle in [0, 2pi);
/// sphere points carry a unit vector in R^3.
struct Point {
  std::array<double, 3> x{0.0, 0.0, 0.0};

  static Point angle(double theta) {
    Point p;
    p.x[0] = theta;
    return p;
  }
  static Point vec(double a, double b, double c) {
    Point p;
    p.x = {a, b, c};
    return p;
  }
  static Point north_pole() { return vec(0.0, 0.0, 1.0); }

  double theta() const { return x[0]; }
  double norm3() const {
    return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  }
  double dot(const Point& o) const {
    return x[0] * o.x[0] + x[1] * o.x[1] + x[2] * o.x[2];
  }
  Point antipode(const Manifold& m) const {
    if (m.is_circle()) {
      double t = std::fmod(x[0] + kPi, kTwoPi);
      if (t < 0) t += kTwoPi;
      return angle(t);
    }
    return vec(-x[0], -x[1], -x[2]);
  }
};

/// Throws std::domain_error if the point does not lie on the manifold
/// (unit-norm violation > 1e-10 for the sphere).
inline void check_on_manifold(const Manifold& m, const Point& p) {
  if (m.is_sphere()) {
    if (std::fabs(p.norm3() - 1.0) > 1e-10)
      throw std::domain_error("point is not on the unit sphere (|x| = " +
                              std::to_string(p.norm3()) + ")");
  } else {
    if (!std::isfinite(p.theta()))
      throw std::domain_error("circle angle is not finite");
  }
}

/// Geodesic distance; the sphere branch clamps the dot product so that
/// roundoff at |x.y| -> 1 cannot leave acos's domain.
inline double geodesic_distance(const Manifold& m, const Point& a,
                                const Point& b) {
  if (m.is_circle()) {
    double d = std::fmod(std::fabs(a.theta() - b.theta()), kTwoPi);
    return std::min(d, kTwoPi - d);
  }
  double c = a.dot(b);
  c = std::max(-1.0, std::min(1.0, c));
  return std::acos(c);
}

/// Degree/order label of one Laplace-Beltrami eigenfunction.
/// Orders are 1-based: on the circle degree k >= 1 has orders
/// {1: cos, 2: sin}; on the sphere degree j has orders 1..2j+1 with
/// order 1 the zonal (m = 0) harmonic, order 2m the cos(m phi) harmonic
/// and order 2m+1 the sin(m phi) harmonic.
struct SpectralIndex {
  int degree = 0;
  int order = 1;

  friend auto operator<=>(const SpectralIndex&, const SpectralIndex&) = default;
};

struct Eigenpair {
  SpectralIndex index;
  double eigenvalue = 0.0;
};

}  // namespace manispline
