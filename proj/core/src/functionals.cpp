#include "manispline/functionals.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace manispline {

const char* functional_kind_name(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::dirac: return "dirac";
    case FunctionalKind::hemisphere: return "hemisphere";
    case FunctionalKind::great_circle: return "great_circle";
    case FunctionalKind::arc: return "arc";
    case FunctionalKind::total_integral: return "total_integral";
  }
  return "?";
}

Functional Functional::dirac(const Manifold& m, const Point& p) {
  check_on_manifold(m, p);
  Functional f(FunctionalKind::dirac, m);
  f.pole_ = p;
  f.t0_ = m.dim / 2.0 + 0.25;
  return f;
}

Functional Functional::hemisphere(const Point& xi) {
  Manifold m = Manifold::sphere2();
  check_on_manifold(m, xi);
  Functional f(FunctionalKind::hemisphere, m);
  f.pole_ = xi;
  return f;
}

Functional Functional::great_circle(const Point& pole) {
  Manifold m = Manifold::sphere2();
  check_on_manifold(m, pole);
  Functional f(FunctionalKind::great_circle, m);
  f.pole_ = pole;
  return f;
}

Functional Functional::arc(double a, double b) {
  if (!(0.0 <= a && a < b && b <= kTwoPi))
    throw std::domain_error("arc: require 0 <= a < b <= 2pi");
  Functional f(FunctionalKind::arc, Manifold::circle());
  f.a_ = a;
  f.b_ = b;
  return f;
}

Functional Functional::total_integral(const Manifold& m) {
  Functional f(FunctionalKind::total_integral, m);
  f.pole_ = m.is_circle() ? Point::angle(0.0) : Point::north_pole();
  return f;
}

double Functional::zonal_weight(int degree) const {
  switch (kind_) {
    case FunctionalKind::dirac:
      return 1.0;
    case FunctionalKind::total_integral:
      return degree == 0 ? manifold_.total_measure : 0.0;
    case FunctionalKind::hemisphere: {
      // Funk-Hecke: c_j = 2 pi I_j, I_j = (P_{j-1}(0) - P_{j+1}(0)) / (2j+1).
      if (degree == 0) return kTwoPi;
      if (degree % 2 == 0) return 0.0;
      double ij = (legendre_P0(degree - 1) - legendre_P0(degree + 1)) /
                  (2.0 * degree + 1.0);
      return kTwoPi * ij;
    }
    case FunctionalKind::great_circle:
      return kTwoPi * legendre_P0(degree);
    case FunctionalKind::arc:
      throw std::logic_error("arc functional is not zonal");
  }
  return 0.0;
}

double Functional::coefficient(SpectralIndex index) const {
  if (kind_ == FunctionalKind::arc) {
    int k = index.degree;
    if (k == 0) return (b_ - a_) / std::sqrt(kTwoPi);
    double inv = 1.0 / (k * std::sqrt(kPi));
    if (index.order == 1) return (std::sin(k * b_) - std::sin(k * a_)) * inv;
    return (std::cos(k * a_) - std::cos(k * b_)) * inv;
  }
  double c = zonal_weight(index.degree);
  if (c == 0.0) return 0.0;
  return c * evaluate_basis(manifold_, index, pole_);
}

double Functional::apply_to_series(const SpectralCoeffs& coeffs) const {
  double s = 0.0;
  for (const auto& [idx, v] : coeffs) s += coefficient(idx) * v;
  return s;
}

namespace {

// Orthonormal frame with third axis along xi.
void frame_for(const Point& xi, Point& e1, Point& e2) {
  double ax = std::fabs(xi.x[0]), az = std::fabs(xi.x[2]);
  Point u = az < 0.9 ? Point::vec(0, 0, 1) : Point::vec(1, 0, 0);
  (void)ax;
  // e1 = normalize(u x xi)
  double cx = u.x[1] * xi.x[2] - u.x[2] * xi.x[1];
  double cy = u.x[2] * xi.x[0] - u.x[0] * xi.x[2];
  double cz = u.x[0] * xi.x[1] - u.x[1] * xi.x[0];
  double n = std::sqrt(cx * cx + cy * cy + cz * cz);
  e1 = Point::vec(cx / n, cy / n, cz / n);
  // e2 = xi x e1
  e2 = Point::vec(xi.x[1] * e1.x[2] - xi.x[2] * e1.x[1],
                  xi.x[2] * e1.x[0] - xi.x[0] * e1.x[2],
                  xi.x[0] * e1.x[1] - xi.x[1] * e1.x[0]);
}

}  // namespace

QuadApplyResult Functional::apply_by_quadrature(
    const std::function<double(const Point&)>& f, int resolution,
    std::optional<int> band_limit) const {
  QuadApplyResult r;
  r.resolution_warning = band_limit && resolution < 2 * (*band_limit);
  switch (kind_) {
    case FunctionalKind::dirac:
      r.value = f(pole_);
      r.resolution_warning = false;
      return r;
    case FunctionalKind::total_integral:
      r.value = quadrature_rule(manifold_, std::max(resolution, 0)).integrate(f);
      return r;
    case FunctionalKind::arc: {
      std::vector<double> gx, gw;
      gauss_legendre(std::max(resolution + 1, 2), gx, gw);
      double mid = 0.5 * (a_ + b_), half = 0.5 * (b_ - a_);
      double s = 0.0;
      for (std::size_t i = 0; i < gx.size(); ++i)
        s += gw[i] * f(Point::angle(mid + half * gx[i]));
      r.value = half * s;
      return r;
    }
    case FunctionalKind::great_circle: {
      Point e1, e2;
      frame_for(pole_, e1, e2);
      int n = std::max(resolution + 1, 4);
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        double phi = kTwoPi * k / n;
        double c = std::cos(phi), sn = std::sin(phi);
        s += f(Point::vec(c * e1.x[0] + sn * e2.x[0],
                          c * e1.x[1] + sn * e2.x[1],
                          c * e1.x[2] + sn * e2.x[2]));
      }
      r.value = s * kTwoPi / n;
      return r;
    }
    case FunctionalKind::hemisphere: {
      // Spherical cap rule on xi . x > 0: Gauss-Legendre in the cap cosine
      // times uniform azimuth, rotated so the cap axis is xi.
      Point e1, e2;
      frame_for(pole_, e1, e2);
      int n_polar = std::max(resolution / 2 + 1, 2);
      int n_az = std::max(resolution + 1, 4);
      std::vector<double> gx, gw;
      gauss_legendre(n_polar, gx, gw);
      double s = 0.0;
      for (int a = 0; a < n_polar; ++a) {
        double u = 0.5 * (gx[a] + 1.0);  // cap cosine in (0, 1)
        double w = 0.5 * gw[a];
        double rho = std::sqrt(std::max(0.0, 1.0 - u * u));
        for (int b = 0; b < n_az; ++b) {
          double phi = kTwoPi * b / n_az;
          double c = std::cos(phi), sn = std::sin(phi);
          Point p = Point::vec(
              rho * (c * e1.x[0] + sn * e2.x[0]) + u * pole_.x[0],
              rho * (c * e1.x[1] + sn * e2.x[1]) + u * pole_.x[1],
              rho * (c * e1.x[2] + sn * e2.x[2]) + u * pole_.x[2]);
          s += w * kTwoPi / n_az * f(p);
        }
      }
      r.value = s;
      return r;
    }
  }
  throw std::logic_error("unreachable");
}

double Functional::degree_bound_constant() const {
  switch (kind_) {
    case FunctionalKind::dirac:
      return manifold_.is_circle() ? 1.0 / kPi : 3.0 / kFourPi;
    case FunctionalKind::hemisphere:
      return kTwoPi;
    case FunctionalKind::great_circle:
      return 3.0 * kPi;
    case FunctionalKind::arc:
      return 8.0 / kPi;
    case FunctionalKind::total_integral:
      return 0.0;
  }
  return 0.0;
}

double Functional::degree_bound_exponent() const {
  switch (kind_) {
    case FunctionalKind::dirac:
      return manifold_.is_circle() ? 0.0 : 1.0;
    case FunctionalKind::hemisphere:
      return -1.0;
    case FunctionalKind::great_circle:
      return 0.0;
    case FunctionalKind::arc:
      return -2.0;
    case FunctionalKind::total_integral:
      return 0.0;
  }
  return 0.0;
}

double Functional::degree_zero_sum_sq() const {
  double c0 = coefficient({0, 1});
  return c0 * c0;
}

std::string Functional::describe() const {
  std::ostringstream os;
  os << functional_kind_name(kind_);
  if (kind_ == FunctionalKind::arc) {
    os << "[" << a_ << "," << b_ << ")";
  } else if (kind_ != FunctionalKind::total_integral) {
    if (manifold_.is_circle())
      os << "(theta=" << pole_.theta() << ")";
    else
      os << "(" << pole_.x[0] << "," << pole_.x[1] << "," << pole_.x[2] << ")";
  }
  return os.str();
}

}  // namespace manispline
