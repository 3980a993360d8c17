#pragma once

#include <functional>
#include <span>
#include <vector>

#include "manispline/manifold.hpp"

namespace manispline {

/// Laplace-Beltrami eigenvalue of the given degree: k^2 on the circle,
/// j(j+1) on the sphere.
double eigenvalue(const Manifold& m, int degree);

/// Dimension n_d(j) of the space of degree-j spherical harmonics on S^d.
/// For d = 1 returns 1 (j = 0) or 2. Factorials go through lgamma; the
/// result is rounded back to an integer and overflow raises.
long long multiplicity(int d, int degree);

long long multiplicity(const Manifold& m, int degree);

/// Number of basis functions of degree <= max_degree.
long long basis_count(const Manifold& m, int max_degree);

/// Legendre polynomial P_j(x) by the three-term recurrence.
double legendre_P(int degree, double x);

/// P_j(0), exact parity: zero for odd j.
double legendre_P0(int degree);

/// Fully normalized associated Legendre \bar P_j^m(x) (no Condon-Shortley
/// phase), normalized so that the real harmonics built from it are
/// orthonormal with respect to the surface measure of S^2.
double legendre_normalized(int degree, int m, double x);

/// Value of the real orthonormal basis function phi_{j,i} at a point.
double evaluate_basis(const Manifold& m, SpectralIndex index, const Point& p);

/// All basis values of degree <= max_degree at a point, in (degree, order)
/// order. Linear offset of degree j is j^2 on the sphere, 2j-1 (j >= 1) on
/// the circle. Costs O(max_degree^2) on the sphere.
std::vector<double> evaluate_basis_all(const Manifold& m, int max_degree,
                                       const Point& p);

/// Offset of degree j's first basis function in evaluate_basis_all order.
long long basis_offset(const Manifold& m, int degree);

/// sum_j a_j sum_i phi_{j,i}(x) phi_{j,i}(y), collapsed by the addition
/// theorem: a_0/(2pi) + sum_k a_k cos(k(tx-ty))/pi on the circle,
/// sum_j a_j (2j+1)/(4pi) P_j(x.y) on the sphere.
double zonal_kernel(const Manifold& m, std::span<const double> weights,
                    const Point& x, const Point& y);

struct QuadratureRule {
  Manifold manifold = Manifold::circle();
  std::vector<Point> nodes;
  std::vector<double> weights;
  int exact_degree = 0;

  double integrate(const std::function<double(const Point&)>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// Product rule that integrates products of basis functions exactly up to
/// combined degree exact_degree: uniform trapezoid on the circle,
/// Gauss-Legendre in the polar cosine times uniform azimuth on the sphere.
QuadratureRule quadrature_rule(const Manifold& m, int exact_degree);

/// Gauss-Legendre nodes/weights on [-1, 1] (Newton on P_n).
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace manispline
