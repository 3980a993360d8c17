#pragma once

#include <cstdint>
#include <vector>

#include "manispline/manifold.hpp"

namespace manispline {

/// Points on a manifold together with density statistics: separation
/// delta (min pairwise geodesic distance), mesh norm h (covering radius,
/// estimated on a probe grid), and the density parameter
/// rho = sup_nu inf_{mu != nu} dist (largest nearest-neighbor distance).
struct PointSet {
  Manifold manifold = Manifold::circle();
  std::vector<Point> points;
  double separation = 0.0;
  double mesh_norm = 0.0;
  double rho_param = 0.0;
};

/// Recomputes the three statistics from the points.
void update_statistics(PointSet& ps);

/// theta_k = 2 pi k / N; delta = 2 pi / N, h = pi / N.
PointSet uniform_circle(int N);

/// Golden-angle spiral grid on the sphere (probe/candidate grid helper).
std::vector<Point> fibonacci_sphere(int n);

/// Greedy farthest-point selection from a dense candidate grid, seeded
/// start; guarantees separation >= mesh norm up to grid resolution.
PointSet farthest_point_sample(const Manifold& m, int N, std::uint64_t seed);

/// Greedy farthest-point selection under the projective distance
/// min(d, pi - d), with every pick reported on the upper hemisphere
/// (positive z; angle in [0, pi) on the circle). Symmetrizing the result
/// keeps all 2N points separated by the projective separation, which a
/// plain farthest-point sample does not guarantee (a pick can land
/// arbitrarily close to another pick's antipode).
PointSet projective_farthest_point_sample(const Manifold& m, int N,
                                          std::uint64_t seed);

/// Union of the points and their antipodes, deduplicated at 1e-9.
PointSet symmetrize(const PointSet& ps);

struct RhoLatticeReport {
  bool ok = false;
  bool packing_ok = false;  // pairwise distances > rho
  bool covering_ok = false; // probe covering radius <= rho
  double min_pairwise = 0.0;
  double covering_radius = 0.0;
};

/// Checks the two-clause lattice property: open balls of radius rho/2
/// pairwise disjoint (strict pairwise distance > rho) and balls of radius
/// rho covering the manifold (probe-grid covering radius <= rho).
RhoLatticeReport validate_rho_lattice(const PointSet& ps, double rho);

}  // namespace manispline
