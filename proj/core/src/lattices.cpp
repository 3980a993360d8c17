#include "manispline/lattices.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "manispline/parallel.hpp"

namespace manispline {

namespace {

std::vector<Point> probe_grid(const Manifold& m, int n) {
  std::vector<Point> out;
  out.reserve(n);
  if (m.is_circle()) {
    // half-step offset keeps probe nodes off typical lattice nodes
    for (int k = 0; k < n; ++k)
      out.push_back(Point::angle(kTwoPi * (k + 0.5) / n));
    return out;
  }
  return fibonacci_sphere(n);
}

double covering_radius(const PointSet& ps, const std::vector<Point>& probe) {
  std::vector<double> worst_chunk((probe.size() + 1023) / 1024, 0.0);
  parallel_for(worst_chunk.size(), [&](std::size_t c) {
    double w = 0.0;
    std::size_t lo = c * 1024, hi = std::min(probe.size(), lo + 1024);
    for (std::size_t i = lo; i < hi; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : ps.points)
        best = std::min(best, geodesic_distance(ps.manifold, probe[i], p));
      w = std::max(w, best);
    }
    worst_chunk[c] = w;
  });
  double w = 0.0;
  for (double v : worst_chunk) w = std::max(w, v);
  return w;
}

int probe_count(const PointSet& ps) {
  return std::max(4096, 100 * static_cast<int>(ps.points.size()));
}

}  // namespace

void update_statistics(PointSet& ps) {
  const std::size_t n = ps.points.size();
  if (n == 0) throw std::invalid_argument("empty point set");
  if (n == 1) {
    ps.separation = ps.manifold.diameter();
    ps.rho_param = ps.manifold.diameter();
  } else {
    double sep = std::numeric_limits<double>::infinity();
    double rho = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      double nn = std::numeric_limits<double>::infinity();
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) continue;
        nn = std::min(nn,
                      geodesic_distance(ps.manifold, ps.points[a], ps.points[b]));
      }
      sep = std::min(sep, nn);
      rho = std::max(rho, nn);
    }
    ps.separation = sep;
    ps.rho_param = rho;
  }
  ps.mesh_norm = covering_radius(ps, probe_grid(ps.manifold, probe_count(ps)));
}

PointSet uniform_circle(int N) {
  if (N < 1) throw std::invalid_argument("uniform_circle: N >= 1");
  PointSet ps;
  ps.manifold = Manifold::circle();
  ps.points.reserve(N);
  for (int k = 0; k < N; ++k) ps.points.push_back(Point::angle(kTwoPi * k / N));
  // exact by construction
  ps.separation = kTwoPi / N;
  ps.mesh_norm = kPi / N;
  ps.rho_param = N == 1 ? kPi : kTwoPi / N;
  return ps;
}

std::vector<Point> fibonacci_sphere(int n) {
  std::vector<Point> out;
  out.reserve(n);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < n; ++k) {
    double z = 1.0 - 2.0 * (k + 0.5) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden * k;
    out.push_back(Point::vec(r * std::cos(phi), r * std::sin(phi), z));
  }
  return out;
}

PointSet farthest_point_sample(const Manifold& m, int N, std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("farthest_point_sample: N >= 1");
  PointSet ps;
  ps.manifold = m;

  int ncand = std::max(8192, 100 * N);
  std::vector<Point> cand = m.is_circle()
                                ? [&] {
                                    std::vector<Point> c;
                                    c.reserve(ncand);
                                    for (int k = 0; k < ncand; ++k)
                                      c.push_back(Point::angle(kTwoPi * k / ncand));
                                    return c;
                                  }()
                                : fibonacci_sphere(ncand);

  std::mt19937_64 rng(seed);
  std::size_t start = static_cast<std::size_t>(rng() % cand.size());
  ps.points.push_back(cand[start]);

  std::vector<double> mindist(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i)
    mindist[i] = geodesic_distance(m, cand[i], cand[start]);

  for (int k = 1; k < N; ++k) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < cand.size(); ++i)
      if (mindist[i] > mindist[best]) best = i;
    ps.points.push_back(cand[best]);
    for (std::size_t i = 0; i < cand.size(); ++i)
      mindist[i] = std::min(mindist[i], geodesic_distance(m, cand[i], cand[best]));
  }
  update_statistics(ps);
  return ps;
}

PointSet projective_farthest_point_sample(const Manifold& m, int N,
                                          std::uint64_t seed) {
  if (N < 1)
    throw std::invalid_argument("projective_farthest_point_sample: N >= 1");
  PointSet ps;
  ps.manifold = m;

  int ncand = std::max(8192, 100 * N);
  std::vector<Point> cand;
  if (m.is_circle()) {
    cand.reserve(ncand);
    for (int k = 0; k < ncand; ++k) cand.push_back(Point::angle(kPi * k / ncand));
  } else {
    cand = fibonacci_sphere(2 * ncand);
    // keep one representative per antipodal pair
    std::erase_if(cand, [](const Point& p) { return p.x[2] <= 0.0; });
  }

  auto pdist = [&](const Point& a, const Point& b) {
    double d = geodesic_distance(m, a, b);
    return std::min(d, kPi - d);
  };

  std::mt19937_64 rng(seed);
  std::size_t start = static_cast<std::size_t>(rng() % cand.size());
  ps.points.push_back(cand[start]);

  std::vector<double> mindist(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i)
    mindist[i] = pdist(cand[i], cand[start]);

  for (int k = 1; k < N; ++k) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < cand.size(); ++i)
      if (mindist[i] > mindist[best]) best = i;
    ps.points.push_back(cand[best]);
    for (std::size_t i = 0; i < cand.size(); ++i)
      mindist[i] = std::min(mindist[i], pdist(cand[i], cand[best]));
  }
  update_statistics(ps);
  return ps;
}

PointSet symmetrize(const PointSet& ps) {
  PointSet out = ps;
  for (const auto& p : ps.points) {
    Point a = p.antipode(ps.manifold);
    bool dup = false;
    for (const auto& q : out.points)
      if (geodesic_distance(ps.manifold, a, q) <= 1e-9) {
        dup = true;
        break;
      }
    if (!dup) out.points.push_back(a);
  }
  update_statistics(out);
  return out;
}

RhoLatticeReport validate_rho_lattice(const PointSet& ps, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("validate_rho_lattice: rho > 0");
  RhoLatticeReport r;
  r.min_pairwise = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < ps.points.size(); ++a)
    for (std::size_t b = a + 1; b < ps.points.size(); ++b)
      r.min_pairwise = std::min(
          r.min_pairwise,
          geodesic_distance(ps.manifold, ps.points[a], ps.points[b]));
  r.packing_ok = ps.points.size() < 2 || r.min_pairwise > rho;
  r.covering_radius =
      covering_radius(ps, probe_grid(ps.manifold,
                                     std::max(4096, probe_count(ps))));
  r.covering_ok = r.covering_radius <= rho;
  r.ok = r.packing_ok && r.covering_ok;
  return r;
}

}  // namespace manispline
