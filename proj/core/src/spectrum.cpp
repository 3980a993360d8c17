#include "manispline/spectrum.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace manispline {

double eigenvalue(const Manifold& m, int degree) {
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");
  double j = static_cast<double>(degree);
  return m.is_circle() ? j * j : j * (j + 1.0);
}

long long multiplicity(int d, int degree) {
  if (d < 1 || degree < 0)
    throw std::invalid_argument("multiplicity: require d >= 1, degree >= 0");
  if (d == 1) return degree == 0 ? 1 : 2;
  if (degree == 0) return 1;
  // n_d(j) = (d + 2j - 1) (d + j - 2)! / (j! (d - 1)!)
  double lg = std::log(static_cast<double>(d + 2 * degree - 1)) +
              std::lgamma(static_cast<double>(d + degree - 1)) -
              std::lgamma(static_cast<double>(degree + 1)) -
              std::lgamma(static_cast<double>(d));
  if (lg > std::log(9.0e18))
    throw std::overflow_error("multiplicity exceeds integer range");
  return std::llround(std::exp(lg));
}

long long multiplicity(const Manifold& m, int degree) {
  return multiplicity(m.dim, degree);
}

long long basis_count(const Manifold& m, int max_degree) {
  if (m.is_circle()) return 2LL * max_degree + 1;
  return (max_degree + 1LL) * (max_degree + 1LL);
}

long long basis_offset(const Manifold& m, int degree) {
  if (m.is_circle()) return degree == 0 ? 0 : 2LL * degree - 1;
  return static_cast<long long>(degree) * degree;
}

double legendre_P(int degree, double x) {
  if (degree < 0) throw std::invalid_argument("legendre_P: degree >= 0");
  if (std::fabs(x) > 1.0 + 1e-14)
    throw std::domain_error("legendre_P: |x| <= 1 required");
  if (degree == 0) return 1.0;
  double pm1 = 1.0, p = x;
  for (int j = 2; j <= degree; ++j) {
    double pj = ((2.0 * j - 1.0) * x * p - (j - 1.0) * pm1) / j;
    pm1 = p;
    p = pj;
  }
  return p;
}

double legendre_P0(int degree) {
  if (degree % 2 == 1) return 0.0;
  int h = degree / 2;
  // P_{2h}(0) = (-1)^h Gamma(h + 1/2) / (sqrt(pi) h!)
  double lg = std::lgamma(h + 0.5) - 0.5 * std::log(kPi) -
              std::lgamma(h + 1.0);
  double v = std::exp(lg);
  return (h % 2 == 0) ? v : -v;
}

namespace {

// Forward recurrence in degree for fixed m, fully normalized.
// seed: \bar P_m^m = sqrt((2m+1)/(4pi)) sqrt((2m-1)!!/(2m)!!) sin^m(theta)
double normalized_pmm(int m, double sin_theta) {
  double v = std::sqrt(1.0 / kFourPi);
  for (int k = 1; k <= m; ++k)
    v *= std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * sin_theta;
  return v;
}

double recurrence_a(int j, int m) {
  return std::sqrt((4.0 * j * j - 1.0) /
                   (static_cast<double>(j) * j - static_cast<double>(m) * m));
}

}  // namespace

double legendre_normalized(int degree, int m, double x) {
  if (m < 0 || m > degree)
    throw std::invalid_argument("legendre_normalized: 0 <= m <= degree");
  if (std::fabs(x) > 1.0 + 1e-14)
    throw std::domain_error("legendre_normalized: |x| <= 1 required");
  double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  double pmm = normalized_pmm(m, s);
  if (degree == m) return pmm;
  double pm1 = pmm;
  double p = std::sqrt(2.0 * m + 3.0) * x * pmm;
  for (int j = m + 2; j <= degree; ++j) {
    double aj = recurrence_a(j, m);
    double pj = aj * (x * p - pm1 / recurrence_a(j - 1, m));
    pm1 = p;
    p = pj;
  }
  return p;
}

double evaluate_basis(const Manifold& m, SpectralIndex index, const Point& p) {
  check_on_manifold(m, p);
  int j = index.degree;
  int i = index.order;
  if (j < 0 || i < 1 || i > multiplicity(m, j))
    throw std::invalid_argument("evaluate_basis: order outside multiplicity");
  if (m.is_circle()) {
    if (j == 0) return 1.0 / std::sqrt(kTwoPi);
    double c = 1.0 / std::sqrt(kPi);
    return i == 1 ? c * std::cos(j * p.theta()) : c * std::sin(j * p.theta());
  }
  double z = p.x[2];
  if (i == 1) return legendre_normalized(j, 0, z);
  int mm = i / 2;
  double phi = std::atan2(p.x[1], p.x[0]);
  double plm = legendre_normalized(j, mm, z);
  double ang = (i % 2 == 0) ? std::cos(mm * phi) : std::sin(mm * phi);
  return std::sqrt(2.0) * plm * ang;
}

std::vector<double> evaluate_basis_all(const Manifold& m, int max_degree,
                                       const Point& p) {
  check_on_manifold(m, p);
  std::vector<double> out(static_cast<std::size_t>(basis_count(m, max_degree)));
  if (m.is_circle()) {
    out[0] = 1.0 / std::sqrt(kTwoPi);
    double c = 1.0 / std::sqrt(kPi);
    for (int k = 1; k <= max_degree; ++k) {
      out[2 * k - 1] = c * std::cos(k * p.theta());
      out[2 * k] = c * std::sin(k * p.theta());
    }
    return out;
  }
  double z = p.x[2];
  double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  double phi = std::atan2(p.x[1], p.x[0]);
  const double r2 = std::sqrt(2.0);
  // Column-wise over m: one upward degree recurrence per order.
  for (int mm = 0; mm <= max_degree; ++mm) {
    double cm = (mm == 0) ? 0.0 : std::cos(mm * phi);
    double sm = (mm == 0) ? 0.0 : std::sin(mm * phi);
    double pm1 = 0.0;
    double pj = normalized_pmm(mm, s);
    for (int j = mm; j <= max_degree; ++j) {
      std::size_t base = static_cast<std::size_t>(j) * j;
      if (mm == 0) {
        out[base] = pj;
      } else {
        out[base + 2 * mm - 1] = r2 * pj * cm;
        out[base + 2 * mm] = r2 * pj * sm;
      }
      // advance to degree j+1
      double pnext;
      if (j == mm) {
        pnext = std::sqrt(2.0 * mm + 3.0) * z * pj;
      } else {
        double aj = recurrence_a(j + 1, mm);
        pnext = aj * (z * pj - pm1 / recurrence_a(j, mm));
      }
      pm1 = pj;
      pj = pnext;
    }
  }
  return out;
}

double zonal_kernel(const Manifold& m, std::span<const double> weights,
                    const Point& x, const Point& y) {
  if (weights.empty()) return 0.0;
  if (m.is_circle()) {
    double dt = x.theta() - y.theta();
    double s = weights[0] / kTwoPi;
    for (std::size_t k = 1; k < weights.size(); ++k)
      s += weights[k] * std::cos(static_cast<double>(k) * dt) / kPi;
    return s;
  }
  double c = std::max(-1.0, std::min(1.0, x.dot(y)));
  double s = weights[0] / kFourPi;
  double pm1 = 1.0, p = c;
  for (std::size_t j = 1; j < weights.size(); ++j) {
    s += weights[j] * (2.0 * j + 1.0) / kFourPi * p;
    double pj = ((2.0 * j + 1.0) * c * p - static_cast<double>(j) * pm1) /
                (j + 1.0);
    pm1 = p;
    p = pj;
  }
  return s;
}

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double pm1 = 1.0, p = x;
      for (int j = 2; j <= n; ++j) {
        double pj = ((2.0 * j - 1.0) * x * p - (j - 1.0) * pm1) / j;
        pm1 = p;
        p = pj;
      }
      dp = n * (x * p - pm1) / (x * x - 1.0);
      double dx = p / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    double pm1 = 1.0, p = x;
    for (int j = 2; j <= n; ++j) {
      double pj = ((2.0 * j - 1.0) * x * p - (j - 1.0) * pm1) / j;
      pm1 = p;
      p = pj;
    }
    dp = n * (x * p - pm1) / (x * x - 1.0);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

QuadratureRule quadrature_rule(const Manifold& m, int exact_degree) {
  if (exact_degree < 0)
    throw std::invalid_argument("quadrature_rule: exact_degree >= 0");
  QuadratureRule rule;
  rule.manifold = m;
  rule.exact_degree = exact_degree;
  if (m.is_circle()) {
    int n = exact_degree + 1;
    rule.nodes.reserve(n);
    rule.weights.assign(n, kTwoPi / n);
    for (int k = 0; k < n; ++k)
      rule.nodes.push_back(Point::angle(kTwoPi * k / n));
    return rule;
  }
  int n_polar = exact_degree / 2 + 1;
  int n_az = exact_degree + 1;
  std::vector<double> gx, gw;
  gauss_legendre(n_polar, gx, gw);
  rule.nodes.reserve(static_cast<std::size_t>(n_polar) * n_az);
  rule.weights.reserve(static_cast<std::size_t>(n_polar) * n_az);
  for (int a = 0; a < n_polar; ++a) {
    double z = gx[a];
    double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int b = 0; b < n_az; ++b) {
      double phi = kTwoPi * b / n_az;
      rule.nodes.push_back(Point::vec(s * std::cos(phi), s * std::sin(phi), z));
      rule.weights.push_back(gw[a] * kTwoPi / n_az);
    }
  }
  return rule;
}

}  // namespace manispline
