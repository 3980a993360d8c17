#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "manispline/lattices.hpp"
#include "manispline/spline.hpp"

using namespace manispline;

namespace {

SplineProblem circle_dirac_t1() {
  SplineProblem pr;
  pr.manifold = Manifold::circle();
  pr.smoothness = 1.0;
  pr.functionals.push_back(Functional::dirac(pr.manifold, Point::angle(0)));
  pr.values.push_back(1.0);
  return pr;
}

// Brute-force Gram entry: double sum over (j, i) up to J.
double gram_brute(const SplineProblem& pr, int J, int nu, int mu) {
  const Manifold& m = pr.manifold;
  double s = 0.0;
  for (int j = 0; j <= J; ++j) {
    double w = std::pow(1.0 + eigenvalue(m, j), -pr.smoothness);
    for (int i = 1; i <= multiplicity(m, j); ++i)
      s += w * pr.functionals[nu].coefficient({j, i}) *
           pr.functionals[mu].coefficient({j, i});
  }
  return s;
}

}  // namespace

TEST_CASE("truncation_degree pinned values and monotonicity") {
  auto pr = circle_dirac_t1();
  // exact tail 1/(pi J) crosses 1e-8 at J = ceil(1e8/pi) = 31830989; the
  // majorant reproduces it exactly for this flat-coefficient functional
  CHECK(truncation_degree(pr, 1e-8) == 31830989);

  pr.smoothness = 3.0;
  int j10 = truncation_degree(pr, 1e-10);
  CHECK(j10 == 58);
  CHECK(truncation_degree(pr, 1e-8) <= j10);

  SplineProblem ps;
  ps.manifold = Manifold::sphere2();
  ps.smoothness = 3.0;
  ps.functionals.push_back(Functional::hemisphere(Point::north_pole()));
  ps.functionals.push_back(Functional::hemisphere(Point::vec(1, 0, 0)));
  ps.values = {0.0, 0.0};
  int J = truncation_degree(ps, 1e-10);
  CHECK(J >= 1);
  CHECK(truncation_degree(ps, 1e-6) <= J);
}

TEST_CASE("truncation_degree rejects non-summable series") {
  auto pr = circle_dirac_t1();
  pr.smoothness = 0.4;  // 2t <= 1: tail sum of (1+k^2)^{-t} diverges
  CHECK_THROWS_AS(truncation_degree(pr, 1e-8), std::invalid_argument);
}

TEST_CASE("assemble_gram closed forms") {
  SplineProblem pr;
  pr.manifold = Manifold::sphere2();
  pr.smoothness = 2.5;
  pr.functionals.push_back(Functional::total_integral(pr.manifold));
  pr.values.push_back(0.0);
  auto rep = assemble_gram(pr);
  CHECK(rep.matrix(0, 0) == doctest::Approx(4 * kPi).epsilon(1e-13));

  // circle t=1 single dirac: beta = coth(pi)/2 (closed-form kernel)
  auto rc = assemble_gram(circle_dirac_t1());
  CHECK(rc.closed_form);
  CHECK(rc.matrix(0, 0) ==
        doctest::Approx(1.0 / (2.0 * std::tanh(kPi))).epsilon(1e-12));

  // antipodal pair: off-diagonal 1/(2 sinh pi)
  auto pr2 = circle_dirac_t1();
  pr2.functionals.push_back(Functional::dirac(pr2.manifold, Point::angle(kPi)));
  pr2.values.push_back(0.0);
  auto r2 = assemble_gram(pr2);
  CHECK(r2.matrix(0, 1) ==
        doctest::Approx(1.0 / (2.0 * std::sinh(kPi))).epsilon(1e-12));
  CHECK(r2.matrix(0, 1) == r2.matrix(1, 0));
}

TEST_CASE("Gram zonal fast path equals brute-force double sum") {
  const int J = 40;
  SplineProblem pr;
  pr.manifold = Manifold::sphere2();
  pr.smoothness = 2.0;
  pr.truncation = Truncation::degree(J);
  auto pts = fibonacci_sphere(5);
  for (const auto& p : pts)
    pr.functionals.push_back(Functional::dirac(pr.manifold, p));
  pr.functionals.push_back(Functional::hemisphere(pts[0]));
  pr.functionals.push_back(Functional::great_circle(pts[1]));
  pr.functionals.push_back(Functional::total_integral(pr.manifold));
  pr.values.assign(pr.functionals.size(), 0.0);

  auto rep = assemble_gram(pr);
  int N = static_cast<int>(pr.functionals.size());
  for (int a = 0; a < N; ++a)
    for (int b = a; b < N; ++b) {
      double brute = gram_brute(pr, J, a, b);
      CHECK(std::fabs(rep.matrix(a, b) - brute) <=
            1e-11 * (1.0 + std::fabs(brute)));
    }
  // symmetry and positive definiteness
  CHECK(rep.min_eigenvalue > 0.0);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      CHECK(std::fabs(rep.matrix(a, b) - rep.matrix(b, a)) <=
            1e-14 * (1.0 + std::fabs(rep.matrix(a, b))));
}

TEST_CASE("circle arc Gram matches brute force too") {
  const int J = 40;
  SplineProblem pr;
  pr.manifold = Manifold::circle();
  pr.smoothness = 1.5;
  pr.truncation = Truncation::degree(J);
  pr.functionals.push_back(Functional::arc(0.0, 1.0));
  pr.functionals.push_back(Functional::dirac(pr.manifold, Point::angle(2.0)));
  pr.values = {0.0, 0.0};
  auto rep = assemble_gram(pr);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double brute = gram_brute(pr, J, a, b);
      CHECK(std::fabs(rep.matrix(a, b) - brute) <=
            1e-11 * (1.0 + std::fabs(brute)));
    }
}

TEST_CASE("closed-form circle dirac spline, t = 1") {
  auto pr = circle_dirac_t1();
  CHECK(closed_form_applicable(pr));
  auto s = solve_spline(pr);
  CHECK(s.closed_form());
  const double alpha = 2.0 * std::tanh(kPi);
  CHECK(std::fabs(s.alpha()[0] - alpha) < 1e-9);
  CHECK(std::fabs(s.evaluate(Point::angle(0)) - 1.0) < 1e-9);
  CHECK(std::fabs(s.evaluate(Point::angle(kPi)) - 1.0 / std::cosh(kPi)) < 1e-9);
  CHECK(std::fabs(s.norm_identity_sq() - alpha) < 1e-9);
  CHECK(std::fabs(sobolev_norm(s) - std::sqrt(alpha)) < 1e-9);
  // kernel endpoints
  CHECK(circle_t1_kernel(0.0) ==
        doctest::Approx(1.0 / (2.0 * std::tanh(kPi))).epsilon(1e-14));
  CHECK(circle_t1_kernel(kPi) ==
        doctest::Approx(1.0 / (2.0 * std::sinh(kPi))).epsilon(1e-14));
}

TEST_CASE("closed_form_applicable boundary conditions") {
  auto pr = circle_dirac_t1();
  CHECK(closed_form_applicable(pr));
  auto p2 = pr;
  p2.smoothness = 1.5;
  CHECK(!closed_form_applicable(p2));
  auto p3 = pr;
  p3.truncation = Truncation::degree(100);
  CHECK(!closed_form_applicable(p3));
  auto p4 = pr;
  p4.functionals.push_back(Functional::arc(0, 1));
  p4.values.push_back(0.0);
  CHECK(!closed_form_applicable(p4));
  SplineProblem p5;
  p5.manifold = Manifold::sphere2();
  p5.smoothness = 1.0;
  p5.functionals.push_back(
      Functional::dirac(p5.manifold, Point::north_pole()));
  p5.values.push_back(1.0);
  CHECK(!closed_form_applicable(p5));
}

TEST_CASE("truncated solve approaches the closed form") {
  auto pr = circle_dirac_t1();
  pr.truncation = Truncation::degree(100000);
  auto s = solve_spline(pr);
  CHECK(!s.closed_form());
  // tail of the Neumann series at J = 1e5 is ~ 1/(pi J) ~ 3.2e-6
  // alpha error decays like the truncation tail of the Gram entry, ~4/(pi*J)
  CHECK(std::fabs(s.alpha()[0] - 2.0 * std::tanh(kPi)) < 5e-5);
  CHECK(std::fabs(s.evaluate(Point::angle(kPi)) - 1.0 / std::cosh(kPi)) < 5e-5);
}

TEST_CASE("total_integral spline is the constant function") {
  const double c = 2.7;
  SplineProblem pr;
  pr.manifold = Manifold::sphere2();
  pr.smoothness = 3.0;
  pr.functionals.push_back(Functional::total_integral(pr.manifold));
  pr.values.push_back(c);
  auto s = solve_spline(pr);
  CHECK(s.alpha()[0] == doctest::Approx(c / (4 * kPi)).epsilon(1e-12));
  CHECK(s.fourier_at({0, 1}) ==
        doctest::Approx(c / std::sqrt(4 * kPi)).epsilon(1e-12));
  CHECK(s.evaluate(Point::vec(0, 0.6, 0.8)) ==
        doctest::Approx(c / (4 * kPi)).epsilon(1e-12));
  // norm is independent of t for the constant
  CHECK(sobolev_norm(s) ==
        doctest::Approx(c / std::sqrt(4 * kPi)).epsilon(1e-12));
}

TEST_CASE("zero values give the zero spline") {
  SplineProblem pr;
  pr.manifold = Manifold::sphere2();
  pr.smoothness = 2.0;
  for (const auto& p : fibonacci_sphere(6))
    pr.functionals.push_back(Functional::dirac(pr.manifold, p));
  pr.values.assign(6, 0.0);
  auto s = solve_spline(pr);
  for (int nu = 0; nu < 6; ++nu) CHECK(s.alpha()[nu] == 0.0);
  CHECK(s.evaluate(Point::north_pole()) == 0.0);
  CHECK(sobolev_norm(s) == 0.0);
}

TEST_CASE("evaluation equals the truncated Fourier series") {
  SplineProblem pr;
  pr.manifold = Manifold::sphere2();
  pr.smoothness = 2.0;
  pr.truncation = Truncation::degree(24);
  auto pts = fibonacci_sphere(7);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& p : pts) {
    pr.functionals.push_back(Functional::dirac(pr.manifold, p));
    pr.values.push_back(u(rng));
  }
  auto s = solve_spline(pr);
  auto fmap = s.fourier_map();
  for (const auto& q : fibonacci_sphere(17)) {
    double direct = s.evaluate(q);
    double series = evaluate_series(pr.manifold, fmap, q);
    CHECK(std::fabs(direct - series) <= 1e-12 * (1.0 + std::fabs(direct)));
  }
  // interpolation residual invariant
  double vmax = 0.0;
  for (double v : pr.values) vmax = std::max(vmax, std::fabs(v));
  CHECK(s.residual_max() <= 1e-8 * (1.0 + vmax));
  // Fourier coefficients satisfy c = (1+lambda)^{-t} sum alpha F(phi)
  for (const auto& [idx, c] : fmap) {
    double acc = 0.0;
    for (std::size_t nu = 0; nu < pr.functionals.size(); ++nu)
      acc += s.alpha()[nu] * pr.functionals[nu].coefficient(idx);
    acc *= std::pow(1.0 + eigenvalue(pr.manifold, idx.degree), -pr.smoothness);
    CHECK(std::fabs(c - acc) <= 1e-13 * (1.0 + std::fabs(c)));
  }
}

TEST_CASE("norm identity and sobolev_inner") {
  SplineProblem pr;
  pr.manifold = Manifold::circle();
  pr.smoothness = 2.0;
  pr.truncation = Truncation::degree(60);
  for (int k = 0; k < 5; ++k) {
    pr.functionals.push_back(
        Functional::dirac(pr.manifold, Point::angle(0.3 + 1.1 * k)));
    pr.values.push_back(std::sin(1.0 + k));
  }
  auto s = solve_spline(pr);

  // spectral norm vs alpha . v
  double spectral = 0.0;
  for (const auto& [idx, c] : s.fourier_map())
    spectral += std::pow(1.0 + eigenvalue(pr.manifold, idx.degree),
                         pr.smoothness) *
                c * c;
  CHECK(std::fabs(spectral - s.norm_identity_sq()) <=
        1e-10 * (1.0 + spectral));

  // inner product with a single eigenfunction
  SpectralCoeffs e{{{3, 2}, 1.0}};
  CHECK(s.sobolev_inner(e) ==
        doctest::Approx(std::pow(1.0 + 9.0, 2.0) * s.fourier_at({3, 2}))
            .epsilon(1e-12));

  // inner product with itself
  CHECK(s.sobolev_inner(s.fourier_map()) ==
        doctest::Approx(spectral).epsilon(1e-12));

  // distributional identity: <s, g>_t = sum alpha F(g)
  SpectralCoeffs g{{{1, 1}, 0.4}, {{2, 2}, -0.9}, {{5, 1}, 0.2}};
  double rhs = 0.0;
  for (std::size_t nu = 0; nu < pr.functionals.size(); ++nu)
    rhs += s.alpha()[nu] * pr.functionals[nu].apply_to_series(g);
  CHECK(std::fabs(s.sobolev_inner(g) - rhs) <= 1e-10 * (1.0 + std::fabs(rhs)));
}

TEST_CASE("lagrangian basis") {
  Manifold m = Manifold::sphere2();
  auto pts = farthest_point_sample(m, 8, 17).points;
  std::vector<Functional> fs;
  for (const auto& p : pts) fs.push_back(Functional::dirac(m, p));
  auto tr = Truncation::degree(96);
  auto basis = lagrangian_basis(m, fs, 2.0, tr);
  REQUIRE(basis.size() == 8);
  for (std::size_t nu = 0; nu < 8; ++nu)
    for (std::size_t mu = 0; mu < 8; ++mu) {
      double v = fs[mu].apply_to_series(basis[nu].fourier_map());
      CHECK(std::fabs(v - (nu == mu ? 1.0 : 0.0)) < 1e-8);
    }

  // superposition: solve with arbitrary v equals sum v_nu l^nu
  SplineProblem pr;
  pr.manifold = m;
  pr.smoothness = 2.0;
  pr.functionals = fs;
  pr.truncation = tr;
  for (int nu = 0; nu < 8; ++nu) pr.values.push_back(0.1 * nu - 0.3);
  auto s = solve_spline(pr);
  auto sm = s.fourier_map();
  for (const auto& [idx, c] : sm) {
    double acc = 0.0;
    for (int nu = 0; nu < 8; ++nu)
      acc += pr.values[nu] * basis[nu].fourier_at(idx);
    CHECK(std::fabs(c - acc) <= 1e-10 * (1.0 + std::fabs(c)));
  }

  // N = 1 case: equals solve_spline with v = 1
  auto one = lagrangian_basis(m, {fs[0]}, 2.0, tr);
  SplineProblem p1;
  p1.manifold = m;
  p1.smoothness = 2.0;
  p1.functionals = {fs[0]};
  p1.values = {1.0};
  p1.truncation = tr;
  auto s1 = solve_spline(p1);
  CHECK(one[0].alpha()[0] == doctest::Approx(s1.alpha()[0]).epsilon(1e-14));
}

TEST_CASE("interpolate_function idempotence and constants") {
  Manifold m = Manifold::circle();
  auto tr = Truncation::degree(30);
  std::vector<Functional> fs;
  for (int k = 0; k < 4; ++k)
    fs.push_back(Functional::dirac(m, Point::angle(0.2 + 1.5 * k)));

  SplineProblem pr;
  pr.manifold = m;
  pr.smoothness = 2.0;
  pr.functionals = fs;
  pr.values = {1.0, -0.5, 0.25, 2.0};
  pr.truncation = tr;
  auto s0 = solve_spline(pr);
  auto f = s0.fourier_map();

  auto s1 = interpolate_function(m, f, fs, 2.0, tr);
  auto f1 = s1.fourier_map();
  for (const auto& [idx, c] : f)
    CHECK(std::fabs(f1.at(idx) - c) <= 1e-9 * (1.0 + std::fabs(c)));

  // constant target with the total-integral functional is reproduced exactly
  SpectralCoeffs konst{{{0, 1}, 1.7}};
  auto sc = interpolate_function(m, konst, {Functional::total_integral(m)},
                                 3.0, Truncation::degree(10));
  CHECK(sc.fourier_at({0, 1}) == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(std::fabs(sc.fourier_at({2, 1})) < 1e-14);
}

TEST_CASE("odd target, single symmetric hemisphere pair: spline is odd") {
  Manifold m = Manifold::sphere2();
  Point p = Point::vec(0.48, -0.6, 0.64);
  SpectralCoeffs f{{{1, 1}, 0.5}, {{1, 3}, -0.3}, {{3, 2}, 0.7}};
  auto s = interpolate_function(
      m, f, {Functional::hemisphere(p), Functional::hemisphere(p.antipode(m))},
      3.0, Truncation::degree(24));
  for (const auto& [idx, c] : s.fourier_map())
    if (idx.degree % 2 == 0) CHECK(std::fabs(c) <= 1e-10);
}

TEST_CASE("singular Gram raises a descriptive error") {
  SplineProblem pr;
  pr.manifold = Manifold::sphere2();
  pr.smoothness = 2.0;
  pr.functionals.push_back(Functional::dirac(pr.manifold, Point::north_pole()));
  pr.functionals.push_back(Functional::dirac(pr.manifold, Point::north_pole()));
  pr.values = {1.0, 1.0};
  CHECK_THROWS_AS(solve_spline(pr), SingularGramError);
  try {
    solve_spline(pr);
  } catch (const SingularGramError& e) {
    CHECK(e.first == 0);
    CHECK(e.second == 1);
    CHECK(std::string(e.what()).find("dirac") != std::string::npos);
  }

  // antipodal great-circle poles define the same functional
  SplineProblem pg;
  pg.manifold = Manifold::sphere2();
  pg.smoothness = 2.0;
  pg.functionals.push_back(Functional::great_circle(Point::north_pole()));
  pg.functionals.push_back(
      Functional::great_circle(Point::vec(0.0, 0.0, -1.0)));
  pg.values = {1.0, 1.0};
  CHECK_THROWS_AS(solve_spline(pg), SingularGramError);
}

TEST_CASE("spectral filter solves the rank-deficient symmetric family") {
  // two antipodal hemisphere pairs: exact rank deficiency 1
  Manifold m = Manifold::sphere2();
  auto base = projective_farthest_point_sample(m, 2, 5);
  auto xi = symmetrize(base);
  REQUIRE(xi.points.size() == 4);
  SpectralCoeffs f{{{1, 2}, 0.9}, {{3, 5}, -0.4}};

  SplineProblem pr;
  pr.manifold = m;
  pr.smoothness = 3.0;
  pr.truncation = Truncation::degree(20);
  for (const auto& p : xi.points)
    pr.functionals.push_back(Functional::hemisphere(p));
  for (const auto& fn : pr.functionals)
    pr.values.push_back(fn.apply_to_series(f));

  CHECK_THROWS_AS(solve_spline(pr), SingularGramError);
  pr.options.spectral_filter = true;
  auto s = solve_spline(pr);
  CHECK(s.residual_max() < 1e-10);
  for (const auto& [idx, c] : s.fourier_map())
    if (idx.degree % 2 == 0) CHECK(std::fabs(c) <= 1e-10);
}

TEST_CASE("diagonal jitter rescues a deliberately duplicated system") {
  SplineProblem pr;
  pr.manifold = Manifold::circle();
  pr.smoothness = 2.0;
  pr.truncation = Truncation::degree(40);
  pr.functionals.push_back(Functional::dirac(pr.manifold, Point::angle(1.0)));
  pr.functionals.push_back(Functional::dirac(pr.manifold, Point::angle(1.0)));
  pr.values = {1.0, 1.0};
  CHECK_THROWS_AS(solve_spline(pr), SingularGramError);
  pr.options.diagonal_jitter = true;
  auto s = solve_spline(pr);
  CHECK(std::fabs(s.evaluate(Point::angle(1.0)) - 1.0) < 1e-6);
}
