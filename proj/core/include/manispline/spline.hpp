#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "manispline/functionals.hpp"
#include "manispline/manifold.hpp"
#include "manispline/series.hpp"

namespace manispline {

/// Spectral truncation policy. An explicit max degree wins when both are
/// given; otherwise the smallest degree whose tail majorant drops below
/// tail_tol is used (default 1e-8).
struct Truncation {
  std::optional<int> max_degree;
  std::optional<double> tail_tol;

  static Truncation degree(int j) { return {j, std::nullopt}; }
  static Truncation tail(double eps) { return {std::nullopt, eps}; }
};

struct SolverOptions {
  /// Off by default; adds 1e-12 * trace/N to the diagonal for deliberately
  /// ill-posed experiments.
  bool diagonal_jitter = false;
  /// Off by default; solves through an eigendecomposition and drops
  /// directions below 1e-13 of the largest eigenvalue instead of failing
  /// on the condition limit. Exact (up to roundoff) whenever the data
  /// lies in the retained eigenspace, which is the case for band-limited
  /// data in the high-order sampling experiments.
  bool spectral_filter = false;
};

struct SplineProblem {
  Manifold manifold = Manifold::circle();
  double smoothness = 2.0;
  std::vector<Functional> functionals;
  std::vector<double> values;
  Truncation truncation;
  SolverOptions options;
};

struct GramReport {
  Eigen::MatrixXd matrix;
  int truncation_degree = 0;  // -1 in closed-form mode
  double tail_bound = 0.0;
  double condition_estimate = 1.0;
  double min_eigenvalue = 0.0;
  bool closed_form = false;
};

/// Raised when the Gram matrix is numerically singular; names the closest
/// pair of functionals.
class SingularGramError : public std::runtime_error {
 public:
  SingularGramError(std::string msg, int a, int b)
      : std::runtime_error(std::move(msg)), first(a), second(b) {}
  int first;
  int second;
};

/// Smallest J whose pairwise tail majorant
///   sum_{j>J} sqrt(S_j(nu) S_j(mu)) (1+lambda_j)^{-t}
/// is below eps_tail for every functional pair. Throws
/// std::invalid_argument when the series is not absolutely summable.
int truncation_degree(const SplineProblem& problem, double eps_tail);

GramReport assemble_gram(const SplineProblem& problem);

class Spline {
 public:
  const SplineProblem& problem() const { return problem_; }
  const GramReport& gram() const { return gram_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  bool closed_form() const { return gram_.closed_form; }
  int truncation() const { return gram_.truncation_degree; }

  double evaluate(const Point& p) const;

  /// sum_nu alpha_nu v_nu (the Lemma-3.1 route to the squared norm).
  double norm_identity_sq() const;
  double sobolev_norm() const;

  /// Fourier coefficient c_{j,i} = (1+lambda_j)^{-t} sum alpha_nu F_nu(phi_{j,i}).
  double fourier_at(SpectralIndex index) const;

  /// All Fourier coefficients up to the Gram's J (evaluate_basis_all
  /// order), materialized on first use. Closed-form splines materialize up
  /// to the given degree (default 1024).
  const std::vector<double>& fourier(int closed_form_degree = 1024) const;
  SpectralCoeffs fourier_map(int closed_form_degree = 1024) const;

  /// H_t inner product with a finitely supported series.
  double sobolev_inner(const SpectralCoeffs& g) const;

  /// max_nu |F_nu(s) - v_nu| over the truncated series.
  double residual_max() const;

 private:
  friend Spline solve_spline(const SplineProblem&);
  friend std::vector<Spline> lagrangian_basis(const Manifold&,
                                              const std::vector<Functional>&,
                                              double, const Truncation&);
  Spline() = default;

  SplineProblem problem_;
  GramReport gram_;
  Eigen::VectorXd alpha_;
  // Set by the circulant fast path for uniform circle grids: evaluation
  // goes through the pre-materialized Fourier series, whose coefficients
  // carry full relative precision per mode even when the dual vector
  // alpha is an ill-conditioned representation.
  bool series_eval_ = false;
  // Per-functional zonal weights c_j and evaluation weights
  // (1+lambda_j)^{-t} c_j, j <= J; empty for arc functionals and in
  // closed-form mode.
  std::vector<std::vector<double>> zonal_c_;
  std::vector<std::vector<double>> eval_w_;
  std::vector<double> invpow_;  // (1+lambda_j)^{-t}, j <= J

  struct FourierCache;
  std::shared_ptr<FourierCache> fcache_;

  void init_weights();
};

Spline solve_spline(const SplineProblem& problem);

double evaluate_spline(const Spline& s, const Point& p);
double sobolev_norm(const Spline& s);
double sobolev_inner(const Spline& s, const SpectralCoeffs& g);

/// N splines with F_mu(l^nu) = delta_{nu mu}, sharing one factorization.
std::vector<Spline> lagrangian_basis(const Manifold& m,
                                     const std::vector<Functional>& functionals,
                                     double t, const Truncation& truncation);

/// Interpolates a band-limited f: v_nu = F_nu(f), then solve.
Spline interpolate_function(const Manifold& m, const SpectralCoeffs& f_coeffs,
                            const std::vector<Functional>& functionals,
                            double t, const Truncation& truncation);

/// True when the circle t = 1 all-dirac closed-form kernel
/// cosh(pi - u)/(2 sinh pi) applies.
bool closed_form_applicable(const SplineProblem& problem);

/// The circle t = 1 dirac kernel at geodesic distance u.
double circle_t1_kernel(double u);

}  // namespace manispline
