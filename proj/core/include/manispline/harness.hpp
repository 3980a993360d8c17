#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "manispline/lattices.hpp"
#include "manispline/spline.hpp"

namespace manispline {

/// Interpolation target: either a named smooth function ("exp_cos" on the
/// circle, "exp_z" on the sphere) or a band-limited coefficient list.
struct TargetSpec {
  std::string name;  // empty for band-limited targets
  SpectralCoeffs coeffs;

  bool band_limited() const { return name.empty(); }
  int band_degree() const { return series_max_degree(coeffs); }
  double eval(const Manifold& m, const Point& p) const;

  static TargetSpec named(std::string n) { return {std::move(n), {}}; }
  static TargetSpec band(SpectralCoeffs c) { return {"", std::move(c)}; }
};

enum class FunctionalFamily { dirac, hemisphere, great_circle };
enum class ConvergenceMode { refine_density, raise_order };

struct ConvergenceSpec {
  Manifold manifold = Manifold::circle();
  FunctionalFamily family = FunctionalFamily::dirac;
  TargetSpec target;
  double t_base = 2.0;
  ConvergenceMode mode = ConvergenceMode::refine_density;
  std::vector<int> refine_N;   // refine_density: lattice sizes
  int fixed_m = 0;             // refine_density: order exponent
  std::vector<int> raise_orders_m;  // raise_order: m schedule
  std::optional<PointSet> fixed_points;  // raise_order lattice
  int fixed_N = 32;            // used when fixed_points is absent
  bool want_c1 = false;
  bool want_c2 = false;
  Truncation truncation;       // explicit J wins; else tail with floors
  std::uint64_t seed = 0;
};

struct ConvergenceRow {
  int key = 0;  // N or m
  double rho = 0.0;
  int truncation_degree = 0;
  double condition_estimate = 0.0;
  double err_l2 = 0.0;
  double err_linf = 0.0;
  double err_c1 = 0.0;
  double err_c2 = 0.0;
  double ratio_linf = 0.0;  // raise_order: err_m / err_{m-1}
  bool flagged = false;     // solver failure / condition overflow
  std::string note;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double slope = 0.0;  // log-log LS fit of Linf error vs rho
  bool slope_valid = false;
  bool monotone_linf = false;
  bool density_guard_ok = true;  // raise_order: err(m=1) < err(m=0)
};

ConvergenceTable run_convergence_rho(const ConvergenceSpec& spec);
ConvergenceTable run_convergence_order(const ConvergenceSpec& spec);

struct AuditCheck {
  std::string check_id;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct AuditReport {
  std::vector<AuditCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  void add(std::string id, double measured, double bound) {
    checks.push_back({std::move(id), measured, bound, measured <= bound});
  }
  void add_info(std::string id, double measured) {
    checks.push_back({std::move(id), measured,
                      std::numeric_limits<double>::infinity(), true});
  }
};

/// Per trial: random band-limited g, h = g - sum F_nu(g) l^nu; checks
/// orthogonality, Pythagoras, residuals of h and the midpoint identity,
/// all at 1e-8 relative.
AuditReport optimality_audit(const SplineProblem& problem, int trials,
                             std::uint64_t seed);

/// Compares hemisphere/great-circle coefficients against the quadrature
/// oracle and the Gamma-function multiplier formulas (d = 2, degrees <= J).
AuditReport multiplier_audit(int J);

/// Hemispherical-transform consistency on a symmetric point family:
/// residual agreement (T s)(xi_nu) = v_nu, parity of the spline, and the
/// diagnostic grid discrepancy against the dual Dirac spline at
/// tau = t + 3/2.
AuditReport transform_consistency(const SpectralCoeffs& f_coeffs,
                                  const PointSet& xi, double t,
                                  const Truncation& truncation);

/// Deterministic standard normal stream (Box-Muller over mt19937_64).
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}
  double next();

 private:
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Random band-limited coefficients with |degree| <= max_degree.
SpectralCoeffs random_band_limited(const Manifold& m, int max_degree,
                                   GaussianStream& g);

/// Odd (resp. even) projection helpers for parity experiments.
double parity_mass(const SpectralCoeffs& c, int parity_mod2);

}  // namespace manispline
