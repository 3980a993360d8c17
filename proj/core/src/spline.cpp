#include "manispline/spline.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "manispline/parallel.hpp"

namespace manispline {

namespace {

constexpr int kTruncationCap = 100'000'000;
constexpr int kAssemblyCap = 2'000'000;
constexpr long long kMaterializeCap = 50'000'000;
constexpr double kConditionLimit = 1e14;

struct PairEnvelope {
  double constant;  // sqrt(C_nu C_mu)
  double exponent;  // (p_nu + p_mu)/2 - 2t
};

std::vector<PairEnvelope> pair_envelopes(const SplineProblem& pr) {
  std::vector<PairEnvelope> out;
  const auto& fs = pr.functionals;
  for (std::size_t a = 0; a < fs.size(); ++a)
    for (std::size_t b = a; b < fs.size(); ++b) {
      double c = std::sqrt(fs[a].degree_bound_constant() *
                           fs[b].degree_bound_constant());
      double q = 0.5 * (fs[a].degree_bound_exponent() +
                        fs[b].degree_bound_exponent());
      out.push_back({c, q - 2.0 * pr.smoothness});
    }
  return out;
}

void check_summable(const SplineProblem& pr) {
  for (const auto& e : pair_envelopes(pr)) {
    if (e.constant > 0.0 && e.exponent >= -1.0) {
      std::ostringstream os;
      os << "series not absolutely summable: tail exponent " << e.exponent
         << " >= -1 at smoothness t = " << pr.smoothness;
      throw std::invalid_argument(os.str());
    }
  }
}

// sum_{j>J} C j^r <= C ((J+1)^r + (J+1)^{r+1}/(-1-r)) for decreasing terms.
double tail_majorant(const std::vector<PairEnvelope>& envs, int J) {
  double worst = 0.0;
  double x = static_cast<double>(J) + 1.0;
  for (const auto& e : envs) {
    if (e.constant == 0.0) continue;
    double head = std::pow(x, e.exponent);
    double tail = std::pow(x, e.exponent + 1.0) / (-1.0 - e.exponent);
    worst = std::max(worst, e.constant * (head + tail));
  }
  return worst;
}

std::vector<double> build_invpow(const Manifold& m, double t, int J) {
  std::vector<double> w(static_cast<std::size_t>(J) + 1);
  for (int j = 0; j <= J; ++j)
    w[j] = std::pow(1.0 + eigenvalue(m, j), -t);
  return w;
}

std::vector<double> build_zonal_c(const Functional& f, int J) {
  std::vector<double> c(static_cast<std::size_t>(J) + 1, 0.0);
  switch (f.kind()) {
    case FunctionalKind::dirac:
      std::fill(c.begin(), c.end(), 1.0);
      break;
    case FunctionalKind::total_integral:
      c[0] = f.manifold().total_measure;
      break;
    case FunctionalKind::great_circle: {
      double p = 1.0;  // P_j(0), rolling over even j
      c[0] = kTwoPi;
      for (int j = 2; j <= J; j += 2) {
        p *= -static_cast<double>(j - 1) / j;
        c[j] = kTwoPi * p;
      }
      break;
    }
    case FunctionalKind::hemisphere: {
      c[0] = kTwoPi;
      double p_lo = 1.0;  // P_{j-1}(0) for odd j
      for (int j = 1; j <= J; j += 2) {
        double p_hi = p_lo * (-static_cast<double>(j) / (j + 1));
        c[j] = kTwoPi * (p_lo - p_hi) / (2.0 * j + 1.0);
        p_lo = p_hi;
      }
      break;
    }
    case FunctionalKind::arc:
      throw std::logic_error("arc functional has no zonal weights");
  }
  return c;
}

// Direct double sum over (j, i); used for pairs involving the arc kind.
double gram_entry_direct(const Manifold& m, const Functional& fa,
                         const Functional& fb,
                         const std::vector<double>& invpow, int J) {
  double s = 0.0;
  for (int j = 0; j <= J; ++j) {
    long long n = multiplicity(m, j);
    double acc = 0.0;
    for (int i = 1; i <= n; ++i) {
      SpectralIndex idx{j, i};
      acc += fa.coefficient(idx) * fb.coefficient(idx);
    }
    s += invpow[j] * acc;
  }
  return s;
}

Point geometry_point(const Functional& f) {
  if (f.kind() == FunctionalKind::arc)
    return Point::angle(0.5 * (f.arc_start() + f.arc_end()));
  return f.pole();
}

[[noreturn]] void throw_singular(const SplineProblem& pr, double cond) {
  int bi = 0, bj = 1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < pr.functionals.size(); ++a)
    for (std::size_t b = a + 1; b < pr.functionals.size(); ++b) {
      double d = geodesic_distance(pr.manifold,
                                   geometry_point(pr.functionals[a]),
                                   geometry_point(pr.functionals[b]));
      if (d < best) {
        best = d;
        bi = static_cast<int>(a);
        bj = static_cast<int>(b);
      }
    }
  std::ostringstream os;
  os << "Gram matrix numerically singular (condition estimate " << cond
     << "); nearest functional pair: #" << bi << " "
     << pr.functionals[bi].describe() << " and #" << bj << " "
     << pr.functionals[bj].describe() << " at distance " << best;
  throw SingularGramError(os.str(), bi, bj);
}

void validate_problem(const SplineProblem& pr) {
  if (pr.functionals.empty())
    throw std::invalid_argument("spline problem needs at least one functional");
  if (pr.values.size() != pr.functionals.size())
    throw std::invalid_argument("values length must equal functionals length");
  for (const auto& f : pr.functionals)
    if (!(f.manifold() == pr.manifold))
      throw std::invalid_argument("functional manifold mismatch");
  check_summable(pr);
}

// Dirac functionals on a uniform circle grid theta_0 + 2 pi nu / N make
// the Gram circulant. Its eigenvalues are aliasing sums of the positive
// mode weights, so they can be computed to full relative precision even
// when their spread is far beyond what a factorization of the assembled
// matrix can resolve. Returns the permutation sorting the angles, or
// empty when the structure is absent.
std::vector<int> uniform_circle_permutation(const SplineProblem& pr) {
  if (!pr.manifold.is_circle()) return {};
  for (const auto& f : pr.functionals)
    if (f.kind() != FunctionalKind::dirac) return {};
  const int N = static_cast<int>(pr.functionals.size());
  std::vector<int> perm(N);
  for (int i = 0; i < N; ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](int a, int b) {
    return pr.functionals[a].pole().theta() < pr.functionals[b].pole().theta();
  });
  double theta0 = pr.functionals[perm[0]].pole().theta();
  for (int i = 0; i < N; ++i) {
    double expect = theta0 + kTwoPi * i / N;
    if (std::fabs(pr.functionals[perm[i]].pole().theta() - expect) > 1e-12)
      return {};
  }
  return perm;
}

}  // namespace

double circle_t1_kernel(double u) {
  return std::cosh(kPi - std::fabs(u)) / (2.0 * std::sinh(kPi));
}

bool closed_form_applicable(const SplineProblem& pr) {
  if (!pr.manifold.is_circle()) return false;
  if (std::fabs(pr.smoothness - 1.0) > 1e-9) return false;
  if (pr.truncation.max_degree) return false;
  for (const auto& f : pr.functionals)
    if (f.kind() != FunctionalKind::dirac) return false;
  return true;
}

int truncation_degree(const SplineProblem& problem, double eps_tail) {
  if (!(eps_tail > 0.0))
    throw std::invalid_argument("truncation_degree: eps_tail > 0 required");
  check_summable(problem);
  auto envs = pair_envelopes(problem);
  if (tail_majorant(envs, 0) < eps_tail) return 0;
  int hi = 1;
  while (tail_majorant(envs, hi) >= eps_tail) {
    if (hi > kTruncationCap)
      throw std::runtime_error(
          "truncation degree exceeds cap; increase smoothness, relax the "
          "tail tolerance, or use the closed-form circle kernel");
    hi *= 2;
  }
  int lo = hi / 2;  // tail(lo) >= eps, tail(hi) < eps
  while (hi - lo > 1) {
    int mid = lo + (hi - lo) / 2;
    (tail_majorant(envs, mid) < eps_tail ? hi : lo) = mid;
  }
  return hi;
}

GramReport assemble_gram(const SplineProblem& problem) {
  validate_problem(problem);
  const auto& fs = problem.functionals;
  const int N = static_cast<int>(fs.size());
  GramReport report;

  if (closed_form_applicable(problem)) {
    report.closed_form = true;
    report.truncation_degree = -1;
    report.tail_bound = 0.0;
    report.matrix.resize(N, N);
    for (int a = 0; a < N; ++a)
      for (int b = a; b < N; ++b) {
        double d = geodesic_distance(problem.manifold, fs[a].pole(),
                                     fs[b].pole());
        report.matrix(a, b) = report.matrix(b, a) = circle_t1_kernel(d);
      }
  } else {
    int J;
    if (problem.truncation.max_degree) {
      J = *problem.truncation.max_degree;
      if (J < 0) throw std::invalid_argument("max_degree must be >= 0");
    } else {
      J = truncation_degree(problem,
                            problem.truncation.tail_tol.value_or(1e-8));
    }
    if (J > kAssemblyCap)
      throw std::runtime_error(
          "resolved truncation degree " + std::to_string(J) +
          " exceeds the assembly cap; relax the tail tolerance");
    report.truncation_degree = J;
    report.tail_bound = tail_majorant(pair_envelopes(problem), J);

    auto invpow = build_invpow(problem.manifold, problem.smoothness, J);
    std::vector<std::vector<double>> cvec(N);
    for (int a = 0; a < N; ++a)
      if (fs[a].is_zonal()) cvec[a] = build_zonal_c(fs[a], J);

    report.matrix.resize(N, N);
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t ai) {
      int a = static_cast<int>(ai);
      std::vector<double> w(static_cast<std::size_t>(J) + 1);
      for (int b = a; b < N; ++b) {
        double entry;
        if (fs[a].is_zonal() && fs[b].is_zonal()) {
          for (int j = 0; j <= J; ++j) w[j] = invpow[j] * cvec[a][j] * cvec[b][j];
          entry = zonal_kernel(problem.manifold, w, fs[a].pole(), fs[b].pole());
        } else {
          entry = gram_entry_direct(problem.manifold, fs[a], fs[b], invpow, J);
        }
        report.matrix(a, b) = entry;
      }
    });
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < a; ++b) report.matrix(a, b) = report.matrix(b, a);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(report.matrix);
  double lo = eig.eigenvalues().minCoeff();
  double hi = eig.eigenvalues().maxCoeff();
  report.min_eigenvalue = lo;
  report.condition_estimate =
      lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return report;
}

struct Spline::FourierCache {
  std::mutex mutex;
  std::vector<double> coeffs;
  int degree = -1;
};

void Spline::init_weights() {
  fcache_ = std::make_shared<FourierCache>();
  if (gram_.closed_form) return;
  const int J = gram_.truncation_degree;
  const int N = static_cast<int>(problem_.functionals.size());
  invpow_ = build_invpow(problem_.manifold, problem_.smoothness, J);
  zonal_c_.assign(N, {});
  eval_w_.assign(N, {});
  for (int a = 0; a < N; ++a) {
    if (!problem_.functionals[a].is_zonal()) continue;
    zonal_c_[a] = build_zonal_c(problem_.functionals[a], J);
    eval_w_[a].resize(static_cast<std::size_t>(J) + 1);
    for (int j = 0; j <= J; ++j) eval_w_[a][j] = invpow_[j] * zonal_c_[a][j];
  }
}

Spline solve_spline(const SplineProblem& problem) {
  validate_problem(problem);
  Spline s;
  s.problem_ = problem;
  s.gram_ = assemble_gram(problem);

  Eigen::MatrixXd A = s.gram_.matrix;
  if (problem.options.diagonal_jitter) {
    double jitter = 1e-12 * A.trace() / A.rows();
    A.diagonal().array() += jitter;
    // the solve happens on the jittered matrix, so report its spectrum
    double lo = s.gram_.min_eigenvalue + jitter;
    double hi = s.gram_.condition_estimate * s.gram_.min_eigenvalue + jitter;
    if (!std::isfinite(hi)) hi = A.diagonal().maxCoeff();
    s.gram_.min_eigenvalue = lo;
    s.gram_.condition_estimate =
        lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  }
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(
      problem.values.data(), static_cast<Eigen::Index>(problem.values.size()));

  if (!s.gram_.closed_form) {
    auto perm = uniform_circle_permutation(problem);
    if (!perm.empty()) {
      const int N = static_cast<int>(perm.size());
      const int J = s.gram_.truncation_degree;
      const double theta0 = problem.functionals[perm[0]].pole().theta();
      auto invpow = build_invpow(problem.manifold, problem.smoothness, J);

      // aliasing sums of the positive mode weights per residue class
      std::vector<double> mr(N, 0.0);
      mr[0] += invpow[0] / kTwoPi;
      for (int k = 1; k <= J; ++k) mr[k % N] += invpow[k] / kPi;
      const int H = N / 2;
      std::vector<double> lam(H + 1);
      for (int r = 0; r <= H; ++r) {
        bool self = r == 0 || 2 * r == N;
        lam[r] = self ? N * mr[r] : 0.5 * N * (mr[r] + mr[N - r]);
      }
      double lmin = *std::min_element(lam.begin(), lam.end());
      double lmax = *std::max_element(lam.begin(), lam.end());
      s.gram_.min_eigenvalue = lmin;
      s.gram_.condition_estimate =
          lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
      if (!(lmin > 0.0)) throw_singular(problem, s.gram_.condition_estimate);

      // data transform on the sorted grid z_nu = 2 pi nu / N
      std::vector<double> vc(H + 1, 0.0), vs(H + 1, 0.0);
      for (int r = 0; r <= H; ++r)
        for (int nu = 0; nu < N; ++nu) {
          double z = kTwoPi * r * nu / N;
          double val = problem.values[static_cast<std::size_t>(perm[nu])];
          vc[r] += val * std::cos(z);
          vs[r] += val * std::sin(z);
        }

      s.alpha_.resize(N);
      for (int nu = 0; nu < N; ++nu) {
        double acc = 0.0;
        for (int r = 0; r <= H; ++r) {
          bool self = r == 0 || 2 * r == N;
          double norm_sq = self ? N : 0.5 * N;
          double z = kTwoPi * r * nu / N;
          acc += (vc[r] * std::cos(z) + vs[r] * std::sin(z)) /
                 (lam[r] * norm_sq);
        }
        s.alpha_[perm[nu]] = acc;
      }
      s.init_weights();

      // Fourier coefficients straight from the transform domain; the dual
      // sums A_r = sum_nu alpha_nu {cos,sin}(r z_nu) reduce to vhat_r / lam_r.
      std::vector<double> c(
          static_cast<std::size_t>(basis_count(problem.manifold, J)), 0.0);
      for (int k = 0; k <= J; ++k) {
        int r = k % N;
        int rp = std::min(r, N - r);
        double ac = vc[rp] / lam[rp];
        double as = (rp == 0 || 2 * rp == N)
                        ? 0.0
                        : (r == rp ? 1.0 : -1.0) * vs[rp] / lam[rp];
        double cos0 = std::cos(k * theta0), sin0 = std::sin(k * theta0);
        double sum_cos = cos0 * ac - sin0 * as;  // sum alpha cos(k theta_nu)
        double sum_sin = sin0 * ac + cos0 * as;  // sum alpha sin(k theta_nu)
        if (k == 0) {
          c[0] = invpow[0] * sum_cos / std::sqrt(kTwoPi);
        } else {
          c[2 * k - 1] = invpow[k] * sum_cos / std::sqrt(kPi);
          c[2 * k] = invpow[k] * sum_sin / std::sqrt(kPi);
        }
      }
      s.fcache_->coeffs = std::move(c);
      s.fcache_->degree = J;
      s.series_eval_ = true;
      return s;
    }
  }

  if (problem.options.spectral_filter) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
    double top = eig.eigenvalues().maxCoeff();
    if (!(top > 0.0)) throw_singular(problem, s.gram_.condition_estimate);
    const double cutoff = 1e-13 * top;
    Eigen::VectorXd y = eig.eigenvectors().transpose() * v;
    for (Eigen::Index i = 0; i < y.size(); ++i)
      y[i] = eig.eigenvalues()[i] > cutoff ? y[i] / eig.eigenvalues()[i] : 0.0;
    s.alpha_ = eig.eigenvectors() * y;
    s.init_weights();
    return s;
  }

  if (!(s.gram_.min_eigenvalue > 0.0) ||
      s.gram_.condition_estimate > kConditionLimit)
    throw_singular(problem, s.gram_.condition_estimate);

  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success)
    throw_singular(problem, s.gram_.condition_estimate);
  s.alpha_ = llt.solve(v);
  s.init_weights();
  return s;
}

double Spline::evaluate(const Point& p) const {
  check_on_manifold(problem_.manifold, p);
  const int N = static_cast<int>(problem_.functionals.size());
  double val = 0.0;
  if (gram_.closed_form) {
    for (int a = 0; a < N; ++a) {
      double d = geodesic_distance(problem_.manifold,
                                   problem_.functionals[a].pole(), p);
      val += alpha_[a] * circle_t1_kernel(d);
    }
    return val;
  }
  const int J = gram_.truncation_degree;
  if (series_eval_) {
    // cache is immutable after the circulant solve
    const auto& c = fcache_->coeffs;
    const double th = p.theta();
    val = c[0] / std::sqrt(kTwoPi);
    const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
    for (int k = 1; k <= J; ++k)
      val += inv_sqrt_pi *
             (c[2 * k - 1] * std::cos(k * th) + c[2 * k] * std::sin(k * th));
    return val;
  }
  for (int a = 0; a < N; ++a) {
    const auto& f = problem_.functionals[a];
    if (f.is_zonal()) {
      val += alpha_[a] *
             zonal_kernel(problem_.manifold, eval_w_[a], f.pole(), p);
    } else {
      // fundamental solution of the arc functional, direct series
      double e = f.coefficient({0, 1}) * invpow_[0] / std::sqrt(kTwoPi);
      double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
      for (int k = 1; k <= J; ++k) {
        double fc = f.coefficient({k, 1});
        double fsn = f.coefficient({k, 2});
        e += invpow_[k] * inv_sqrt_pi *
             (fc * std::cos(k * p.theta()) + fsn * std::sin(k * p.theta()));
      }
      val += alpha_[a] * e;
    }
  }
  return val;
}

double Spline::norm_identity_sq() const {
  double s = 0.0;
  for (Eigen::Index i = 0; i < alpha_.size(); ++i)
    s += alpha_[i] * problem_.values[static_cast<std::size_t>(i)];
  return s;
}

double Spline::sobolev_norm() const {
  double s = norm_identity_sq();
  double scale = 1.0;
  for (double v : problem_.values) scale = std::max(scale, std::fabs(v));
  if (s < -1e-12 * scale * scale)
    throw std::runtime_error(
        "internal consistency failure: negative squared Sobolev norm " +
        std::to_string(s));
  return std::sqrt(std::max(0.0, s));
}

double Spline::fourier_at(SpectralIndex index) const {
  if (!gram_.closed_form && index.degree > gram_.truncation_degree) return 0.0;
  {
    std::lock_guard<std::mutex> lock(fcache_->mutex);
    if (fcache_->degree >= index.degree) {
      long long off = basis_offset(problem_.manifold, index.degree);
      return fcache_->coeffs[static_cast<std::size_t>(off) + index.order - 1];
    }
  }
  double fsum = 0.0;
  for (std::size_t a = 0; a < problem_.functionals.size(); ++a)
    fsum += alpha_[static_cast<Eigen::Index>(a)] *
            problem_.functionals[a].coefficient(index);
  double w = std::pow(1.0 + eigenvalue(problem_.manifold, index.degree),
                      -problem_.smoothness);
  return w * fsum;
}

const std::vector<double>& Spline::fourier(int closed_form_degree) const {
  int J = gram_.closed_form ? closed_form_degree : gram_.truncation_degree;
  std::lock_guard<std::mutex> lock(fcache_->mutex);
  if (fcache_->degree >= J) return fcache_->coeffs;
  long long count = basis_count(problem_.manifold, J);
  if (count > kMaterializeCap)
    throw std::runtime_error("truncation degree too large to materialize");
  std::vector<double> c(static_cast<std::size_t>(count), 0.0);
  auto invpow = build_invpow(problem_.manifold, problem_.smoothness, J);
  for (std::size_t a = 0; a < problem_.functionals.size(); ++a) {
    const auto& f = problem_.functionals[a];
    double al = alpha_[static_cast<Eigen::Index>(a)];
    if (f.is_zonal()) {
      auto basis = evaluate_basis_all(problem_.manifold, J, f.pole());
      std::vector<double> cz = build_zonal_c(f, J);
      for (int j = 0; j <= J; ++j) {
        std::size_t off = static_cast<std::size_t>(
            basis_offset(problem_.manifold, j));
        long long n = multiplicity(problem_.manifold, j);
        double wz = al * invpow[j] * cz[j];
        if (wz == 0.0) continue;
        for (long long i = 0; i < n; ++i) c[off + i] += wz * basis[off + i];
      }
    } else {
      for (int j = 0; j <= J; ++j) {
        std::size_t off = static_cast<std::size_t>(
            basis_offset(problem_.manifold, j));
        long long n = multiplicity(problem_.manifold, j);
        for (long long i = 0; i < n; ++i)
          c[off + i] += al * invpow[j] *
                        f.coefficient({j, static_cast<int>(i) + 1});
      }
    }
  }
  fcache_->coeffs = std::move(c);
  fcache_->degree = J;
  return fcache_->coeffs;
}

SpectralCoeffs Spline::fourier_map(int closed_form_degree) const {
  const auto& c = fourier(closed_form_degree);
  int J = gram_.closed_form ? closed_form_degree : gram_.truncation_degree;
  SpectralCoeffs out;
  for (int j = 0; j <= J; ++j) {
    std::size_t off =
        static_cast<std::size_t>(basis_offset(problem_.manifold, j));
    long long n = multiplicity(problem_.manifold, j);
    for (long long i = 0; i < n; ++i) {
      double v = c[off + i];
      if (v != 0.0) out[{j, static_cast<int>(i) + 1}] = v;
    }
  }
  return out;
}

double Spline::sobolev_inner(const SpectralCoeffs& g) const {
  double s = 0.0;
  for (const auto& [idx, gv] : g) {
    double w = std::pow(1.0 + eigenvalue(problem_.manifold, idx.degree),
                        problem_.smoothness);
    s += w * fourier_at(idx) * gv;
  }
  return s;
}

double Spline::residual_max() const {
  const int N = static_cast<int>(problem_.functionals.size());
  double worst = 0.0;
  if (gram_.closed_form) {
    Eigen::VectorXd r = gram_.matrix * alpha_;
    for (int a = 0; a < N; ++a)
      worst = std::max(worst, std::fabs(r[a] - problem_.values[a]));
    return worst;
  }
  const auto& c = fourier();
  const int J = gram_.truncation_degree;
  for (int a = 0; a < N; ++a) {
    const auto& f = problem_.functionals[a];
    double applied = 0.0;
    if (f.is_zonal()) {
      auto basis = evaluate_basis_all(problem_.manifold, J, f.pole());
      for (int j = 0; j <= J; ++j) {
        double cz = zonal_c_[a].empty() ? f.zonal_weight(j) : zonal_c_[a][j];
        if (cz == 0.0) continue;
        std::size_t off =
            static_cast<std::size_t>(basis_offset(problem_.manifold, j));
        long long n = multiplicity(problem_.manifold, j);
        for (long long i = 0; i < n; ++i)
          applied += cz * basis[off + i] * c[off + i];
      }
    } else {
      for (int j = 0; j <= J; ++j) {
        std::size_t off =
            static_cast<std::size_t>(basis_offset(problem_.manifold, j));
        long long n = multiplicity(problem_.manifold, j);
        for (long long i = 0; i < n; ++i)
          applied += f.coefficient({j, static_cast<int>(i) + 1}) * c[off + i];
      }
    }
    worst = std::max(worst, std::fabs(applied - problem_.values[a]));
  }
  return worst;
}

double evaluate_spline(const Spline& s, const Point& p) { return s.evaluate(p); }
double sobolev_norm(const Spline& s) { return s.sobolev_norm(); }
double sobolev_inner(const Spline& s, const SpectralCoeffs& g) {
  return s.sobolev_inner(g);
}

std::vector<Spline> lagrangian_basis(const Manifold& m,
                                     const std::vector<Functional>& functionals,
                                     double t, const Truncation& truncation) {
  const int N = static_cast<int>(functionals.size());
  SplineProblem pr;
  pr.manifold = m;
  pr.smoothness = t;
  pr.functionals = functionals;
  pr.values.assign(functionals.size(), 0.0);
  pr.truncation = truncation;
  validate_problem(pr);

  Spline base;
  base.problem_ = pr;
  base.gram_ = assemble_gram(pr);
  if (!(base.gram_.min_eigenvalue > 0.0) ||
      base.gram_.condition_estimate > kConditionLimit)
    throw_singular(pr, base.gram_.condition_estimate);
  Eigen::LLT<Eigen::MatrixXd> llt(base.gram_.matrix);
  if (llt.info() != Eigen::Success)
    throw_singular(pr, base.gram_.condition_estimate);
  Eigen::MatrixXd all = llt.solve(Eigen::MatrixXd::Identity(N, N));
  base.init_weights();

  std::vector<Spline> out;
  out.reserve(functionals.size());
  for (int nu = 0; nu < N; ++nu) {
    Spline s = base;
    s.problem_.values.assign(functionals.size(), 0.0);
    s.problem_.values[nu] = 1.0;
    s.alpha_ = all.col(nu);
    s.fcache_ = std::make_shared<Spline::FourierCache>();
    out.push_back(std::move(s));
  }
  return out;
}

Spline interpolate_function(const Manifold& m, const SpectralCoeffs& f_coeffs,
                            const std::vector<Functional>& functionals,
                            double t, const Truncation& truncation) {
  SplineProblem pr;
  pr.manifold = m;
  pr.smoothness = t;
  pr.functionals = functionals;
  pr.truncation = truncation;
  pr.values.reserve(functionals.size());
  for (const auto& f : functionals)
    pr.values.push_back(f.apply_to_series(f_coeffs));
  return solve_spline(pr);
}

}  // namespace manispline
