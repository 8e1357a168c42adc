#include "lipfree/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "lipfree/errors.hpp"

namespace lipfree {

namespace {

constexpr double kPi = std::numbers::pi;

/// e^{2 pi i j / M}, j = 0..M-1
Eigen::VectorXcd unit_roots(int M) {
  Eigen::VectorXcd w(M);
  // upper half mirrored so that w(M - j) = conj(w(j)) exactly
  for (int j = 0; 2 * j <= M; ++j) {
    const double a = 2.0 * kPi * j / M;
    w(j) = {std::cos(a), std::sin(a)};
    if (j > 0) w(M - j) = std::conj(w(j));
  }
  return w;
}

}  // namespace

CircleFunction::CircleFunction(Eigen::VectorXcd coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() % 2 != 1) throw std::invalid_argument("coefficient vector must have odd length");
  const int N = degree();
  const double scale = std::max(1.0, coeffs_.cwiseAbs().maxCoeff());
  for (int k = 0; k <= N; ++k) {
    if (std::abs(coeffs_(N + k) - std::conj(coeffs_(N - k))) > 1e-12 * scale) {
      throw std::invalid_argument("coefficients are not those of a real function (k = " +
                                  std::to_string(k) + ")");
    }
  }
}

CircleFunction CircleFunction::from_samples(const Eigen::VectorXd& samples, int N) {
  const int M = static_cast<int>(samples.size());
  if (N < 0 || 2 * N >= M) throw std::invalid_argument("need 0 <= 2N < M samples");
  const auto w = unit_roots(M);
  Eigen::VectorXcd c(2 * N + 1);
  for (int k = 0; k <= N; ++k) {
    std::complex<double> s = 0.0;
    for (int j = 0; j < M; ++j) {
      s += samples(j) * std::conj(w(static_cast<int>((static_cast<long>(k) * j) % M)));
    }
    s /= static_cast<double>(M);
    if (k == 0) s = s.real();
    c(N + k) = s;
    c(N - k) = std::conj(s);
  }
  return CircleFunction(std::move(c));
}

CircleFunction CircleFunction::constant(double v) {
  Eigen::VectorXcd c(1);
  c(0) = v;
  return CircleFunction(std::move(c));
}

CircleFunction CircleFunction::mode(int k, double a, double b) {
  if (k < 0) throw std::invalid_argument("mode index must be >= 0");
  if (k == 0) return constant(a);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * k + 1);
  // a cos kt + b sin kt = (a - ib)/2 e^{ikt} + (a + ib)/2 e^{-ikt}
  c(2 * k) = {a / 2, -b / 2};
  c(0) = {a / 2, b / 2};
  return CircleFunction(std::move(c));
}

std::complex<double> CircleFunction::coeff(int k) const {
  const int N = degree();
  if (k < -N || k > N) return 0.0;
  return coeffs_(N + k);
}

int CircleFunction::support_size(double tol) const {
  int n = 0;
  for (Eigen::Index i = 0; i < coeffs_.size(); ++i) n += std::abs(coeffs_(i)) > tol ? 1 : 0;
  return n;
}

double CircleFunction::operator()(double t) const {
  const int N = degree();
  double s = coeffs_(N).real();
  for (int k = 1; k <= N; ++k) s += 2.0 * (coeffs_(N + k) * std::polar(1.0, k * t)).real();
  return s;
}

Eigen::VectorXd CircleFunction::sample(int M) const {
  if (M < 1) throw std::invalid_argument("grid size must be positive");
  const int N = degree();
  const auto w = unit_roots(M);
  Eigen::VectorXd out(M);
  for (int j = 0; j < M; ++j) {
    double s = coeffs_(N).real();
    for (int k = 1; k <= N; ++k) {
      s += 2.0 * (coeffs_(N + k) * w(static_cast<int>((static_cast<long>(k) * j) % M))).real();
    }
    out(j) = s;
  }
  return out;
}

Eigen::VectorXd fejer_coefficients(int n) {
  if (n < 0) throw std::invalid_argument("Fejer degree must be >= 0");
  Eigen::VectorXd c(2 * n + 1);
  for (int k = -n; k <= n; ++k) c(k + n) = 1.0 - std::abs(k) / static_cast<double>(n + 1);
  return c;
}

Eigen::VectorXd fejer_kernel_values(int n, int M) {
  const auto c = fejer_coefficients(n);
  const auto w = unit_roots(M);
  Eigen::VectorXd out(M);
  for (int j = 0; j < M; ++j) {
    double s = 1.0;
    for (int k = 1; k <= n; ++k) s += 2.0 * c(n + k) * w(static_cast<int>((static_cast<long>(k) * j) % M)).real();
    out(j) = s;
  }
  return out;
}

CircleFunction fejer_convolve(const CircleFunction& f, int n) {
  const auto mult = fejer_coefficients(n);
  Eigen::VectorXcd c(2 * n + 1);
  for (int k = -n; k <= n; ++k) c(k + n) = f.coeff(k) * mult(k + n);
  return CircleFunction(std::move(c));
}

TorusCoefficients fejer_convolve_torus(const TorusCoefficients& f, int n) {
  if (f.rows() != f.cols() || f.rows() % 2 != 1) {
    throw std::invalid_argument("torus coefficients must be a square odd-sized matrix");
  }
  const auto N = static_cast<int>(f.rows() / 2);
  const auto mult = fejer_coefficients(n);
  TorusCoefficients out = TorusCoefficients::Zero(2 * n + 1, 2 * n + 1);
  for (int j = -std::min(n, N); j <= std::min(n, N); ++j) {
    for (int k = -std::min(n, N); k <= std::min(n, N); ++k) {
      out(j + n, k + n) = f(j + N, k + N) * mult(j + n) * mult(k + n);
    }
  }
  return out;
}

Eigen::MatrixXd torus_sample(const TorusCoefficients& f, int M) {
  const auto N = static_cast<int>(f.rows() / 2);
  const auto w = unit_roots(M);
  // Sum over the second index first, then the first.
  Eigen::MatrixXcd partial(2 * N + 1, M);
  for (int j = -N; j <= N; ++j) {
    for (int b = 0; b < M; ++b) {
      std::complex<double> s = 0.0;
      for (int k = -N; k <= N; ++k) s += f(j + N, k + N) * w(static_cast<int>(((static_cast<long>(k) * b) % M + M) % M));
      partial(j + N, b) = s;
    }
  }
  Eigen::MatrixXd out(M, M);
  for (int a = 0; a < M; ++a) {
    for (int b = 0; b < M; ++b) {
      std::complex<double> s = 0.0;
      for (int j = -N; j <= N; ++j) s += partial(j + N, b) * w(static_cast<int>(((static_cast<long>(j) * a) % M + M) % M));
      out(a, b) = s.real();
    }
  }
  return out;
}

double grid_lipschitz(const Eigen::VectorXd& f, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  const auto M = static_cast<int>(f.size());
  double best = 0.0;
  // Pairs at cyclic separation s and M - s have the same arc distance, so
  // separations up to M/2 cover every pair.
  for (int s = 1; s <= M / 2; ++s) {
    const double d = std::pow(2.0 * kPi * s / M, alpha);
    double diff = 0.0;
    for (int j = 0; j < M; ++j) diff = std::max(diff, std::abs(f((j + s) % M) - f(j)));
    best = std::max(best, diff / d);
  }
  return best;
}

bool YoungAudit::passed() const {
  return std::all_of(metrics.begin(), metrics.end(), [](const auto& m) { return m.ok; });
}

namespace {

YoungAudit young_from_samples(const Eigen::VectorXd& fs, const Eigen::VectorXd& ts, int n,
                              const std::vector<double>& alphas) {
  YoungAudit out;
  out.n = n;
  out.M = static_cast<int>(fs.size());
  out.eps_grid = 10.0 / out.M;
  std::vector<double> all{1.0};
  all.insert(all.end(), alphas.begin(), alphas.end());
  for (double a : all) {
    YoungMetricResult r;
    r.alpha = a;
    r.lip_f = grid_lipschitz(fs, a);
    r.lip_Tf = grid_lipschitz(ts, a);
    r.ok = r.lip_Tf <= r.lip_f * (1.0 + out.eps_grid);
    out.metrics.push_back(r);
  }
  return out;
}

}  // namespace

YoungAudit audit_young(const CircleFunction& f, int n, int M, const std::vector<double>& alphas) {
  if (M < 2 * std::max(f.degree(), n) + 1) throw std::invalid_argument("grid too coarse for the degree");
  return young_from_samples(f.sample(M), fejer_convolve(f, n).sample(M), n, alphas);
}

YoungAudit audit_young(const Eigen::VectorXd& samples, int n, const std::vector<double>& alphas) {
  const auto M = static_cast<int>(samples.size());
  if (M < 2 * n + 1) throw std::invalid_argument("grid too coarse for the degree");
  const auto f = CircleFunction::from_samples(samples, n);
  return young_from_samples(samples, fejer_convolve(f, n).sample(M), n, alphas);
}

ConvergenceAudit audit_pointwise_convergence(const Eigen::VectorXd& samples, const std::vector<int>& ns,
                                             double target) {
  if (ns.empty()) throw std::invalid_argument("no degrees given");
  if (!std::is_sorted(ns.begin(), ns.end())) throw std::invalid_argument("degrees must be ascending");
  const auto M = static_cast<int>(samples.size());
  const auto f = CircleFunction::from_samples(samples, ns.back());
  ConvergenceAudit out;
  out.M = M;
  out.target = target;
  for (int n : ns) {
    const auto t = fejer_convolve(f, n).sample(M);
    out.levels.push_back({n, (t - samples).cwiseAbs().maxCoeff()});
  }
  for (std::size_t i = 1; i < out.levels.size(); ++i) {
    // The absolute 1e-12 absorbs rounding when successive errors are both ~0.
    if (out.levels[i].sup_error > 1.05 * out.levels[i - 1].sup_error + 1e-12) out.monotone = false;
  }
  out.below_target = out.levels.back().sup_error < target;
  return out;
}

ConvergenceAudit audit_pointwise_convergence(const CircleFunction& f, const std::vector<int>& ns,
                                             double target, int M) {
  if (2 * f.degree() >= M) throw std::invalid_argument("grid too coarse for the function's degree");
  return audit_pointwise_convergence(f.sample(M), ns, target);
}

Eigen::VectorXd abs_t_minus_pi(int M) {
  Eigen::VectorXd v(M);
  for (int j = 0; j < M; ++j) v(j) = std::abs(2.0 * kPi * j / M - kPi);
  return v;
}

CircleFunction abs_t_minus_pi_series(int N) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * N + 1);
  c(N) = kPi / 2;
  for (int k = 1; k <= N; k += 2) {
    const double v = 2.0 / (kPi * k * k);
    c(N + k) = v;
    c(N - k) = v;
  }
  return CircleFunction(std::move(c));
}

CircleFunction random_trig_polynomial(int degree, std::uint64_t seed) {
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXcd c(2 * degree + 1);
  c(degree) = u(rng);
  for (int k = 1; k <= degree; ++k) {
    const double re = u(rng), im = u(rng);
    const std::complex<double> v(re / (1 + k), im / (1 + k));
    c(degree + k) = v;
    c(degree - k) = std::conj(v);
  }
  return CircleFunction(std::move(c));
}

Quadrature gauss_jacobi(int q, double a, double b) {
  if (q < 1) throw std::invalid_argument("quadrature needs at least one node");
  if (!(a > -1.0 && b > -1.0)) throw std::invalid_argument("Jacobi exponents must exceed -1");
  const double ab = a + b;
  Eigen::VectorXd diag(q), off(std::max(q - 1, 0));
  for (int k = 0; k < q; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = k == 0 ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < q; ++k) {
    const double s = 2.0 * k + ab;
    const double beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    off(k - 1) = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw ConvergenceError("Golub-Welsch eigensolver did not converge");
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                              std::lgamma(ab + 2.0));
  Quadrature rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(q);
  for (int i = 0; i < q; ++i) {
    const double v = es.eigenvectors()(0, i);
    rule.weights(i) = mu0 * v * v;
  }
  return rule;
}

double gegenbauer_normalizer(double Lambda) {
  if (!(Lambda > 0.0)) throw std::invalid_argument("Lambda must be positive");
  return std::exp(std::lgamma(Lambda + 1.0) - std::lgamma(0.5) - std::lgamma(Lambda + 0.5));
}

Eigen::VectorXd cesaro_numbers(double delta, int n) {
  if (n < 0) throw std::invalid_argument("degree must be >= 0");
  Eigen::VectorXd A(n + 1);
  A(0) = 1.0;
  for (int k = 1; k <= n; ++k) A(k) = A(k - 1) * (delta + k) / k;
  return A;
}

namespace {

void check_spec(const SphereKernelSpec& spec) {
  if (spec.d != 3) {
    throw UnsupportedError("Cesaro kernels are implemented for d = 3 only (got d = " +
                           std::to_string(spec.d) + ")");
  }
  if (spec.n < 0) throw std::invalid_argument("kernel degree must be >= 0");
  if (spec.delta < spec.d - 1) {
    throw std::invalid_argument("Cesaro order delta must be >= d - 1");
  }
}

}  // namespace

Eigen::VectorXd cesaro_legendre_coefficients(const SphereKernelSpec& spec) {
  check_spec(spec);
  const auto A = cesaro_numbers(spec.delta, spec.n);
  Eigen::VectorXd c(spec.n + 1);
  for (int k = 0; k <= spec.n; ++k) c(k) = A(spec.n - k) * (2.0 * k + 1.0) / A(spec.n);
  return c;
}

double legendre_series(const Eigen::VectorXd& c, double t) {
  // P_{k+1} = alpha_k P_k + beta_k P_{k-1}, alpha_k = (2k+1) t / (k+1), beta_k = -k / (k+1)
  double b1 = 0.0, b2 = 0.0;
  for (auto k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
    const double alpha = (2.0 * k + 1.0) * t / (k + 1.0);
    const double beta_next = -(k + 1.0) / (k + 2.0);
    const double b0 = c(k) + alpha * b1 + beta_next * b2;
    b2 = b1;
    b1 = b0;
  }
  return b1;
}

KernelReport cesaro_kernel(const SphereKernelSpec& spec, int grid_points) {
  check_spec(spec);
  if (grid_points < 2) throw std::invalid_argument("need at least two grid points");
  KernelReport r;
  r.spec = spec;
  r.A = cesaro_numbers(spec.delta, spec.n);
  r.coefficients = cesaro_legendre_coefficients(spec);
  const double Lambda = spec.Lambda();
  // n + 1 nodes integrate degree 2n + 1 exactly, enough for K itself.
  r.quadrature_nodes = spec.n + 1;
  const auto rule = gauss_jacobi(r.quadrature_nodes, Lambda - 0.5, Lambda - 0.5);
  const double c = gegenbauer_normalizer(Lambda);
  double s = 0.0, sa = 0.0;
  r.min_at_nodes = r(rule.nodes(0));
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    const double v = r(rule.nodes(i));
    s += rule.weights(i) * v;
    sa += rule.weights(i) * std::abs(v);
    r.min_at_nodes = std::min(r.min_at_nodes, v);
  }
  r.constant_term = c * s;
  r.norm = c * sa;
  r.grid_points = grid_points;
  r.min_on_grid = r(-1.0);
  for (int i = 0; i < grid_points; ++i) {
    const double t = -1.0 + 2.0 * i / (grid_points - 1);
    r.min_on_grid = std::min(r.min_on_grid, r(t));
  }
  return r;
}

SphereGrid::SphereGrid(int L_, int M_) : L(L_), M(M_) {
  if (L < 1 || M < 1) throw std::invalid_argument("sphere grid needs L, M >= 1");
  const auto rule = gauss_jacobi(L, 0.0, 0.0);
  x = rule.nodes;
  weights = rule.weights;
}

double SphereGrid::phi(int j) const { return 2.0 * kPi * j / M; }

Eigen::Vector3d SphereGrid::point(int i, int j) const {
  const double z = x(i);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi(j)), s * std::sin(phi(j)), z};
}

double SphereGrid::area_weight(int i) const { return weights(i) / (2.0 * M); }

namespace {

/// pbar(l, m) for 0 <= m <= l <= n, normalized so (1/2) integral pbar^2 dx = 1.
Eigen::MatrixXd normalized_legendre(int n, double x, double s) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n + 1, n + 1);
  p(0, 0) = 1.0;
  for (int m = 1; m <= n; ++m) p(m, m) = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * p(m - 1, m - 1);
  for (int m = 0; m < n; ++m) p(m + 1, m) = std::sqrt(2.0 * m + 3.0) * x * p(m, m);
  for (int m = 0; m <= n; ++m) {
    for (int l = m + 2; l <= n; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
      const double b = std::sqrt((static_cast<double>(l - 1) * (l - 1) - static_cast<double>(m) * m) /
                                 (4.0 * (l - 1) * (l - 1) - 1.0));
      p(l, m) = a * (x * p(l - 1, m) - b * p(l - 2, m));
    }
  }
  return p;
}

int degree_from_size(Eigen::Index size) {
  const auto n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(size)))) - 1;
  if ((n + 1) * (n + 1) != size) throw std::invalid_argument("coefficient vector size is not a square");
  return n;
}

}  // namespace

Eigen::VectorXd real_harmonics(int n, const Eigen::Vector3d& v) {
  const Eigen::Vector3d u = v.normalized();
  const double s = std::hypot(u(0), u(1));
  const double ph = std::atan2(u(1), u(0));
  const auto p = normalized_legendre(n, u(2), s);
  Eigen::VectorXd Y((n + 1) * (n + 1));
  for (int l = 0; l <= n; ++l) {
    Y(l * l + l) = p(l, 0);
    for (int m = 1; m <= l; ++m) {
      Y(l * l + l + m) = std::sqrt(2.0) * p(l, m) * std::cos(m * ph);
      Y(l * l + l - m) = std::sqrt(2.0) * p(l, m) * std::sin(m * ph);
    }
  }
  return Y;
}

Eigen::VectorXd harmonic_coefficients(const SphereGrid& grid, const SphereSamples& f, int n) {
  if (f.rows() != grid.L || f.cols() != grid.M) throw std::invalid_argument("samples do not match the grid");
  Eigen::VectorXd c = Eigen::VectorXd::Zero((n + 1) * (n + 1));
  for (int i = 0; i < grid.L; ++i) {
    const double z = grid.x(i);
    const auto p = normalized_legendre(n, z, std::sqrt(std::max(0.0, 1.0 - z * z)));
    const double aw = grid.area_weight(i);
    for (int m = 0; m <= n; ++m) {
      double fc = 0.0, fs = 0.0;
      for (int j = 0; j < grid.M; ++j) {
        fc += f(i, j) * std::cos(m * grid.phi(j));
        fs += f(i, j) * std::sin(m * grid.phi(j));
      }
      for (int l = m; l <= n; ++l) {
        if (m == 0) {
          c(l * l + l) += aw * p(l, 0) * fc;
        } else {
          c(l * l + l + m) += aw * std::sqrt(2.0) * p(l, m) * fc;
          c(l * l + l - m) += aw * std::sqrt(2.0) * p(l, m) * fs;
        }
      }
    }
  }
  return c;
}

double evaluate_harmonics(const Eigen::VectorXd& coeffs, const Eigen::Vector3d& v) {
  return coeffs.dot(real_harmonics(degree_from_size(coeffs.size()), v));
}

SphereConvolution sphere_convolve(const SphereGrid& grid, const SphereSamples& f, const SphereKernelSpec& spec) {
  check_spec(spec);
  if (grid.degree() < 2 * spec.n) {
    throw std::invalid_argument("grid degree " + std::to_string(grid.degree()) +
                                " is below 2n = " + std::to_string(2 * spec.n));
  }
  const int n = spec.n;
  const auto A = cesaro_numbers(spec.delta, n);
  SphereConvolution out;
  out.spec = spec;
  out.coeffs = harmonic_coefficients(grid, f, n);
  for (int l = 0; l <= n; ++l) {
    out.coeffs.segment(l * l, 2 * l + 1) *= A(n - l) / A(n);
  }
  out.samples.resize(grid.L, grid.M);
  for (int i = 0; i < grid.L; ++i) {
    for (int j = 0; j < grid.M; ++j) out.samples(i, j) = evaluate_harmonics(out.coeffs, grid.point(i, j));
  }
  return out;
}

}  // namespace lipfree
