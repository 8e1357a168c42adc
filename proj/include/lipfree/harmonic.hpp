#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lipfree {

// ---------------------------------------------------------------------------
// Circle and torus

/// Real-valued trigonometric polynomial on the circle [0, 2pi), stored as its
/// Fourier coefficients c_k for k = -N..N (entry k + N).
class CircleFunction {
 public:
  CircleFunction() : coeffs_(Eigen::VectorXcd::Zero(1)) {}
  /// Throws std::invalid_argument unless the length is odd and c_{-k} = conj(c_k)
  /// within 1e-12 (relative to the largest coefficient).
  explicit CircleFunction(Eigen::VectorXcd coeffs);

  /// Coefficients |k| <= N of the trigonometric interpolant of M equispaced
  /// samples (direct DFT). Requires 2N < M.
  static CircleFunction from_samples(const Eigen::VectorXd& samples, int N);
  static CircleFunction constant(double c);
  /// a cos(k t) + b sin(k t)
  static CircleFunction mode(int k, double a, double b);

  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size() / 2); }
  [[nodiscard]] const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  [[nodiscard]] std::complex<double> coeff(int k) const;
  /// Number of nonzero coefficients (the rank footprint of the function).
  [[nodiscard]] int support_size(double tol = 0.0) const;

  [[nodiscard]] double operator()(double t) const;
  /// Values at t_j = 2 pi j / M.
  [[nodiscard]] Eigen::VectorXd sample(int M) const;

 private:
  Eigen::VectorXcd coeffs_;
};

/// Fejer multipliers 1 - |k|/(n+1), k = -n..n.
Eigen::VectorXd fejer_coefficients(int n);
/// F_n(t) = sum_{|k| <= n} (1 - |k|/(n+1)) e^{ikt}, summed directly from the
/// cosine series at t_j = 2 pi j / M.
Eigen::VectorXd fejer_kernel_values(int n, int M);

/// T_n f = f * F_n: coefficients damped by the Fejer multipliers, truncated at |k| <= n.
CircleFunction fejer_convolve(const CircleFunction& f, int n);

/// Two-variable trigonometric polynomial: entry (j + N, k + N) holds c_{j,k}.
using TorusCoefficients = Eigen::MatrixXcd;
/// Product kernel F_n(s) F_n(t) on the torus.
TorusCoefficients fejer_convolve_torus(const TorusCoefficients& f, int n);
/// Values on the M x M product grid.
Eigen::MatrixXd torus_sample(const TorusCoefficients& f, int M);

/// Largest divided difference |f(s) - f(t)| / d(s, t)^alpha over all pairs of
/// the M-point grid, with d the arc-length metric min(|s - t|, 2pi - |s - t|).
double grid_lipschitz(const Eigen::VectorXd& samples, double alpha = 1.0);

struct YoungMetricResult {
  double alpha = 1.0;
  double lip_f = 0.0;
  double lip_Tf = 0.0;
  bool ok = true;  // lip_Tf <= lip_f (1 + eps_grid)
};

struct YoungAudit {
  int n = 0;
  int M = 0;
  double eps_grid = 0.0;
  std::vector<YoungMetricResult> metrics;  // arc length first, then snowflakes
  [[nodiscard]] bool passed() const;
};

/// Lipschitz bound for the Fejer operator, on arc length and on the
/// snowflaked metrics d^alpha for each alpha in `alphas`.
YoungAudit audit_young(const CircleFunction& f, int n, int M = 4096,
                       const std::vector<double>& alphas = {0.5, 0.75});
/// Same audit for a function given by M grid samples; T_n acts on the
/// trigonometric interpolant of the samples.
YoungAudit audit_young(const Eigen::VectorXd& samples, int n,
                       const std::vector<double>& alphas = {0.5, 0.75});

struct ConvergenceLevel {
  int n = 0;
  double sup_error = 0.0;
};

struct ConvergenceAudit {
  int M = 0;
  double target = 0.0;
  std::vector<ConvergenceLevel> levels;
  bool monotone = true;  // each error <= 1.05 * previous
  bool below_target = true;
  [[nodiscard]] bool passed() const { return monotone && below_target; }
};

/// sup over the grid of |T_n f - f| for each n in `ns` (ascending), where f
/// is given by its M grid samples.
ConvergenceAudit audit_pointwise_convergence(const Eigen::VectorXd& samples, const std::vector<int>& ns,
                                             double target);
ConvergenceAudit audit_pointwise_convergence(const CircleFunction& f, const std::vector<int>& ns,
                                             double target, int M = 4096);

/// Bundled sample functions on the circle.
Eigen::VectorXd abs_t_minus_pi(int M);
/// Fourier coefficients of |t - pi|: pi/2 at k = 0, 2/(pi k^2) for odd k, 0 otherwise.
CircleFunction abs_t_minus_pi_series(int N);
/// Random real trigonometric polynomial of the given degree, coefficients
/// uniform in [-1, 1] scaled by 1/(1 + |k|).
CircleFunction random_trig_polynomial(int degree, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Quadrature and the sphere

struct Quadrature {
  Eigen::VectorXd nodes;    // ascending
  Eigen::VectorXd weights;
};

/// q-point Gauss-Jacobi rule for the weight (1 - x)^a (1 + x)^b on [-1, 1]
/// (Golub-Welsch). Exact for polynomials of degree <= 2q - 1.
Quadrature gauss_jacobi(int q, double a, double b);
/// c_Lambda with c_Lambda * integral of (1 - x^2)^(Lambda - 1/2) = 1.
double gegenbauer_normalizer(double Lambda);
/// ||f||_{Lambda,1} = c_Lambda * integral |f| (1 - x^2)^(Lambda - 1/2) with a q-point rule.
template <class F>
double weighted_l1_norm(F&& f, double Lambda, int q) {
  const auto rule = gauss_jacobi(q, Lambda - 0.5, Lambda - 0.5);
  double s = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) s += rule.weights(i) * std::abs(f(rule.nodes(i)));
  return gegenbauer_normalizer(Lambda) * s;
}

/// Cesaro-Gegenbauer kernel K_n^delta on S^{d-1}.
struct SphereKernelSpec {
  int d = 3;
  double delta = 2.0;
  int n = 0;
  [[nodiscard]] double Lambda() const { return (d - 2) / 2.0; }
};

/// A_k^delta = binomial(k + delta, k) for k = 0..n via A_k = A_{k-1} (delta + k) / k.
Eigen::VectorXd cesaro_numbers(double delta, int n);
/// Coefficients of K_n^delta in the Legendre basis: A_{n-k} (2k+1) / A_n (d = 3).
Eigen::VectorXd cesaro_legendre_coefficients(const SphereKernelSpec& spec);
/// sum_k c_k P_k(t) by the Clenshaw recurrence.
double legendre_series(const Eigen::VectorXd& c, double t);

struct KernelReport {
  SphereKernelSpec spec;
  Eigen::VectorXd A;             // A_0..A_n
  Eigen::VectorXd coefficients;  // Legendre coefficients
  int quadrature_nodes = 0;
  double norm = 0.0;             // ||K||_{Lambda,1}
  double constant_term = 0.0;    // c_Lambda * integral K w_Lambda
  double min_at_nodes = 0.0;
  double min_on_grid = 0.0;      // over `grid_points` equispaced points of [-1, 1]
  int grid_points = 0;
  [[nodiscard]] double operator()(double t) const { return legendre_series(coefficients, t); }
};

/// Throws UnsupportedError for d != 3 and std::invalid_argument for
/// delta < d - 1 or n < 0.
KernelReport cesaro_kernel(const SphereKernelSpec& spec, int grid_points = 2001);

/// Product grid on S^2: Gauss-Legendre in x = cos(theta) times M equispaced azimuths.
struct SphereGrid {
  SphereGrid(int L, int M);
  int L;
  int M;
  Eigen::VectorXd x;        // polar nodes
  Eigen::VectorXd weights;  // Gauss-Legendre weights, summing to 2
  /// Polynomials of degree <= this are integrated exactly.
  [[nodiscard]] int degree() const { return std::min(2 * L - 1, M - 1); }
  [[nodiscard]] Eigen::Vector3d point(int i, int j) const;
  [[nodiscard]] double phi(int j) const;
  /// Weight of node (i, j) for the normalized measure (1/4pi) dsigma.
  [[nodiscard]] double area_weight(int i) const;
};

/// Samples f(i, j) at grid node (polar i, azimuth j).
using SphereSamples = Eigen::MatrixXd;

template <class F>
SphereSamples sample_sphere(const SphereGrid& grid, F&& f) {
  SphereSamples s(grid.L, grid.M);
  for (int i = 0; i < grid.L; ++i) {
    for (int j = 0; j < grid.M; ++j) s(i, j) = f(grid.point(i, j));
  }
  return s;
}

/// Real spherical harmonics up to degree n at unit vector v, orthonormal for
/// (1/4pi) dsigma, ordered (l, m) with m = -l..l (entry l^2 + l + m).
Eigen::VectorXd real_harmonics(int n, const Eigen::Vector3d& v);
/// Harmonic coefficients up to degree n by grid quadrature.
Eigen::VectorXd harmonic_coefficients(const SphereGrid& grid, const SphereSamples& f, int n);
double evaluate_harmonics(const Eigen::VectorXd& coeffs, const Eigen::Vector3d& v);

struct SphereConvolution {
  SphereKernelSpec spec;
  Eigen::VectorXd coeffs;    // (n+1)^2 harmonic coefficients of f * K_n^delta
  SphereSamples samples;     // on the input grid
  [[nodiscard]] double operator()(const Eigen::Vector3d& v) const { return evaluate_harmonics(coeffs, v); }
};

/// f * K_n^delta through harmonic coefficients damped by A_{n-l} / A_n.
/// Throws std::invalid_argument when the grid degree is below 2n and
/// UnsupportedError for d != 3.
SphereConvolution sphere_convolve(const SphereGrid& grid, const SphereSamples& f,
                                  const SphereKernelSpec& spec);

}  // namespace lipfree
