#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bpl/rng.hpp"
#include "bpl/sampled_path.hpp"

namespace bpl {

/// Dense row-major matrix, just enough for increment arrays and blocks.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

/// Piecewise-constant operator-valued integrand: one m x d block per grid
/// cell, representing f(t) in gamma(H,X) with H and X truncated to R^m and
/// R^d. The gamma norm is the Frobenius norm of the block.
struct StepIntegrand {
  std::size_t steps = 0, hilbert_dim = 0, state_dim = 0;
  std::vector<double> blocks;  // steps * m * d

  StepIntegrand(std::size_t n_steps, std::size_t m, std::size_t d)
      : steps(n_steps), hilbert_dim(m), state_dim(d), blocks(n_steps * m * d, 0.0) {}

  double block(std::size_t i, std::size_t h, std::size_t x) const {
    return blocks[(i * hilbert_dim + h) * state_dim + x];
  }
  double& block_at(std::size_t i, std::size_t h, std::size_t x) {
    return blocks[(i * hilbert_dim + h) * state_dim + x];
  }

  /// out[x] += sum_h dw[h] * f_i[h,x]
  void apply_add(std::size_t i, std::span<const double> dw, double* out) const;

  double frobenius(std::size_t i) const;
  /// Euclidean norm of row k of the cell-i block (the k-th mode column of f*).
  double mode_norm(std::size_t i, std::size_t k) const;
  /// ||f||_{L^q(0,T;gamma)}; q = inf gives the sup of Frobenius norms.
  double gamma_lq_norm(double q, double T) const;

  static StepIntegrand constant_scalar(int J, double c);
  /// m = d, block = diag(entries), constant in time.
  static StepIntegrand constant_diag(int J, std::span<const double> entries);
};

/// Truncated diagonal analytic semigroup S(t) = diag(exp(-lambda_k t)).
/// `shift` stores the exponential-stabilisation factor of the maximal
/// regularity reduction (applied as a pathwise multiplier by callers).
struct DiagonalModel {
  std::vector<double> eigenvalues;
  double shift = 0.0;

  explicit DiagonalModel(std::vector<double> lambdas, double shift_ = 0.0);
  std::size_t dim() const { return eigenvalues.size(); }

  static DiagonalModel zero(std::size_t d);
  static DiagonalModel ou(double lambda);
  /// Dirichlet Laplacian spectrum lambda_k = (pi k)^2, k = 1..d.
  static DiagonalModel heat(std::size_t d);
};

/// steps x m Wiener increments, N(0, dt) entries.
Matrix sample_increments(int J, std::size_t m, double T, NormalStream& stream);
/// steps x d standard normals (correctors for the convolution coupling).
Matrix sample_standard_normals(std::size_t steps, std::size_t d, NormalStream& stream);

SampledPath brownian_from_increments(const Matrix& increments, double t0, double t1);

/// W(0) = 0, independent N(0, dt) coordinate increments; exact in law at
/// the grid points. Identical (seed, stream) gives identical paths.
SampledPath sample_brownian(int J, std::size_t d, RngSpec rng, double T = 1.0);

/// Left-endpoint Ito sums M(t_{i+1}) = M(t_i) + f_i dW_i; exact in law for
/// step integrands.
SampledPath ito_integral(const StepIntegrand& f, const Matrix& increments,
                         double T = 1.0);

/// Exact-in-law stochastic convolution u = S <> f against the diagonal
/// semigroup: per mode, u_k(t_{i+1}) = e^{-lambda_k dt} u_k(t_i) + g_{k,i}
/// where g is coupled to the same increments (correlation-matching factor)
/// plus an independent corrector carrying the residual variance. With all
/// lambda_k = 0 this reproduces ito_integral exactly.
SampledPath stochastic_convolution(const StepIntegrand& f, const DiagonalModel& model,
                                   const Matrix& increments, const Matrix& correctors,
                                   double T = 1.0);

/// u(t_{i+1}) = e^{-l dt} u(t_i) + g_mid (1 - e^{-l dt})/l per mode, with
/// cell midpoint values of g; cumulative trapezoid when l = 0. Exact for
/// constant inputs.
SampledPath deterministic_convolution(const SampledPath& g, const DiagonalModel& model);

/// Same convolution computed through the exponential stabilisation route:
/// with U(t) = e^{mu t} S(t) for mu = model.shift, evaluates
/// e^{-mu t} (U * e^{mu .} g)(t). Requires lambda_k - mu >= 0. With
/// shift = 0 this is deterministic_convolution verbatim.
SampledPath deterministic_convolution_stabilized(const SampledPath& g,
                                                 const DiagonalModel& model);

/// One simulation: Wiener increments plus the integral M = f.W, the
/// convolution u = S <> f and the Q-kernel convolution v, all built from
/// the same increment and corrector arrays.
struct PathBundle {
  RngSpec rng;
  int J = 0;
  double T = 1.0;
  std::string integrand_preset;
  DiagonalModel model;
  Matrix increments;
  SampledPath wiener;
  SampledPath integral;       // M = f . W
  SampledPath convolution;    // u = S <> f
  SampledPath q_convolution;  // v, kernel Q(t-s) = (1 - e^{-lambda(t-s)})/lambda
};

/// Integrand presets for bundles. "adapted" builds blocks on-line from the
/// running integral (a bounded sigmoid of ||M(t_i)||), exercising
/// adaptedness; the deterministic presets keep f fixed.
struct IntegrandSpec {
  enum class Preset { ConstantScalar, ConstantDiag, AdaptedSigmoid };
  Preset preset = Preset::ConstantScalar;
  double scale = 1.0;
  std::string name() const;
};

PathBundle simulate_bundle(const IntegrandSpec& spec, const DiagonalModel& model,
                           int J, RngSpec rng, double T = 1.0);

/// Max node defect of the representation S <> f = A v + f.W, relative to
/// 1 + max ||u||. The recursions for u, v, M are algebraically dependent,
/// so this is a pure roundoff quantity (<= 1e-8 on sane inputs).
double representation_check(const PathBundle& bundle);

struct IncrementMomentRow {
  double a, t, p;
  double estimate;  // (E||M_t - M_a||^p)^{1/p}, Monte Carlo
  double bound;     // sqrt(p) F (t-a)^{1/2 - 1/q}
  double ratio;
};

struct IncrementMomentReport {
  std::vector<IncrementMomentRow> rows;
  double fitted_k = 0.0;  // max ratio, first replica half
  double refit_k = 0.0;   // max ratio, second half
};

/// Monte Carlo check of the conditional increment bound for scalar step
/// integrands with known ||f||_{L^q(0,T)}.
IncrementMomentReport conditional_increment_check(const StepIntegrand& f, double q,
                                                  std::size_t replicas, RngSpec rng,
                                                  double T = 1.0);

}  // namespace bpl
