#pragma once

#include <limits>
#include <vector>

#include "bpl/orlicz.hpp"
#include "bpl/sampled_path.hpp"

namespace bpl {

inline constexpr double kInfQ = std::numeric_limits<double>::infinity();

/// Norm specification for B^alpha_{N,q}(I;X).
struct BesovParams {
  double alpha;       // smoothness, in (0,1)
  double q;           // summability in [1,inf]; kInfQ encodes sup
  YoungFunction N;

  BesovParams(double a, double q_, YoungFunction n);
};

enum class ModulusMode { Fast, Exhaustive };

struct LevelTerm {
  int j;                  // dyadic level, shift 2^-j (time units)
  long h_steps;           // realised grid shift
  double increment_norm;  // ||Delta_{h} f||_{L^N(I(h))}
  double modulus;         // sup over shifts <= 2^-j (= increment_norm in fast mode)
  double weighted;        // 2^{j alpha} * level quantity
};

/// Level diagnostics; j ranges over the shifts resolvable on the grid,
/// so refinement studies can detect truncation effects.
struct ModulusProfile {
  int j_min = 0;
  int j_max = 0;
  std::vector<LevelTerm> levels;
};

struct BesovNorm {
  double value = 0.0;
  double lebesgue_part = 0.0;
  double seminorm_part = 0.0;
  ModulusProfile profile;
};

/// Smallest dyadic level j with shift 2^-j <= |I|.
int level_min(const SampledPath& path);
/// Largest dyadic level j with shift 2^-j >= dt.
int level_max(const SampledPath& path);
/// Grid shift realising level j (largest resolvable step count <= 2^-j / dt).
long shift_steps(const SampledPath& path, int j);

/// ||Delta_h f||_{L^N(I(h))} with h = h_steps * dt and left-endpoint
/// quadrature weights dt on I(h) = [t0, t1 - h]. Returns 0 when I(h) is
/// empty (h_steps >= steps).
double increment_norm(const SampledPath& path, long h_steps, const YoungFunction& N);

/// omega_{N,I}(f, 2^-j): sup of increment_norm over resolvable grid shifts
/// h <= 2^-j (Exhaustive), or the single dyadic shift (Fast).
double modulus(const SampledPath& path, int j, const YoungFunction& N,
               ModulusMode mode = ModulusMode::Exhaustive);

/// Dyadic Besov-Orlicz norm: ||f||_{L^N(I)} + l^q of (2^{j alpha} w_j)
/// over resolvable levels, w_j fast or exhaustive.
BesovNorm dyadic_besov_norm(const SampledPath& path, const BesovParams& params,
                            ModulusMode mode = ModulusMode::Fast);

/// q = inf only: ||f||_{L^N} + sup over grid multiples t of
/// t^-alpha omega_{N,I}(f,t) with the exhaustive modulus. Throws
/// std::invalid_argument for q < inf (use dyadic_besov_norm).
BesovNorm full_besov_norm(const SampledPath& path, const BesovParams& params);

/// Gagliardo double-sum seminorm ( sum_{i != k} ||f_i - f_k||^p /
/// |t_i - t_k|^{sp+1} dt^2 )^{1/p}; independent oracle for B^s_{p,p}.
double gagliardo_seminorm(const SampledPath& path, double s, double p);

/// Even reflection at both endpoints, onto [2 t0 - t1, 2 t1 - t0].
SampledPath extend_reflect(const SampledPath& path);

/// Zero on [t0 - (t1-t0), t0], original on [t0, t1]. Requires f(t0) = 0.
SampledPath extend_zero(const SampledPath& path);

/// Affine reparametrisation onto [a, b] (values unchanged).
SampledPath scale_affine(const SampledPath& path, double a, double b);

struct SteklovEstimate {
  double value = 0.0;            // distance_part + derivative_part
  double distance_part = 0.0;    // ||f - g_t||_{L^N}
  double derivative_part = 0.0;  // t ||g_t'||_{L^N}
  double t_effective = 0.0;      // t snapped to the grid
};

/// K-functional upper bound via the Steklov mean g_t(x) = (1/t) int_x^{x+t} f
/// (trapezoid quadrature, forward differences), on the subinterval where
/// g_t is defined. Requires t >= dt. The K-functional itself is not
/// computable from samples; it is sandwiched between omega(f,t)/2 and this
/// estimate, which never exceeds 2 omega(f,t).
SteklovEstimate steklov_k_estimate(const SampledPath& path, double t,
                                   const YoungFunction& N);

enum class PairMode { Exhaustive, Dyadic };

/// sup over grid pairs of ||f(t)-f(s)|| / |t-s|^alpha. Exhaustive is
/// O(n^2) and gated to steps <= 4096; Dyadic restricts to power-of-two
/// step gaps (O(n log n)).
double holder_seminorm(const SampledPath& path, double alpha,
                       PairMode mode = PairMode::Exhaustive);

/// max over the four finest resolvable dyadic shifts h of
/// sup_s ||Delta_h f(s)|| / sqrt(2 h log(1/h)). The coarse shifts are
/// excluded: the Levy modulus is an h -> 0 statement and their
/// normaliser sqrt(2h log(1/h)) is not in the asymptotic regime.
/// Requires resolution 2^-4 or finer and h < 1 (unit-scale intervals).
double levy_ratio(const SampledPath& path);

/// zeta(r) = 8 alpha int_0^r u^{alpha-1} Phi_beta^{-1}(2 L u^-2) du,
/// by adaptive quadrature after the substitution u = r v^{1/alpha}.
double grr_zeta(double r, double alpha, double beta, double interval_length);

}  // namespace bpl
