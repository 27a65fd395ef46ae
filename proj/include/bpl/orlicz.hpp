#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace bpl {

/// Young functions used throughout: convex, non-decreasing, N(0)=0, N(inf)=inf.
///
/// Three parametric families:
///   Power(p)     N(x) = x^p,                     p >= 1
///   ExpPower(b)  N(x) = exp(x^b) - 1,            b >= 1  (Phi_b)
///   PLog(p)      N(x) = x^p log^{p/2}(x + 1),    p >= 1  (N_p)
class YoungFunction {
 public:
  enum class Kind { Power, ExpPower, PLog };

  static YoungFunction power(double p);
  static YoungFunction exp_power(double beta);
  static YoungFunction plog(double p);

  Kind kind() const { return kind_; }
  double param() const { return param_; }

  /// N(x). Throws std::domain_error for x < 0 or non-finite x.
  double operator()(double x) const;

  /// log N(x) for x > 0, stable where N(x) overflows a double.
  double log_value(double x) const;

  /// N^{-1}(y) for y >= 0. Closed form for Power/ExpPower, bracketed
  /// bisection to 1e-12 relative for PLog.
  double inverse(double y) const;

  std::string name() const;

 private:
  YoungFunction(Kind k, double p) : kind_(k), param_(p) {}
  Kind kind_;
  double param_;
};

/// Non-negative quadrature weights on a finite set of atoms.
struct DiscreteMeasure {
  std::vector<double> weights;

  explicit DiscreteMeasure(std::vector<double> w);
  static DiscreteMeasure uniform(std::size_t n, double w);

  double total_mass() const;
};

/// Luxemburg norm inf{ l > 0 : sum_i N(v_i / l) w_i <= 1 } of a
/// non-negative sample vector against a discrete measure.
///
/// Monotone bisection on l, relative tolerance 1e-10. Zero-weight atoms
/// are dropped; an all-zero input (or empty measure) has norm 0.
double luxemburg_norm(std::span<const double> values, const DiscreteMeasure& mu,
                      const YoungFunction& N);

/// Uniform-weight convenience overload (weight w per atom).
double luxemburg_norm(std::span<const double> values, double w,
                      const YoungFunction& N);

/// Middle term of the two-sided Orlicz-norm equivalence:
///   inf_{l>0} (1/l) [ 1 + sum_i N(l v_i) w_i ],
/// minimised by golden-section search over log l after bracket expansion.
/// Lies in [norm, 2*norm]; returns 0 for all-zero input by convention.
double lux_equivalence_mid(std::span<const double> values,
                           const DiscreteMeasure& mu, const YoungFunction& N);

}  // namespace bpl
