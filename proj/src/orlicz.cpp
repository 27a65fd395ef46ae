#include "bpl/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bpl {

namespace {

constexpr double kExpOverflow = 700.0;  // exp argument beyond which doubles overflow

double int_pow(double x, long n) {
  double r = 1.0, b = x;
  for (; n > 0; n >>= 1) {
    if (n & 1) r *= b;
    b *= b;
  }
  return r;
}

// x^p, with exact repeated squaring when p is a small integer.
double pow_fast(double x, double p) {
  long ip = static_cast<long>(p);
  if (static_cast<double>(ip) == p && ip >= 1 && ip <= 64) return int_pow(x, ip);
  return std::pow(x, p);
}

}  // namespace

YoungFunction YoungFunction::power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("YoungFunction::power: require p >= 1");
  return YoungFunction(Kind::Power, p);
}

YoungFunction YoungFunction::exp_power(double beta) {
  if (!(beta >= 1.0) || !std::isfinite(beta))
    throw std::invalid_argument("YoungFunction::exp_power: require beta >= 1");
  return YoungFunction(Kind::ExpPower, beta);
}

YoungFunction YoungFunction::plog(double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("YoungFunction::plog: require p >= 1");
  return YoungFunction(Kind::PLog, p);
}

double YoungFunction::operator()(double x) const {
  if (!(x >= 0.0))
    throw std::domain_error("YoungFunction: argument must be >= 0");
  switch (kind_) {
    case Kind::Power:
      return pow_fast(x, param_);
    case Kind::ExpPower: {
      double a = pow_fast(x, param_);
      if (a > kExpOverflow) return std::numeric_limits<double>::infinity();
      return std::expm1(a);
    }
    case Kind::PLog: {
      if (x == 0.0) return 0.0;
      return pow_fast(x, param_) * pow_fast(std::log1p(x), param_ / 2.0);
    }
  }
  return 0.0;
}

double YoungFunction::log_value(double x) const {
  if (!(x > 0.0)) throw std::domain_error("YoungFunction::log_value: x > 0 required");
  switch (kind_) {
    case Kind::Power:
      return param_ * std::log(x);
    case Kind::ExpPower: {
      double a = pow_fast(x, param_);
      // log(e^a - 1) = a + log(1 - e^-a)
      if (a > 36.0) return a;  // correction below 1e-16
      return a + std::log1p(-std::exp(-a));
    }
    case Kind::PLog:
      return param_ * std::log(x) + 0.5 * param_ * std::log(std::log1p(x));
  }
  return 0.0;
}

double YoungFunction::inverse(double y) const {
  if (!(y >= 0.0) || !std::isfinite(y))
    throw std::domain_error("YoungFunction::inverse: argument must be finite and >= 0");
  if (y == 0.0) return 0.0;
  switch (kind_) {
    case Kind::Power:
      return std::pow(y, 1.0 / param_);
    case Kind::ExpPower:
      return std::pow(std::log1p(y), 1.0 / param_);
    case Kind::PLog: {
      // bracketed bisection on the defining equation, 1e-12 relative
      double lo = 0.0, hi = std::max(1.0, std::pow(y, 1.0 / param_));
      while ((*this)(hi) < y) hi *= 2.0;
      for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        ((*this)(mid) < y ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

std::string YoungFunction::name() const {
  switch (kind_) {
    case Kind::Power:
      return "power:" + std::to_string(param_);
    case Kind::ExpPower:
      return "exp:" + std::to_string(param_);
    case Kind::PLog:
      return "plog:" + std::to_string(param_);
  }
  return "?";
}

DiscreteMeasure::DiscreteMeasure(std::vector<double> w) : weights(std::move(w)) {
  double mass = 0.0;
  for (double x : weights) {
    if (!(x >= 0.0) || !std::isfinite(x))
      throw std::invalid_argument("DiscreteMeasure: weights must be finite and >= 0");
    mass += x;
  }
  if (!std::isfinite(mass))
    throw std::invalid_argument("DiscreteMeasure: total mass must be finite");
}

DiscreteMeasure DiscreteMeasure::uniform(std::size_t n, double w) {
  return DiscreteMeasure(std::vector<double>(n, w));
}

double DiscreteMeasure::total_mass() const {
  double m = 0.0;
  for (double x : weights) m += x;
  return m;
}

namespace {

struct Atoms {
  std::vector<double> v, w;
  double vmax = 0.0;
  double mass = 0.0;
};

// Drops zero-weight atoms and validates values.
Atoms collect(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size())
    throw std::invalid_argument("luxemburg_norm: values/weights length mismatch");
  Atoms a;
  a.v.reserve(values.size());
  a.w.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0)
      throw std::domain_error("luxemburg_norm: values must be finite and >= 0");
    if (weights[i] == 0.0) continue;
    a.v.push_back(values[i]);
    a.w.push_back(weights[i]);
    a.vmax = std::max(a.vmax, values[i]);
    a.mass += weights[i];
  }
  return a;
}

// sum_i N(v_i / l) w_i, compared against 1.  Overflow-prone inputs are
// routed through log-sum-exp so that the comparison stays meaningful.
bool constraint_at_most_one(const Atoms& a, const YoungFunction& N, double l) {
  if (N.kind() == YoungFunction::Kind::ExpPower) {
    double amax = std::pow(a.vmax / l, N.param());
    if (amax > kExpOverflow) {
      // log of the sum via log-sum-exp around the largest term
      double m = -std::numeric_limits<double>::infinity();
      std::vector<double> t(a.v.size());
      for (std::size_t i = 0; i < a.v.size(); ++i) {
        double x = a.v[i] / l;
        t[i] = (x > 0.0 ? N.log_value(x) : -std::numeric_limits<double>::infinity()) +
               std::log(a.w[i]);
        m = std::max(m, t[i]);
      }
      double s = 0.0;
      for (double ti : t) s += std::exp(ti - m);
      return m + std::log(s) <= 0.0;
    }
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    s += N(a.v[i] / l) * a.w[i];
    if (s > 1.0) return false;
  }
  return s <= 1.0;
}

}  // namespace

double luxemburg_norm(std::span<const double> values, const DiscreteMeasure& mu,
                      const YoungFunction& N) {
  Atoms a = collect(values, mu.weights);
  if (a.vmax == 0.0 || a.mass == 0.0) return 0.0;

  double hi = a.vmax * (a.mass + 1.0) * 10.0;
  double lo = a.vmax / (10.0 * (1.0 + N.inverse(1.0 / a.mass)));
  while (!constraint_at_most_one(a, N, hi)) hi *= 2.0;
  while (constraint_at_most_one(a, N, lo)) {
    lo *= 0.5;
    if (lo < 1e-300) return 0.0;
  }
  // G(lo) > 1 >= G(hi); geometric bisection to 1e-10 relative
  for (int it = 0; it < 200 && (hi - lo) > 1e-10 * hi; ++it) {
    double mid = std::sqrt(lo * hi);
    (constraint_at_most_one(a, N, mid) ? hi : lo) = mid;
  }
  return std::sqrt(lo * hi);
}

double luxemburg_norm(std::span<const double> values, double w,
                      const YoungFunction& N) {
  return luxemburg_norm(values, DiscreteMeasure::uniform(values.size(), w), N);
}

double lux_equivalence_mid(std::span<const double> values,
                           const DiscreteMeasure& mu, const YoungFunction& N) {
  Atoms a = collect(values, mu.weights);
  if (a.vmax == 0.0 || a.mass == 0.0) return 0.0;

  auto objective = [&](double logl) {
    double l = std::exp(logl);
    double s = 1.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) {
      double n = N(a.v[i] * l);
      if (!std::isfinite(n)) return std::numeric_limits<double>::infinity();
      s += n * a.w[i];
      if (!std::isfinite(s)) return std::numeric_limits<double>::infinity();
    }
    return s / l;
  };

  // expand a bracket [la, lb] around a point with the middle sample lowest
  double lc = -std::log(a.vmax);  // l ~ 1/max: N(l v) = O(N(1)), sane start
  double la = lc - 1.0, lb = lc + 1.0;
  double fa = objective(la), fc = objective(lc), fb = objective(lb);
  for (int it = 0; it < 400 && !(fc <= fa && fc <= fb); ++it) {
    if (fa < fc) {
      lb = lc; fb = fc; lc = la; fc = fa; la -= 1.0; fa = objective(la);
    } else {
      la = lc; fa = fc; lc = lb; fc = fb; lb += 1.0; fb = objective(lb);
    }
  }

  constexpr double kGolden = 0.6180339887498949;
  double x1 = lb - kGolden * (lb - la), x2 = la + kGolden * (lb - la);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 300 && (lb - la) > 1e-12; ++it) {
    if (f1 < f2) {
      lb = x2; x2 = x1; f2 = f1;
      x1 = lb - kGolden * (lb - la); f1 = objective(x1);
    } else {
      la = x1; x1 = x2; f1 = f2;
      x2 = la + kGolden * (lb - la); f2 = objective(x2);
    }
  }
  return std::min(f1, f2);
}

}  // namespace bpl
