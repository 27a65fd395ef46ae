#include "bpl/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bpl {

void StepIntegrand::apply_add(std::size_t i, std::span<const double> dw,
                              double* out) const {
  const double* b = blocks.data() + i * hilbert_dim * state_dim;
  for (std::size_t h = 0; h < hilbert_dim; ++h) {
    double w = dw[h];
    if (w == 0.0) continue;
    const double* row = b + h * state_dim;
    for (std::size_t x = 0; x < state_dim; ++x) out[x] += w * row[x];
  }
}

double StepIntegrand::frobenius(std::size_t i) const {
  const double* b = blocks.data() + i * hilbert_dim * state_dim;
  double s = 0.0;
  for (std::size_t k = 0; k < hilbert_dim * state_dim; ++k) s += b[k] * b[k];
  return std::sqrt(s);
}

double StepIntegrand::mode_norm(std::size_t i, std::size_t k) const {
  double s = 0.0;
  for (std::size_t h = 0; h < hilbert_dim; ++h) {
    double v = block(i, h, k);
    s += v * v;
  }
  return std::sqrt(s);
}

double StepIntegrand::gamma_lq_norm(double q, double T) const {
  if (std::isinf(q)) {
    double m = 0.0;
    for (std::size_t i = 0; i < steps; ++i) m = std::max(m, frobenius(i));
    return m;
  }
  double dt = T / static_cast<double>(steps);
  double s = 0.0;
  for (std::size_t i = 0; i < steps; ++i) s += std::pow(frobenius(i), q) * dt;
  return std::pow(s, 1.0 / q);
}

StepIntegrand StepIntegrand::constant_scalar(int J, double c) {
  StepIntegrand f(std::size_t{1} << J, 1, 1);
  for (std::size_t i = 0; i < f.steps; ++i) f.block_at(i, 0, 0) = c;
  return f;
}

StepIntegrand StepIntegrand::constant_diag(int J, std::span<const double> entries) {
  std::size_t d = entries.size();
  StepIntegrand f(std::size_t{1} << J, d, d);
  for (std::size_t i = 0; i < f.steps; ++i)
    for (std::size_t k = 0; k < d; ++k) f.block_at(i, k, k) = entries[k];
  return f;
}

DiagonalModel::DiagonalModel(std::vector<double> lambdas, double shift_)
    : eigenvalues(std::move(lambdas)), shift(shift_) {
  if (eigenvalues.empty())
    throw std::invalid_argument("DiagonalModel: need at least one mode");
  for (double l : eigenvalues)
    if (!(l >= 0.0) || !std::isfinite(l))
      throw std::invalid_argument("DiagonalModel: eigenvalues must be finite and >= 0");
}

DiagonalModel DiagonalModel::zero(std::size_t d) {
  return DiagonalModel(std::vector<double>(d, 0.0));
}

DiagonalModel DiagonalModel::ou(double lambda) {
  return DiagonalModel(std::vector<double>{lambda});
}

DiagonalModel DiagonalModel::heat(std::size_t d) {
  std::vector<double> l(d);
  for (std::size_t k = 0; k < d; ++k) {
    double pk = M_PI * static_cast<double>(k + 1);
    l[k] = pk * pk;
  }
  return DiagonalModel(std::move(l));
}

Matrix sample_increments(int J, std::size_t m, double T, NormalStream& stream) {
  std::size_t steps = std::size_t{1} << J;
  double sd = std::sqrt(T / static_cast<double>(steps));
  Matrix inc(steps, m);
  for (double& x : inc.data) x = sd * stream.gaussian();
  return inc;
}

Matrix sample_standard_normals(std::size_t steps, std::size_t d, NormalStream& stream) {
  Matrix z(steps, d);
  for (double& x : z.data) x = stream.gaussian();
  return z;
}

SampledPath brownian_from_increments(const Matrix& increments, double t0, double t1) {
  std::size_t steps = increments.rows, d = increments.cols;
  std::vector<double> v((steps + 1) * d, 0.0);
  for (std::size_t i = 0; i < steps; ++i)
    for (std::size_t k = 0; k < d; ++k)
      v[(i + 1) * d + k] = v[i * d + k] + increments(i, k);
  return SampledPath(t0, t1, d, std::move(v));
}

SampledPath sample_brownian(int J, std::size_t d, RngSpec rng, double T) {
  NormalStream stream(rng);
  Matrix inc = sample_increments(J, d, T, stream);
  return brownian_from_increments(inc, 0.0, T);
}

SampledPath ito_integral(const StepIntegrand& f, const Matrix& increments, double T) {
  if (f.steps != increments.rows || f.hilbert_dim != increments.cols)
    throw std::invalid_argument("ito_integral: integrand/increment grid mismatch");
  std::size_t steps = f.steps, d = f.state_dim;
  std::vector<double> v((steps + 1) * d, 0.0);
  for (std::size_t i = 0; i < steps; ++i) {
    for (std::size_t k = 0; k < d; ++k) v[(i + 1) * d + k] = v[i * d + k];
    f.apply_add(i, increments.row(i), v.data() + (i + 1) * d);
  }
  return SampledPath(0.0, T, d, std::move(v));
}

namespace {

// phi1(x) = (1-e^-x)/x, phi2(x) = (1-e^-2x)/(2x) and the variance ratio
// psi = (phi2 - phi1^2)/x^2, series-expanded for small x where the direct
// expressions cancel catastrophically.
struct OuCellCoefs {
  double decay;        // e^{-x}
  double rho;          // phi1: correlation-matching factor on f dW
  double resid;        // sqrt(dt (phi2 - phi1^2)): corrector std per unit mode norm
  double q_weight;     // Q(dt) = dt phi1
  double v_mean;       // (1 - rho)/lambda = dt (1 - phi1)/x
  double v_resid;      // resid/lambda = dt^{3/2} sqrt(psi)
};

OuCellCoefs ou_cell_coefs(double lambda, double dt) {
  OuCellCoefs c{};
  double x = lambda * dt;
  c.decay = std::exp(-x);
  if (x < 0.02) {
    double phi1 = 1.0 + x * (-0.5 + x * (1.0 / 6.0 + x * (-1.0 / 24.0 + x / 120.0)));
    double psi = 1.0 / 12.0 +
                 x * (-1.0 / 12.0 + x * (17.0 / 360.0 + x * (-7.0 / 360.0 + x * 0.0063987)));
    double one_minus_phi1_over_x =
        0.5 + x * (-1.0 / 6.0 + x * (1.0 / 24.0 + x * (-1.0 / 120.0 + x / 720.0)));
    c.rho = phi1;
    c.resid = std::sqrt(dt * psi) * x;
    c.q_weight = dt * phi1;
    c.v_mean = dt * one_minus_phi1_over_x;
    c.v_resid = dt * std::sqrt(dt * psi);
  } else {
    double phi1 = -std::expm1(-x) / x;
    double phi2 = -std::expm1(-2.0 * x) / (2.0 * x);
    double diff = std::max(phi2 - phi1 * phi1, 0.0);
    c.rho = phi1;
    c.resid = std::sqrt(dt * diff);
    c.q_weight = dt * phi1;
    c.v_mean = dt * (1.0 - phi1) / x;
    c.v_resid = dt * std::sqrt(dt * diff) / x;
  }
  return c;
}

}  // namespace

SampledPath stochastic_convolution(const StepIntegrand& f, const DiagonalModel& model,
                                   const Matrix& increments, const Matrix& correctors,
                                   double T) {
  if (f.steps != increments.rows || f.hilbert_dim != increments.cols)
    throw std::invalid_argument("stochastic_convolution: grid mismatch");
  if (correctors.rows != f.steps || correctors.cols != f.state_dim)
    throw std::invalid_argument("stochastic_convolution: corrector shape mismatch");
  if (model.dim() != f.state_dim)
    throw std::invalid_argument("stochastic_convolution: model dimension mismatch");

  std::size_t steps = f.steps, d = f.state_dim;
  double dt = T / static_cast<double>(steps);
  std::vector<OuCellCoefs> coefs(d);
  for (std::size_t k = 0; k < d; ++k) coefs[k] = ou_cell_coefs(model.eigenvalues[k], dt);

  std::vector<double> v((steps + 1) * d, 0.0);
  std::vector<double> fdw(d);
  for (std::size_t i = 0; i < steps; ++i) {
    std::fill(fdw.begin(), fdw.end(), 0.0);
    f.apply_add(i, increments.row(i), fdw.data());
    for (std::size_t k = 0; k < d; ++k) {
      const auto& c = coefs[k];
      double g = c.rho * fdw[k] + c.resid * f.mode_norm(i, k) * correctors(i, k);
      v[(i + 1) * d + k] = c.decay * v[i * d + k] + g;
    }
  }
  return SampledPath(0.0, T, d, std::move(v));
}

SampledPath deterministic_convolution(const SampledPath& g, const DiagonalModel& model) {
  if (model.dim() != g.dim())
    throw std::invalid_argument("deterministic_convolution: dimension mismatch");
  std::size_t steps = g.steps(), d = g.dim();
  double dt = g.dt();
  std::vector<double> decay(d), weight(d);
  for (std::size_t k = 0; k < d; ++k) {
    double x = model.eigenvalues[k] * dt;
    decay[k] = std::exp(-x);
    weight[k] = (x < 1e-12) ? dt : -std::expm1(-x) / model.eigenvalues[k];
  }
  std::vector<double> v((steps + 1) * d, 0.0);
  for (std::size_t i = 0; i < steps; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      double mid = 0.5 * (g(i, k) + g(i + 1, k));
      v[(i + 1) * d + k] = decay[k] * v[i * d + k] + mid * weight[k];
    }
  return SampledPath(g.t_begin(), g.t_end(), d, std::move(v));
}

SampledPath deterministic_convolution_stabilized(const SampledPath& g,
                                                 const DiagonalModel& model) {
  if (model.shift == 0.0) return deterministic_convolution(g, model);
  double mu = model.shift;
  std::vector<double> lifted(model.eigenvalues);
  for (double& l : lifted) l -= mu;
  DiagonalModel stable(std::move(lifted));

  std::vector<double> gv(g.values());
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    double w = std::exp(mu * g.node_time(i));
    for (std::size_t k = 0; k < g.dim(); ++k) gv[i * g.dim() + k] *= w;
  }
  SampledPath weighted(g.t_begin(), g.t_end(), g.dim(), std::move(gv));
  SampledPath u = deterministic_convolution(weighted, stable);
  std::vector<double> uv(u.values());
  for (std::size_t i = 0; i < u.nodes(); ++i) {
    double w = std::exp(-mu * u.node_time(i));
    for (std::size_t k = 0; k < u.dim(); ++k) uv[i * u.dim() + k] *= w;
  }
  return SampledPath(u.t_begin(), u.t_end(), u.dim(), std::move(uv));
}

std::string IntegrandSpec::name() const {
  switch (preset) {
    case Preset::ConstantScalar: return "const_scalar";
    case Preset::ConstantDiag: return "const_diag";
    case Preset::AdaptedSigmoid: return "adapted_sigmoid";
  }
  return "?";
}

PathBundle simulate_bundle(const IntegrandSpec& spec, const DiagonalModel& model,
                           int J, RngSpec rng, double T) {
  std::size_t d = model.dim();
  std::size_t steps = std::size_t{1} << J;
  double dt = T / static_cast<double>(steps);

  NormalStream stream(rng);
  Matrix inc = sample_increments(J, d, T, stream);
  Matrix corr = sample_standard_normals(steps, d, stream);

  StepIntegrand f(steps, d, d);
  switch (spec.preset) {
    case IntegrandSpec::Preset::ConstantScalar:
    case IntegrandSpec::Preset::ConstantDiag:
      for (std::size_t i = 0; i < steps; ++i)
        for (std::size_t k = 0; k < d; ++k) f.block_at(i, k, k) = spec.scale;
      break;
    case IntegrandSpec::Preset::AdaptedSigmoid: {
      // f_i = scale * sigmoid(||M(t_i)||) per mode, built on-line: block i
      // only sees increments strictly before cell i.
      std::vector<double> M(d, 0.0);
      for (std::size_t i = 0; i < steps; ++i) {
        double nm = 0.0;
        for (double x : M) nm += x * x;
        double s = spec.scale / (1.0 + std::exp(-std::sqrt(nm)));
        for (std::size_t k = 0; k < d; ++k) f.block_at(i, k, k) = s;
        f.apply_add(i, inc.row(i), M.data());
      }
      break;
    }
  }

  SampledPath wiener = brownian_from_increments(inc, 0.0, T);
  SampledPath integral = ito_integral(f, inc, T);
  SampledPath convolution = stochastic_convolution(f, model, inc, corr, T);

  // Q-kernel convolution v: v_{i+1} = e^-x v_i + Q(dt) M_i + (1/l)(f dW - g),
  // from the same normals; then u = -lambda v + M holds up to roundoff.
  std::vector<OuCellCoefs> coefs(d);
  for (std::size_t k = 0; k < d; ++k)
    coefs[k] = ou_cell_coefs(model.eigenvalues[k], dt);
  std::vector<double> v((steps + 1) * d, 0.0);
  std::vector<double> fdw(d);
  for (std::size_t i = 0; i < steps; ++i) {
    std::fill(fdw.begin(), fdw.end(), 0.0);
    f.apply_add(i, inc.row(i), fdw.data());
    for (std::size_t k = 0; k < d; ++k) {
      const auto& c = coefs[k];
      double cell = c.v_mean * fdw[k] - c.v_resid * f.mode_norm(i, k) * corr(i, k);
      v[(i + 1) * d + k] =
          c.decay * v[i * d + k] + c.q_weight * integral(i, k) + cell;
    }
  }
  SampledPath q_convolution(0.0, T, d, std::move(v));

  return PathBundle{rng,
                    J,
                    T,
                    spec.name(),
                    model,
                    std::move(inc),
                    std::move(wiener),
                    std::move(integral),
                    std::move(convolution),
                    std::move(q_convolution)};
}

double representation_check(const PathBundle& bundle) {
  const auto& u = bundle.convolution;
  const auto& v = bundle.q_convolution;
  const auto& M = bundle.integral;
  if (u.nodes() != v.nodes() || u.nodes() != M.nodes() || u.dim() != v.dim())
    throw std::invalid_argument("representation_check: bundle paths disagree on grid");
  double worst = 0.0;
  for (std::size_t i = 0; i < u.nodes(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < u.dim(); ++k) {
      double d = u(i, k) - (-bundle.model.eigenvalues[k] * v(i, k) + M(i, k));
      s += d * d;
    }
    worst = std::max(worst, std::sqrt(s));
  }
  return worst / (1.0 + u.max_row_norm());
}

IncrementMomentReport conditional_increment_check(const StepIntegrand& f, double q,
                                                  std::size_t replicas, RngSpec rng,
                                                  double T) {
  if (f.state_dim != 1 || f.hilbert_dim != 1)
    throw std::invalid_argument("conditional_increment_check: scalar integrands only");
  double F = f.gamma_lq_norm(q, T);
  std::size_t steps = f.steps;
  if (steps == 0 || (steps & (steps - 1)) != 0)
    throw std::invalid_argument("conditional_increment_check: steps must be 2^J");
  int J = 0;
  while ((std::size_t{1} << J) < steps) ++J;

  const std::pair<double, double> windows[] = {
      {0.0, 0.25 * T}, {0.0, T}, {0.25 * T, 0.75 * T}, {0.5 * T, T}};
  const double ps[] = {1.0, 2.0, 4.0};

  // per-replica |M_t - M_a|, accumulated into moment sums per (window, p)
  double sums[2][4][3] = {};
  std::size_t half = replicas / 2;
  for (std::size_t r = 0; r < replicas; ++r) {
    NormalStream stream({rng.master_seed, rng.stream_id + r});
    Matrix inc = sample_increments(J, 1, T, stream);
    SampledPath M = ito_integral(f, inc, T);
    for (int w = 0; w < 4; ++w) {
      std::size_t ia = static_cast<std::size_t>(windows[w].first / T * steps + 0.5);
      std::size_t it = static_cast<std::size_t>(windows[w].second / T * steps + 0.5);
      double d = std::abs(M(it, 0) - M(ia, 0));
      for (int ip = 0; ip < 3; ++ip)
        sums[r < half ? 0 : 1][w][ip] += std::pow(d, ps[ip]);
    }
  }

  IncrementMomentReport rep;
  double k_half[2] = {0.0, 0.0};
  for (int w = 0; w < 4; ++w) {
    double gap = windows[w].second - windows[w].first;
    for (int ip = 0; ip < 3; ++ip) {
      double p = ps[ip];
      double bound = std::sqrt(p) * F * std::pow(gap, 0.5 - (std::isinf(q) ? 0.0 : 1.0 / q));
      double est_all = std::pow((sums[0][w][ip] + sums[1][w][ip]) /
                                    static_cast<double>(replicas),
                                1.0 / p);
      double ratio = (gap > 0.0 && bound > 0.0) ? est_all / bound : 0.0;
      rep.rows.push_back({windows[w].first, windows[w].second, p, est_all, bound, ratio});
      for (int hf = 0; hf < 2; ++hf) {
        double n = static_cast<double>(hf == 0 ? half : replicas - half);
        double est = std::pow(sums[hf][w][ip] / n, 1.0 / p);
        if (bound > 0.0) k_half[hf] = std::max(k_half[hf], est / bound);
      }
    }
  }
  rep.fitted_k = k_half[0];
  rep.refit_k = k_half[1];
  return rep;
}

}  // namespace bpl
