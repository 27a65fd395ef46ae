// Acceptance suite: one pass/fail line per criterion, each with its declared
// tolerance and runtime budget. Exit code 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "bpl/besov.hpp"
#include "bpl/experiments.hpp"
#include "bpl/orlicz.hpp"
#include "bpl/parallel.hpp"
#include "bpl/sampled_path.hpp"
#include "bpl/stochastic.hpp"

using namespace bpl;

namespace {

int g_failures = 0;
int g_threads = 2;

struct Criterion {
  const char* name;
  double time_limit_s;
  bool (*fn)(std::string&);
};

SampledPath random_path(int J, std::uint64_t seed) {
  // alternating rough and smooth inputs on [0,1]
  if (seed % 2 == 0) return sample_brownian(J, 1, {seed, 0});
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double a = U(gen), b = U(gen), c = U(gen), d = U(gen);
  std::size_t n = (std::size_t{1} << J) + 1;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / static_cast<double>(n - 1);
    v[i] = a * std::sin(2 * M_PI * t) + b * std::cos(7 * M_PI * t) + c * t + d * t * t;
  }
  return SampledPath(0, 1, 1, std::move(v));
}

YoungFunction young_for(int rep) {
  switch (rep % 4) {
    case 0: return YoungFunction::power(2);
    case 1: return YoungFunction::power(3);
    case 2: return YoungFunction::exp_power(2);
    default: return YoungFunction::power(2);
  }
}

// 1. Luxemburg sandwich on random discrete inputs
bool c1_lux_sandwich(std::string& detail) {
  std::mt19937_64 gen(101);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    std::size_t n = 1 + gen() % 48;
    std::vector<double> v(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = (U(gen) < 0.05) ? 0.0 : 4.0 * U(gen);
      w[i] = 0.02 + 2.0 * U(gen);
    }
    YoungFunction N = (rep % 3 == 0)   ? YoungFunction::power(1.0 + 4.0 * U(gen))
                      : (rep % 3 == 1) ? YoungFunction::exp_power(1.0 + U(gen))
                                       : YoungFunction::plog(1.0 + 2.0 * U(gen));
    DiscreteMeasure mu(w);
    double lux = luxemburg_norm(v, mu, N);
    double mid = lux_equivalence_mid(v, mu, N);
    worst = std::max({worst, lux - mid, mid - 2.0 * lux});
  }
  detail = "max slack " + std::to_string(worst);
  return worst <= 1e-8;
}

// 2. dyadic norm closed-form oracles at J = 12
bool c2_dyadic_oracles(std::string& detail) {
  auto heavi = SampledPath::heaviside(0, 1, 0.5, 12);
  double got_h =
      dyadic_besov_norm(heavi, BesovParams(0.25, kInfQ, YoungFunction::power(2)),
                        ModulusMode::Fast)
          .value;
  double want_h = std::exp2(-0.5) + std::exp2(-0.25);

  auto ramp = SampledPath::ramp(0, 1, 12);
  auto got_r = dyadic_besov_norm(ramp, BesovParams(0.5, kInfQ, YoungFunction::power(2)),
                                 ModulusMode::Fast);
  // closed form for the left-endpoint grid quadrature of t^2:
  // sum i^2 dt^3 = (m-1) m (2m-1)/6 * dt^3, plus the seminorm value 1/2
  double m = std::exp2(12), dt = 1.0 / m;
  double want_r = std::sqrt((m - 1.0) * m * (2.0 * m - 1.0) / 6.0 * dt * dt * dt) + 0.5;
  double cont_r = 1.0 / std::sqrt(3.0) + 0.5;

  double err_h = std::abs(got_h - want_h) / want_h;
  double err_r = std::abs(got_r.value - want_r) / want_r;
  double err_cont = std::abs(got_r.value - cont_r) / cont_r;
  detail = "heaviside rel err " + std::to_string(err_h) + ", ramp rel err " +
           std::to_string(err_r) + " (continuum gap " + std::to_string(err_cont) + ")";
  return err_h <= 1e-6 && err_r <= 1e-6 && err_cont <= 5e-4;
}

// 3. dyadic fast <= full <= 2^alpha * dyadic exhaustive
bool c3_sandwich(std::string& detail) {
  const int n_paths = 500;
  std::vector<double> slack(n_paths, 0.0);
  parallel_replicas(n_paths, g_threads, [&](std::size_t rep) {
    auto path = random_path(10, 3000 + rep);
    double alpha = 0.25 + 0.25 * (rep % 3);
    BesovParams params(alpha, kInfQ, young_for(static_cast<int>(rep)));
    double fast = dyadic_besov_norm(path, params, ModulusMode::Fast).seminorm_part;
    double exh = dyadic_besov_norm(path, params, ModulusMode::Exhaustive).seminorm_part;
    double full = full_besov_norm(path, params).seminorm_part;
    slack[rep] = std::max(fast - full, full - std::exp2(alpha) * exh);
  });
  double worst = *std::max_element(slack.begin(), slack.end());
  detail = "max slack " + std::to_string(worst) + " over 500 paths";
  return worst <= 1e-10;
}

// 4. Steklov estimate below twice the modulus at every resolved t
bool c4_steklov(std::string& detail) {
  const int n_paths = 500;
  std::vector<double> worst(n_paths, 0.0);
  parallel_replicas(n_paths, g_threads, [&](std::size_t rep) {
    auto path = random_path(8, 4000 + rep);
    YoungFunction N = (rep % 5 == 0) ? YoungFunction::exp_power(2)
                                     : YoungFunction::power(2 + rep % 2);
    long steps = static_cast<long>(path.steps());
    double omega = 0.0, w = 0.0;
    for (long k = 1; k < steps; ++k) {
      omega = std::max(omega, increment_norm(path, k, N));
      auto est = steklov_k_estimate(path, k * path.dt(), N);
      if (omega > 0.0) w = std::max(w, est.value / (2.0 * omega));
    }
    worst[rep] = w;
  });
  double wmax = *std::max_element(worst.begin(), worst.end());
  detail = "max estimate/(2 omega) = " + std::to_string(wmax);
  return wmax <= 1.0 + 1e-6;
}

// 5. pointwise GRR inequality with grr_zeta, no fitted constant
bool c5_grr(std::string& detail) {
  const int n_paths = 200;
  const int J = 10;
  std::size_t steps = std::size_t{1} << J;
  double dt = 1.0 / static_cast<double>(steps);
  std::vector<double> zeta(steps + 1, 0.0);
  for (std::size_t k = 1; k <= steps; ++k)
    zeta[k] = grr_zeta(dt * static_cast<double>(k), 0.5, 2.0, 1.0);

  BesovParams params(0.5, kInfQ, YoungFunction::exp_power(2));
  std::vector<long> viol(n_paths, 0);
  std::vector<double> ratio(n_paths, 0.0);
  parallel_replicas(n_paths, g_threads, [&](std::size_t rep) {
    auto W = sample_brownian(J, 1, {5000 + rep, 0});
    double lam = full_besov_norm(W, params).seminorm_part;
    long v = 0;
    double worst = 0.0;
    for (std::size_t gap = 1; gap <= steps; ++gap) {
      double bound = lam * zeta[gap];
      for (std::size_t i = 0; i + gap < W.nodes(); ++i) {
        double d = W.row_dist(i + gap, i);
        worst = std::max(worst, d / bound);
        if (d > bound) ++v;
      }
    }
    viol[rep] = v;
    ratio[rep] = worst;
  });
  long total = 0;
  for (long v : viol) total += v;
  detail = std::to_string(total) + " violations, max pair ratio " +
           std::to_string(*std::max_element(ratio.begin(), ratio.end()));
  return total == 0;
}

// 6. Ito isometry and OU exactness at the final time
bool c6_isometry(std::string& detail) {
  const std::size_t R = 10000;
  auto fhalf = StepIntegrand::constant_scalar(10, 0.0);
  for (std::size_t i = 0; i < fhalf.steps / 2; ++i) fhalf.block_at(i, 0, 0) = 1.0;
  auto fone = StepIntegrand::constant_scalar(10, 1.0);
  DiagonalModel ou = DiagonalModel::ou(1.0);

  std::vector<double> m(R), u(R);
  parallel_replicas(R, g_threads, [&](std::size_t r) {
    NormalStream stream({6000, r});
    Matrix inc = sample_increments(10, 1, 1.0, stream);
    Matrix corr = sample_standard_normals(fone.steps, 1, stream);
    auto M = ito_integral(fhalf, inc);
    auto U = stochastic_convolution(fone, ou, inc, corr);
    m[r] = M(M.nodes() - 1, 0);
    u[r] = U(U.nodes() - 1, 0);
  });
  auto var_se = [&](const std::vector<double>& x) {
    double s2 = 0.0, s4 = 0.0;
    for (double v : x) {
      s2 += v * v;
      s4 += v * v * v * v;
    }
    double var = s2 / static_cast<double>(x.size());
    double se = std::sqrt((s4 / static_cast<double>(x.size()) - var * var) /
                          static_cast<double>(x.size()));
    return std::pair<double, double>{var, se};
  };
  auto [vm, sm] = var_se(m);
  auto [vu, su] = var_se(u);
  double want_m = 0.5, want_u = (1.0 - std::exp(-2.0)) / 2.0;
  detail = "Var M(1)=" + std::to_string(vm) + " (want 0.5), Var u(1)=" +
           std::to_string(vu) + " (want " + std::to_string(want_u) + ")";
  return std::abs(vm - want_m) <= 3.0 * sm && std::abs(vu - want_u) <= 3.0 * su;
}

// 7. representation identity on the d=32 heat preset
bool c7_representation(std::string& detail) {
  const std::size_t R = 100;
  std::vector<double> defect(R);
  parallel_replicas(R, g_threads, [&](std::size_t r) {
    auto b = simulate_bundle({IntegrandSpec::Preset::ConstantDiag, 1.0},
                             DiagonalModel::heat(32), 10, {7000, r});
    defect[r] = representation_check(b);
  });
  double worst = *std::max_element(defect.begin(), defect.end());
  detail = "max relative defect " + std::to_string(worst);
  return worst <= 1e-8;
}

bool run_and_check(ExperimentReport (*runner)(const ExperimentConfig&),
                   const std::string& id, std::string& detail) {
  ExperimentConfig cfg = default_config(id);
  cfg.threads = g_threads;
  ExperimentReport rep = runner(cfg);
  detail.clear();
  for (const auto& a : rep.assertions)
    if (!a.passed) detail += "[" + a.name + ": " + a.detail + "] ";
  if (detail.empty()) detail = std::to_string(rep.assertions.size()) + " assertions pass";
  return rep.passed() && !rep.degraded;
}

// 8. moment growth flat in p
bool c8_moments(std::string& detail) {
  return run_and_check(run_moment_growth, "moment_growth", detail);
}

// 9. Gaussian tails with delta scaling
bool c9_tails(std::string& detail) {
  return run_and_check(run_tail_bound, "tail_bound", detail);
}

// 10. explicit-construction inequality for the Gaussian tail axiom
bool c10_axiom(std::string& detail) {
  return run_and_check(run_axiom_gauss, "axiom_gauss", detail);
}

// 11. sharpness triptych: Phi2 stability, Holder growth, l^2 divergence, Levy
bool c11_sharpness(std::string& detail) {
  std::string d1, d2;
  bool ok1 = run_and_check(run_refinement_stability, "refinement_stability", d1);
  bool ok2 = run_and_check(run_levy_modulus, "levy_modulus", d2);
  detail = d1 + " | levy: " + d2;
  return ok1 && ok2;
}

// 12. solution-map continuity ladder on the heat preset
bool c12_solution_map(std::string& detail) {
  return run_and_check(run_solution_map_continuity, "solution_map_continuity", detail);
}

// 13. maximal-regularity ratio stability
bool c13_detconv(std::string& detail) {
  return run_and_check(run_detconv_ratio, "detconv_ratio", detail);
}

const Criterion kCriteria[] = {
    {"1 luxemburg sandwich", 10.0, c1_lux_sandwich},
    {"2 dyadic norm oracles", 5.0, c2_dyadic_oracles},
    {"3 dyadic/continuous sandwich", 120.0, c3_sandwich},
    {"4 steklov/modulus bound", 60.0, c4_steklov},
    {"5 GRR embedding", 120.0, c5_grr},
    {"6 ito isometry exactness", 30.0, c6_isometry},
    {"7 representation identity", 60.0, c7_representation},
    {"8 moment growth", 180.0, c8_moments},
    {"9 gaussian tails", 300.0, c9_tails},
    {"10 gaussian tail axiom", 1.0, c10_axiom},
    {"11 sharpness triptych", 600.0, c11_sharpness},
    {"12 solution-map continuity", 300.0, c12_solution_map},
    {"13 maximal-regularity ratio", 180.0, c13_detconv},
};

}  // namespace

int main() {
  unsigned hw = std::thread::hardware_concurrency();
  g_threads = hw > 0 ? static_cast<int>(hw) : 2;
  std::printf("acceptance suite, %d worker threads\n", g_threads);
  for (const auto& c : kCriteria) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = elapsed < c.time_limit_s;
    bool pass = ok && in_time;
    if (!pass) ++g_failures;
    std::printf("[%s] criterion %s: %s (%.1f s, budget %.0f s)\n",
                pass ? "PASS" : "FAIL", c.name, detail.c_str(), elapsed,
                c.time_limit_s);
    std::fflush(stdout);
  }
  if (g_failures) std::printf("%d criterion(s) FAILED\n", g_failures);
  else std::printf("all 13 criteria PASSED\n");
  return g_failures == 0 ? 0 : 1;
}
