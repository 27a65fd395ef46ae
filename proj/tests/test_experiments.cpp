#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bpl/experiments.hpp"
#include "bpl/stochastic.hpp"

using namespace bpl;

TEST_CASE("flat config parsing") {
  std::stringstream ss(
      "# comment\n"
      "J = 8\n"
      "seed=99   # trailing comment\n"
      "young = exp:2\n"
      "p_grid = 1, 2,4\n"
      "svg = true\n");
  auto cfg = FlatConfig::from_stream(ss, "test.cfg");
  CHECK(cfg.get_int("J", 0) == 8);
  CHECK(cfg.get_u64("seed", 0) == 99);
  CHECK(cfg.get_string("young", "") == "exp:2");
  CHECK(cfg.get_real_list("p_grid", {}) == std::vector<double>{1, 2, 4});
  CHECK(cfg.get_bool("svg", false));
  cfg.reject_unknown();  // everything consumed

  std::stringstream dup("a = 1\na = 2\n");
  CHECK_THROWS(FlatConfig::from_stream(dup, "dup.cfg"));
  std::stringstream noeq("justakey\n");
  CHECK_THROWS(FlatConfig::from_stream(noeq, "noeq.cfg"));

  FlatConfig c2;
  c2.set("replicas=50");
  CHECK(c2.get_int("replicas", 0) == 50);
  c2.set("J", "12");
  CHECK(c2.get_int("J", 0) == 12);
  CHECK_THROWS(c2.set("no_equals_sign"));

  FlatConfig c3;
  c3.set("J=oops");
  CHECK_THROWS(c3.get_int("J", 0));
}

TEST_CASE("unknown keys are rejected with their source line") {
  std::stringstream ss("J = 8\nmystery_key = 3\n");
  auto cfg = FlatConfig::from_stream(ss, "bad.cfg");
  try {
    resolve_config("levy_modulus", cfg);
    CHECK(false);
  } catch (const std::runtime_error& e) {
    std::string msg = e.what();
    CHECK(msg.find("mystery_key") != std::string::npos);
    CHECK(msg.find("bad.cfg:2") != std::string::npos);
  }
}

TEST_CASE("experiment defaults and degraded detection") {
  for (const auto& id : experiment_ids()) {
    auto cfg = default_config(id);
    CHECK(cfg.experiment == id);
    CHECK(cfg.replicas == cfg.default_replicas);
    CHECK(!cfg.degraded());
  }
  FlatConfig f;
  f.set("replicas=10");
  auto cfg = resolve_config("axiom_gauss", f);
  CHECK(cfg.degraded());
  CHECK_THROWS(default_config("nope"));

  // q ties alpha
  FlatConfig f2;
  f2.set("q=4");
  auto cfg2 = resolve_config("moment_growth", f2);
  CHECK(cfg2.alpha == doctest::Approx(0.25));
}

TEST_CASE("axiom_gauss runs and passes with the paper factor") {
  auto cfg = default_config("axiom_gauss");
  cfg.threads = 1;
  auto rep = run_axiom_gauss(cfg);
  CHECK(rep.passed());
  CHECK(!rep.degraded);
  // 12 closed-form inequalities + one Monte Carlo cross-check
  CHECK(rep.assertions.size() == cfg.p_grid.size() * cfg.kappa_grid.size() + 1);
  const Table* t = rep.table("axiom_gauss");
  REQUIRE(t != nullptr);
  for (const auto& row : t->rows) CHECK(row[4] > 1.0);  // margin rhs/lhs
}

TEST_CASE("reports are pure functions of (config, seed)") {
  auto cfg = default_config("levy_modulus");
  cfg.replicas = 25;
  cfg.levy_J = 10;
  cfg.threads = 2;
  auto r1 = run_levy_modulus(cfg);
  auto r2 = run_levy_modulus(cfg);
  auto j1 = r1.to_json(), j2 = r2.to_json();
  j1.erase("wall_clock_seconds");
  j2.erase("wall_clock_seconds");
  bool identical = (j1 == j2);
  CHECK(identical);
  CHECK(r1.degraded);  // 25 < 200 default
  for (const auto& a : r1.assertions) CHECK((a.passed || a.warning));
}

TEST_CASE("degraded runs downgrade failures to warnings") {
  auto cfg = default_config("levy_modulus");
  cfg.replicas = 3;
  cfg.levy_J = 5;  // tiny grid: the band check may fail, but only warns
  auto rep = run_levy_modulus(cfg);
  CHECK(rep.degraded);
  CHECK(rep.passed());
}

TEST_CASE("report json carries the full manifest") {
  auto cfg = default_config("levy_modulus");
  cfg.replicas = 10;
  cfg.levy_J = 8;
  auto rep = run_levy_modulus(cfg);
  auto j = rep.to_json();
  for (const char* key : {"experiment", "J", "d", "replicas", "seed", "threads", "out",
                          "svg", "alpha", "q", "young", "tol"})
    CHECK(j["config"].contains(key));
  CHECK(j.contains("assertions"));
  CHECK(j.contains("tables"));
  CHECK(j["config"]["seed"] == cfg.seed);
}

TEST_CASE("thread count does not change results") {
  auto cfg = default_config("moment_growth");
  cfg.replicas = 40;
  cfg.J = 6;
  cfg.threads = 1;
  auto r1 = run_moment_growth(cfg);
  cfg.threads = 4;
  auto r2 = run_moment_growth(cfg);
  const Table *t1 = r1.table("moments"), *t2 = r2.table("moments");
  REQUIRE(t1 != nullptr);
  REQUIRE(t2 != nullptr);
  for (std::size_t i = 0; i < t1->rows.size(); ++i)
    for (std::size_t c = 0; c < t1->rows[i].size(); ++c)
      CHECK(t1->rows[i][c] == t2->rows[i][c]);  // bitwise despite scheduling
}

TEST_CASE("stats helpers") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(quantile({0.0, 1.0, 2.0, 3.0, 4.0}, 0.25) == doctest::Approx(1.0));
  CHECK_THROWS(median({}));
  auto lf = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(lf.slope == doctest::Approx(2.0));
  CHECK(lf.intercept == doctest::Approx(1.0));
  CHECK(lf.r2 == doctest::Approx(1.0));
  CHECK_THROWS(fit_line({1, 1, 1}, {1, 2, 3}));
}

TEST_CASE("moment growth: degenerate and scaled integrands") {
  auto cfg = default_config("moment_growth");
  cfg.replicas = 60;
  cfg.J = 6;
  cfg.threads = 2;

  // zero integrand: all estimates zero
  cfg.scale = 0.0;
  auto rz = run_moment_growth(cfg);
  bool found = false;
  for (const auto& a : rz.assertions)
    if (a.name == "zero_integrand") {
      CHECK(a.passed);
      found = true;
    }
  CHECK(found);
  for (const auto& row : rz.table("moments")->rows) CHECK(row[1] == 0.0);

  // doubling f doubles every m_p pathwise
  cfg.scale = 1.0;
  auto r1 = run_moment_growth(cfg);
  cfg.scale = 2.0;
  auto r2 = run_moment_growth(cfg);
  const Table *t1 = r1.table("moments"), *t2 = r2.table("moments");
  for (std::size_t i = 0; i < t1->rows.size(); ++i)
    CHECK(t2->rows[i][1] == doctest::Approx(2.0 * t1->rows[i][1]).epsilon(1e-9));
}

TEST_CASE("moment estimates are stable under grid refinement") {
  // medians of the B^{1/2}_{1,inf} norm of the integral drift < 10%
  // between J=8 and J=12
  auto median_norm = [&](int J) {
    std::vector<double> vals;
    StepIntegrand f = StepIntegrand::constant_scalar(J, 1.0);
    for (std::uint64_t r = 0; r < 300; ++r) {
      NormalStream stream({31415, r});
      Matrix inc = sample_increments(J, 1, 1.0, stream);
      vals.push_back(dyadic_besov_norm(ito_integral(f, inc),
                                       BesovParams(0.5, kInfQ, YoungFunction::power(1)))
                         .value);
    }
    return median(vals);
  };
  double m8 = median_norm(8), m12 = median_norm(12);
  CHECK(std::abs(m12 / m8 - 1.0) < 0.10);
}

TEST_CASE("tail bound: zero preset reports vanishing exceedance") {
  auto cfg = default_config("tail_bound");
  cfg.replicas = 50;
  cfg.J = 6;
  cfg.delta = 0.0;
  auto rep = run_tail_bound(cfg);
  int zero_checks = 0;
  for (const auto& a : rep.assertions)
    if (a.name.find("zero_exceedance") != std::string::npos) {
      CHECK(a.passed);
      ++zero_checks;
    }
  CHECK(zero_checks == 2);
}

TEST_CASE("axiom gauss: homogeneity in the construction scale") {
  auto cfg = default_config("axiom_gauss");
  cfg.replicas = 100;
  cfg.scale = 0.0;  // both sides vanish
  CHECK(run_axiom_gauss(cfg).passed());
  cfg.scale = 1.0;
  auto r1 = run_axiom_gauss(cfg);
  cfg.scale = 3.0;
  auto r3 = run_axiom_gauss(cfg);
  const Table *t1 = r1.table("axiom_gauss"), *t3 = r3.table("axiom_gauss");
  for (std::size_t i = 0; i < t1->rows.size(); ++i)
    CHECK(t1->rows[i][4] == doctest::Approx(t3->rows[i][4]).epsilon(1e-12));  // margin
}

TEST_CASE("maximal-regularity proviso filter") {
  std::vector<double> cv{1.0};
  auto c = SampledPath::constant(0, 1, 6, cv);
  auto ramp = SampledPath::ramp(0, 1, 6);
  // binds only for N = x^p with alpha p > 1
  CHECK(detconv_proviso_excludes(c, BesovParams(0.5, kInfQ, YoungFunction::power(4))));
  CHECK(!detconv_proviso_excludes(c, BesovParams(0.5, kInfQ, YoungFunction::power(2))));
  CHECK(!detconv_proviso_excludes(c, BesovParams(0.5, kInfQ, YoungFunction::exp_power(2))));
  CHECK(!detconv_proviso_excludes(ramp, BesovParams(0.5, kInfQ, YoungFunction::power(4))));
}

TEST_CASE("young parser") {
  CHECK(parse_young("power:3").name() == YoungFunction::power(3).name());
  CHECK(parse_young("exp:2").kind() == YoungFunction::Kind::ExpPower);
  CHECK(parse_young("plog:1").kind() == YoungFunction::Kind::PLog);
  CHECK_THROWS(parse_young("weird:1"));
}
