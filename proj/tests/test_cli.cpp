#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bpl/besov.hpp"
#include "bpl/sampled_path.hpp"
#include "bpl/stochastic.hpp"

namespace fs = std::filesystem;

namespace {

std::string tmp_dir(const std::string& tag) {
  auto p = fs::temp_directory_path() / ("bpl_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

int run(const std::string& args) {
  std::string cmd = std::string(BPL_BIN) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("simulate: fixed seed reproduces identical bytes") {
  auto d1 = tmp_dir("sim1"), d2 = tmp_dir("sim2");
  REQUIRE(run("simulate --J 6 --d 2 --eigenvalues heat --seed 42 --out " + d1) == 0);
  REQUIRE(run("simulate --J 6 --d 2 --eigenvalues heat --seed 42 --out " + d2) == 0);
  for (const char* f : {"/w.csv", "/m.csv", "/u.csv", "/v.csv"})
    CHECK(slurp(d1 + f) == slurp(d2 + f));
  CHECK(fs::exists(d1 + "/bundle.json"));
  auto side = nlohmann::json::parse(slurp(d1 + "/bundle.json"));
  CHECK(side["seed"] == 42);
  CHECK(side["J"] == 6);
  CHECK(side["eigenvalues"].size() == 2);
}

TEST_CASE("simulate: zero model makes u and m identical files") {
  auto d = tmp_dir("sim0");
  REQUIRE(run("simulate --J 6 --eigenvalues zero --seed 7 --out " + d) == 0);
  CHECK(slurp(d + "/m.csv") == slurp(d + "/u.csv"));
}

TEST_CASE("simulate: zero integrand writes zero paths") {
  auto d = tmp_dir("simz");
  REQUIRE(run("simulate --J 5 --scale 0 --eigenvalues ou:1 --seed 3 --out " + d) == 0);
  auto m = bpl::SampledPath::read_csv_file(d + "/m.csv");
  for (std::size_t i = 0; i < m.nodes(); ++i) CHECK(m(i, 0) == 0.0);
}

TEST_CASE("norm: constant path has zero seminorm; ramp matches the library") {
  auto d = tmp_dir("norm");
  {
    std::vector<double> cv{2.0};
    bpl::SampledPath::constant(0, 1, 6, cv).write_csv_file(d + "/const.csv");
    bpl::SampledPath::ramp(0, 1, 8).write_csv_file(d + "/ramp.csv");
  }
  REQUIRE(run("norm " + d + "/const.csv --young power:2 --alpha 0.5 --out " + d) == 0);
  auto res = nlohmann::json::parse(slurp(d + "/norms.json"));
  CHECK(res["results"]["dyadic"]["seminorm"].get<double>() == 0.0);
  CHECK(res["results"]["dyadic"]["value"].get<double>() == doctest::Approx(2.0));

  REQUIRE(run("norm " + d + "/ramp.csv --young power:2 --alpha 0.5 --norms "
              "dyadic,full,holder,gagliardo --s 0.25 --p 2 --out " +
              d) == 0);
  auto res2 = nlohmann::json::parse(slurp(d + "/norms.json"));
  auto want = bpl::dyadic_besov_norm(
      bpl::SampledPath::ramp(0, 1, 8),
      bpl::BesovParams(0.5, bpl::kInfQ, bpl::YoungFunction::power(2)));
  CHECK(res2["results"]["dyadic"]["value"].get<double>() ==
        doctest::Approx(want.value).epsilon(1e-12));
  CHECK(res2["results"]["holder"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("norm: malformed csv fails with a parse error") {
  auto d = tmp_dir("badcsv");
  std::ofstream(d + "/bad.csv") << "t,y0\n0,1\n1,2\n";
  CHECK(run("norm " + d + "/bad.csv --out " + d) != 0);
  std::ofstream(d + "/bad2.csv") << "t,x0\n0,1\n0.5,zap\n";
  CHECK(run("norm " + d + "/bad2.csv --out " + d) != 0);
}

TEST_CASE("round trip: simulate then norm equals the in-process pipeline") {
  auto d = tmp_dir("round");
  REQUIRE(run("simulate --J 8 --eigenvalues ou:1 --seed 11 --out " + d) == 0);
  auto u = bpl::SampledPath::read_csv_file(d + "/u.csv");
  auto bundle = bpl::simulate_bundle({bpl::IntegrandSpec::Preset::ConstantScalar, 1.0},
                                     bpl::DiagonalModel::ou(1.0), 8, {11, 0});
  bpl::BesovParams params(0.5, bpl::kInfQ, bpl::YoungFunction::exp_power(2));
  double from_csv = bpl::dyadic_besov_norm(u, params).value;
  double in_proc = bpl::dyadic_besov_norm(bundle.convolution, params).value;
  CHECK(from_csv == doctest::Approx(in_proc).epsilon(1e-12));
}

TEST_CASE("verify: axiom_gauss passes, unknown id fails, smoke mode degrades") {
  auto d = tmp_dir("verify");
  REQUIRE(run("verify --experiment axiom_gauss --out " + d) == 0);
  auto rep = nlohmann::json::parse(slurp(d + "/report.json"));
  CHECK(rep["passed"] == true);
  CHECK(rep["config"]["experiment"] == "axiom_gauss");
  CHECK(fs::exists(d + "/axiom_gauss.csv"));

  CHECK(run("verify --experiment not_an_experiment --out " + d) != 0);

  // smoke pass with assertions downgraded to warnings
  auto d2 = tmp_dir("verify2");
  REQUIRE(run("verify --experiment levy_modulus --replicas 10 "
              "--set levy_J=8 --out " + d2) == 0);
  auto rep2 = nlohmann::json::parse(slurp(d2 + "/report.json"));
  CHECK(rep2["degraded"] == true);

  // config file with an unknown key is rejected
  std::ofstream(d2 + "/bad.cfg") << "replicas = 10\nnot_a_key = 1\n";
  CHECK(run("verify --experiment levy_modulus --config " + d2 + "/bad.cfg --out " + d2) !=
        0);
}

TEST_CASE("verify: svg plots are emitted on request") {
  auto d = tmp_dir("svg");
  REQUIRE(run("verify --experiment levy_modulus --replicas 10 --set levy_J=8 "
              "--svg --out " + d) == 0);
  // levy has no registered plots; moment_growth does
  auto d2 = tmp_dir("svg2");
  REQUIRE(run("verify --experiment moment_growth --replicas 30 --J 6 --svg --out " +
              d2) == 0);
  CHECK(fs::exists(d2 + "/moments.svg"));
  CHECK(slurp(d2 + "/moments.svg").find("<svg") != std::string::npos);
}
