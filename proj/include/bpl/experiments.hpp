#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bpl/besov.hpp"
#include "bpl/config.hpp"
#include "bpl/orlicz.hpp"
#include "bpl/report.hpp"

namespace bpl {

/// Resolved settings for one Monte Carlo experiment. Defaults depend on the
/// experiment id; a FlatConfig (file plus CLI overrides) refines them and
/// unknown keys are rejected.
struct ExperimentConfig {
  std::string experiment;
  int J = 10;
  std::size_t d = 1;
  std::size_t replicas = 10000;
  std::size_t default_replicas = 10000;
  std::uint64_t seed = 20260809;
  int threads = 2;
  std::string out_dir = "bpl_out";
  bool svg = false;

  double alpha = 0.5;  // setting q < inf couples alpha = 1/2 - 1/q
  double q = kInfQ;
  std::string young = "exp:2";
  std::string integrand = "const_scalar";
  double scale = 1.0;

  double delta = 1.0;   // tail_bound: ||f||_{L^q} of the deterministic preset
  double lambda = 1.0;  // tail_bound: OU rate of the convolution branch
  int rungs = 7;        // solution_map: perturbation ladder length
  int j_lo = 8, j_hi = 14;  // refinement sweep
  int levy_J = 16;
  std::vector<double> p_grid = {1, 2, 4, 8};
  std::vector<double> kappa_grid = {0.25, 1, 4};
  std::size_t band_samples = 16, rough_samples = 8;  // detconv ensembles
  std::vector<int> detconv_J = {8, 10, 12};

  std::map<std::string, double> tol;

  bool degraded() const { return replicas < default_replicas; }
};

std::vector<std::string> experiment_ids();
ExperimentConfig default_config(const std::string& id);
/// Defaults for id, overrides from cfg, then reject unknown keys.
ExperimentConfig resolve_config(const std::string& id, FlatConfig& cfg);
nlohmann::json config_echo(const ExperimentConfig& cfg);

/// "power:p" | "exp:beta" | "plog:p"
YoungFunction parse_young(const std::string& spec);

/// The maximal-regularity bound needs f(0+) = 0 when N(x) = x^p with
/// alpha p > 1; inputs violating that are excluded from the ratio ensemble.
bool detconv_proviso_excludes(const SampledPath& f, const BesovParams& params);

ExperimentReport run_moment_growth(const ExperimentConfig& cfg);
ExperimentReport run_tail_bound(const ExperimentConfig& cfg);
ExperimentReport run_axiom_gauss(const ExperimentConfig& cfg);
ExperimentReport run_solution_map_continuity(const ExperimentConfig& cfg);
ExperimentReport run_refinement_stability(const ExperimentConfig& cfg);
ExperimentReport run_levy_modulus(const ExperimentConfig& cfg);
ExperimentReport run_detconv_ratio(const ExperimentConfig& cfg);
ExperimentReport run_embedding_checks(const ExperimentConfig& cfg);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Statistics helpers shared by the experiments and the acceptance suite.
double median(std::vector<double> v);
double quantile(std::vector<double> v, double q);

struct LineFit {
  double intercept = 0.0, slope = 0.0, r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bpl
