#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bpl/besov.hpp"
#include "bpl/config.hpp"
#include "bpl/experiments.hpp"
#include "bpl/report.hpp"
#include "bpl/sampled_path.hpp"
#include "bpl/stochastic.hpp"

namespace {

std::string default_out_dir() {
  const char* env = std::getenv("BPL_OUT_DIR");
  return env ? env : "bpl_out";
}

bpl::DiagonalModel parse_model(const std::string& spec, std::size_t d) {
  if (spec == "zero") return bpl::DiagonalModel::zero(d);
  if (spec == "heat") return bpl::DiagonalModel::heat(d);
  if (spec.rfind("ou:", 0) == 0) {
    double lam = std::stod(spec.substr(3));
    return bpl::DiagonalModel(std::vector<double>(d, lam));
  }
  throw std::runtime_error("unknown eigenvalue preset '" + spec +
                           "' (use zero, heat or ou:lambda)");
}

bpl::IntegrandSpec parse_integrand(const std::string& name, double scale) {
  bpl::IntegrandSpec spec;
  spec.scale = scale;
  if (name == "const_scalar")
    spec.preset = bpl::IntegrandSpec::Preset::ConstantScalar;
  else if (name == "const_diag")
    spec.preset = bpl::IntegrandSpec::Preset::ConstantDiag;
  else if (name == "adapted_sigmoid")
    spec.preset = bpl::IntegrandSpec::Preset::AdaptedSigmoid;
  else
    throw std::runtime_error("unknown integrand preset '" + name + "'");
  return spec;
}

int cmd_norm(const std::string& csv, const std::string& young, double alpha, double q,
             const std::string& mode_name, const std::vector<std::string>& which,
             double s, double p, const std::string& out_dir) {
  bpl::SampledPath path = bpl::SampledPath::read_csv_file(csv);
  bpl::BesovParams params(alpha, q, bpl::parse_young(young));
  bpl::ModulusMode mode =
      (mode_name == "exhaustive") ? bpl::ModulusMode::Exhaustive : bpl::ModulusMode::Fast;

  nlohmann::json manifest;
  manifest["command"] = "norm";
  manifest["csv"] = csv;
  manifest["young"] = young;
  manifest["alpha"] = alpha;
  manifest["q"] = std::isinf(q) ? nlohmann::json("inf") : nlohmann::json(q);
  manifest["mode"] = mode_name;
  manifest["norms"] = which;
  nlohmann::json results;

  std::cout << "norm,mode,value,lebesgue_part,seminorm_part\n";
  for (const auto& w : which) {
    if (w == "dyadic") {
      auto nm = bpl::dyadic_besov_norm(path, params, mode);
      std::cout << "dyadic," << mode_name << "," << nm.value << "," << nm.lebesgue_part
                << "," << nm.seminorm_part << "\n";
      for (const auto& lt : nm.profile.levels)
        std::cout << "  level j=" << lt.j << " h_steps=" << lt.h_steps
                  << " increment=" << lt.increment_norm << " weighted=" << lt.weighted
                  << "\n";
      results["dyadic"] = {{"value", nm.value},
                           {"lebesgue", nm.lebesgue_part},
                           {"seminorm", nm.seminorm_part}};
    } else if (w == "full") {
      auto nm = bpl::full_besov_norm(path, params);
      std::cout << "full,exhaustive," << nm.value << "," << nm.lebesgue_part << ","
                << nm.seminorm_part << "\n";
      results["full"] = {{"value", nm.value}};
    } else if (w == "holder") {
      double h = bpl::holder_seminorm(path, alpha,
                                      path.steps() <= 4096 ? bpl::PairMode::Exhaustive
                                                           : bpl::PairMode::Dyadic);
      std::cout << "holder,"
                << (path.steps() <= 4096 ? "exhaustive" : "dyadic") << "," << h << ",,\n";
      results["holder"] = h;
    } else if (w == "gagliardo") {
      double g = bpl::gagliardo_seminorm(path, s, p);
      std::cout << "gagliardo,exhaustive," << g << ",,\n";
      results["gagliardo"] = g;
    } else if (w == "levy") {
      double l = bpl::levy_ratio(path);
      std::cout << "levy,dyadic," << l << ",,\n";
      results["levy"] = l;
    } else {
      throw std::runtime_error("unknown norm '" + w +
                               "' (use dyadic, full, holder, gagliardo, levy)");
    }
  }
  manifest["results"] = results;
  std::filesystem::create_directories(out_dir);
  std::ofstream f(out_dir + "/norms.json");
  f << manifest.dump(1) << "\n";
  return 0;
}

int cmd_simulate(int J, std::size_t d, const std::string& eigenvalues,
                 const std::string& integrand, double scale, std::uint64_t seed,
                 std::uint64_t stream, const std::string& out_dir) {
  bpl::DiagonalModel model = parse_model(eigenvalues, d);
  bpl::IntegrandSpec spec = parse_integrand(integrand, scale);
  bpl::PathBundle bundle = bpl::simulate_bundle(spec, model, J, {seed, stream});

  std::filesystem::create_directories(out_dir);
  bundle.wiener.write_csv_file(out_dir + "/w.csv");
  bundle.integral.write_csv_file(out_dir + "/m.csv");
  bundle.convolution.write_csv_file(out_dir + "/u.csv");
  bundle.q_convolution.write_csv_file(out_dir + "/v.csv");

  nlohmann::json side;
  side["seed"] = seed;
  side["stream"] = stream;
  side["J"] = J;
  side["d"] = d;
  side["m"] = d;
  side["eigenvalues"] = model.eigenvalues;
  side["integrand_preset"] = bundle.integrand_preset;
  side["representation_defect"] = bpl::representation_check(bundle);
  std::ofstream f(out_dir + "/bundle.json");
  f << side.dump(1) << "\n";
  std::cout << "wrote w.csv m.csv u.csv v.csv bundle.json to " << out_dir << "\n";
  return 0;
}

int cmd_verify(const std::string& experiment, const std::string& config_path,
               const std::vector<std::string>& overrides, const std::string& out_dir,
               bool svg) {
  std::vector<std::string> ids;
  if (experiment == "all")
    ids = bpl::experiment_ids();
  else
    ids.push_back(experiment);

  bool all_pass = true;
  for (const auto& id : ids) {
    bpl::FlatConfig cfg = config_path.empty() ? bpl::FlatConfig()
                                              : bpl::FlatConfig::from_file(config_path);
    for (const auto& kv : overrides) cfg.set(kv);
    if (cfg.has("experiment")) {
      std::string from_cfg = cfg.get_string("experiment", id);
      if (experiment != "all" && from_cfg != id)
        throw std::runtime_error("config experiment '" + from_cfg +
                                 "' disagrees with --experiment " + id);
    }
    bpl::ExperimentConfig ec = bpl::resolve_config(id, cfg);
    ec.out_dir = out_dir.empty() ? default_out_dir() : out_dir;
    ec.svg = ec.svg || svg;
    bpl::ExperimentReport rep = bpl::run_experiment(ec);
    std::string dir = ec.out_dir + (ids.size() > 1 ? "/" + id : "");
    rep.write(dir, ec.svg);
    rep.print_summary(std::cout);
    std::cout << "report: " << dir << "/report.json\n";
    all_pass = all_pass && rep.passed();
  }
  return all_pass ? 0 : 1;
}

int cmd_report(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  nlohmann::json j;
  f >> j;
  std::cout << "experiment " << j.value("experiment", std::string{"?"})
            << (j.value("degraded", false) ? " (degraded smoke run)" : "") << "\n";
  for (const auto& a : j["assertions"]) {
    bool passed = a.value("passed", false);
    bool warned = a.value("warning", false);
    std::cout << "  [" << (passed ? "PASS" : (warned ? "WARN" : "FAIL")) << "] "
              << a.value("name", std::string{}) << ": " << a.value("detail", std::string{})
              << "\n";
  }
  if (j.contains("fitted"))
    for (auto& [k, v] : j["fitted"].items())
      std::cout << "  fitted " << k << " = " << v << "\n";
  std::cout << (j.value("passed", false) ? "PASSED" : "FAILED") << " in "
            << j.value("wall_clock_seconds", 0.0) << " s\n";
  return j.value("passed", false) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Besov-Orlicz path-norm toolkit"};
  app.require_subcommand(1);

  // norm
  auto* norm = app.add_subcommand("norm", "compute norms of a CSV path");
  std::string norm_csv, norm_young = "power:2", norm_mode = "fast";
  double norm_alpha = 0.5, norm_q = bpl::kInfQ, norm_s = 0.25, norm_p = 2.0;
  std::vector<std::string> norm_which = {"dyadic"};
  std::string norm_out = default_out_dir();
  norm->add_option("csv", norm_csv, "path CSV (header t,x0,...)")->required();
  norm->add_option("--young", norm_young, "power:p | exp:beta | plog:p");
  norm->add_option("--alpha", norm_alpha, "smoothness in (0,1)");
  norm->add_option("--q", norm_q, "summability (inf by default)");
  norm->add_option("--mode", norm_mode, "fast | exhaustive")
      ->check(CLI::IsMember({"fast", "exhaustive"}));
  norm->add_option("--norms", norm_which, "dyadic,full,holder,gagliardo,levy")
      ->delimiter(',');
  norm->add_option("--s", norm_s, "Gagliardo smoothness");
  norm->add_option("--p", norm_p, "Gagliardo integrability");
  norm->add_option("--out", norm_out, "output directory (default $BPL_OUT_DIR)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "simulate a path bundle");
  int sim_J = 10;
  std::size_t sim_d = 1;
  std::string sim_eigen = "zero", sim_integrand = "const_scalar";
  double sim_scale = 1.0;
  std::uint64_t sim_seed = 20260809, sim_stream = 0;
  std::string sim_out = default_out_dir();
  sim->add_option("--J", sim_J, "grid resolution 2^J");
  sim->add_option("--d", sim_d, "state dimension");
  sim->add_option("--eigenvalues", sim_eigen, "zero | heat | ou:lambda");
  sim->add_option("--integrand", sim_integrand,
                  "const_scalar | const_diag | adapted_sigmoid");
  sim->add_option("--scale", sim_scale, "integrand scale");
  sim->add_option("--seed", sim_seed, "master seed");
  sim->add_option("--stream", sim_stream, "replica stream id");
  sim->add_option("--out", sim_out, "output directory (default $BPL_OUT_DIR)");

  // verify
  auto* ver = app.add_subcommand("verify", "run a verification experiment");
  std::string ver_experiment, ver_config, ver_out;
  std::vector<std::string> ver_set;
  bool ver_svg = false;
  long ver_replicas = -1, ver_J = -1, ver_threads = -1;
  long long ver_seed = -1;
  ver->add_option("--experiment", ver_experiment, "experiment id or 'all'")->required();
  ver->add_option("--config", ver_config, "flat key=value config file");
  ver->add_option("--set", ver_set, "config overrides key=value")->take_all();
  ver->add_option("--replicas", ver_replicas, "override replica count");
  ver->add_option("--J", ver_J, "override resolution");
  ver->add_option("--seed", ver_seed, "override master seed");
  ver->add_option("--threads", ver_threads, "worker threads");
  ver->add_option("--out", ver_out, "output directory (default $BPL_OUT_DIR)");
  ver->add_flag("--svg", ver_svg, "emit SVG plots");

  // report
  auto* repc = app.add_subcommand("report", "pretty-print a report.json");
  std::string rep_path;
  repc->add_option("json", rep_path, "path to report.json")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (norm->parsed())
      return cmd_norm(norm_csv, norm_young, norm_alpha, norm_q, norm_mode, norm_which,
                      norm_s, norm_p, norm_out);
    if (sim->parsed())
      return cmd_simulate(sim_J, sim_d, sim_eigen, sim_integrand, sim_scale, sim_seed,
                          sim_stream, sim_out);
    if (ver->parsed()) {
      if (ver_replicas >= 0) ver_set.push_back("replicas=" + std::to_string(ver_replicas));
      if (ver_J >= 0) ver_set.push_back("J=" + std::to_string(ver_J));
      if (ver_seed >= 0) ver_set.push_back("seed=" + std::to_string(ver_seed));
      if (ver_threads >= 0) ver_set.push_back("threads=" + std::to_string(ver_threads));
      return cmd_verify(ver_experiment, ver_config, ver_set, ver_out, ver_svg);
    }
    if (repc->parsed()) return cmd_report(rep_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
