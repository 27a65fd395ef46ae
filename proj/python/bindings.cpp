#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "bpl/besov.hpp"
#include "bpl/experiments.hpp"
#include "bpl/orlicz.hpp"
#include "bpl/sampled_path.hpp"
#include "bpl/stochastic.hpp"

namespace py = pybind11;
using namespace bpl;

namespace {

SampledPath path_from_numpy(double t0, double t1,
                            py::array_t<double, py::array::c_style | py::array::forcecast> values) {
  auto buf = values.request();
  if (buf.ndim > 2) throw std::invalid_argument("values must be 1- or 2-dimensional");
  std::size_t dim = (buf.ndim == 1) ? 1 : static_cast<std::size_t>(buf.shape[1]);
  const double* p = static_cast<const double*>(buf.ptr);
  std::vector<double> v(p, p + buf.size);
  return SampledPath(t0, t1, dim, std::move(v));
}

py::array_t<double> path_values(const SampledPath& path) {
  py::array_t<double> out({path.nodes(), path.dim()});
  std::copy(path.values().begin(), path.values().end(), out.mutable_data());
  return out;
}

Matrix matrix_from_numpy(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  auto buf = a.request();
  if (buf.ndim != 2) throw std::invalid_argument("expected a 2-d array");
  Matrix m(static_cast<std::size_t>(buf.shape[0]), static_cast<std::size_t>(buf.shape[1]));
  const double* p = static_cast<const double*>(buf.ptr);
  std::copy(p, p + buf.size, m.data.begin());
  return m;
}

py::array_t<double> matrix_to_numpy(const Matrix& m) {
  py::array_t<double> out({m.rows, m.cols});
  std::copy(m.data.begin(), m.data.end(), out.mutable_data());
  return out;
}

py::dict norm_to_dict(const BesovNorm& n) {
  py::dict d;
  d["value"] = n.value;
  d["lebesgue_part"] = n.lebesgue_part;
  d["seminorm_part"] = n.seminorm_part;
  d["j_min"] = n.profile.j_min;
  d["j_max"] = n.profile.j_max;
  py::list levels;
  for (const auto& lt : n.profile.levels) {
    py::dict l;
    l["j"] = lt.j;
    l["h_steps"] = lt.h_steps;
    l["increment_norm"] = lt.increment_norm;
    l["modulus"] = lt.modulus;
    l["weighted"] = lt.weighted;
    levels.append(l);
  }
  d["levels"] = levels;
  return d;
}

std::string run_experiment_json(const std::string& id,
                                const std::map<std::string, std::string>& overrides) {
  FlatConfig f;
  for (const auto& [k, v] : overrides) f.set(k, v);
  ExperimentConfig cfg = resolve_config(id, f);
  return run_experiment(cfg).to_json().dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Besov-Orlicz path norms, stochastic convolutions and their "
            "Monte Carlo verification experiments";

  py::class_<YoungFunction>(m, "YoungFunction")
      .def_static("power", &YoungFunction::power, py::arg("p"))
      .def_static("exp_power", &YoungFunction::exp_power, py::arg("beta"))
      .def_static("plog", &YoungFunction::plog, py::arg("p"))
      .def("__call__", &YoungFunction::operator())
      .def("inverse", &YoungFunction::inverse)
      .def("name", &YoungFunction::name)
      .def("__repr__", [](const YoungFunction& n) { return "YoungFunction(" + n.name() + ")"; });

  m.def(
      "luxemburg_norm",
      [](std::vector<double> values, std::vector<double> weights, const YoungFunction& N) {
        return luxemburg_norm(values, DiscreteMeasure(std::move(weights)), N);
      },
      py::arg("values"), py::arg("weights"), py::arg("N"));
  m.def(
      "lux_equivalence_mid",
      [](std::vector<double> values, std::vector<double> weights, const YoungFunction& N) {
        return lux_equivalence_mid(values, DiscreteMeasure(std::move(weights)), N);
      },
      py::arg("values"), py::arg("weights"), py::arg("N"));

  py::class_<SampledPath>(m, "SampledPath")
      .def(py::init(&path_from_numpy), py::arg("t0"), py::arg("t1"), py::arg("values"))
      .def_static("constant",
                  [](double t0, double t1, int J, std::vector<double> value) {
                    return SampledPath::constant(t0, t1, J, value);
                  })
      .def_static("ramp", &SampledPath::ramp)
      .def_static("heaviside", &SampledPath::heaviside)
      .def_property_readonly("t0", &SampledPath::t_begin)
      .def_property_readonly("t1", &SampledPath::t_end)
      .def_property_readonly("dim", &SampledPath::dim)
      .def_property_readonly("steps", &SampledPath::steps)
      .def_property_readonly("dt", &SampledPath::dt)
      .def_property_readonly("values", &path_values)
      .def("write_csv", &SampledPath::write_csv_file, py::arg("path"))
      .def_static("read_csv", &SampledPath::read_csv_file, py::arg("path"))
      .def("__repr__", [](const SampledPath& p) {
        return "SampledPath([" + std::to_string(p.t_begin()) + "," +
               std::to_string(p.t_end()) + "], steps=" + std::to_string(p.steps()) +
               ", dim=" + std::to_string(p.dim()) + ")";
      });

  py::class_<BesovParams>(m, "BesovParams")
      .def(py::init<double, double, YoungFunction>(), py::arg("alpha"), py::arg("q"),
           py::arg("N"))
      .def_readonly("alpha", &BesovParams::alpha)
      .def_readonly("q", &BesovParams::q);

  py::enum_<ModulusMode>(m, "ModulusMode")
      .value("Fast", ModulusMode::Fast)
      .value("Exhaustive", ModulusMode::Exhaustive);
  py::enum_<PairMode>(m, "PairMode")
      .value("Exhaustive", PairMode::Exhaustive)
      .value("Dyadic", PairMode::Dyadic);

  m.def("increment_norm", &increment_norm, py::arg("path"), py::arg("h_steps"),
        py::arg("N"));
  m.def("modulus", &modulus, py::arg("path"), py::arg("j"), py::arg("N"),
        py::arg("mode") = ModulusMode::Exhaustive);
  m.def(
      "dyadic_besov_norm",
      [](const SampledPath& p, const BesovParams& b, ModulusMode mode) {
        return norm_to_dict(dyadic_besov_norm(p, b, mode));
      },
      py::arg("path"), py::arg("params"), py::arg("mode") = ModulusMode::Fast);
  m.def(
      "full_besov_norm",
      [](const SampledPath& p, const BesovParams& b) {
        return norm_to_dict(full_besov_norm(p, b));
      },
      py::arg("path"), py::arg("params"));
  m.def("gagliardo_seminorm", &gagliardo_seminorm, py::arg("path"), py::arg("s"),
        py::arg("p"));
  m.def("extend_reflect", &extend_reflect);
  m.def("extend_zero", &extend_zero);
  m.def("scale_affine", &scale_affine, py::arg("path"), py::arg("a"), py::arg("b"));
  m.def(
      "steklov_k_estimate",
      [](const SampledPath& p, double t, const YoungFunction& N) {
        auto e = steklov_k_estimate(p, t, N);
        py::dict d;
        d["value"] = e.value;
        d["distance_part"] = e.distance_part;
        d["derivative_part"] = e.derivative_part;
        d["t_effective"] = e.t_effective;
        return d;
      },
      py::arg("path"), py::arg("t"), py::arg("N"));
  m.def("holder_seminorm", &holder_seminorm, py::arg("path"), py::arg("alpha"),
        py::arg("mode") = PairMode::Exhaustive);
  m.def("levy_ratio", &levy_ratio);
  m.def("grr_zeta", &grr_zeta, py::arg("r"), py::arg("alpha"), py::arg("beta"),
        py::arg("interval_length"));

  py::class_<StepIntegrand>(m, "StepIntegrand")
      .def_static("constant_scalar", &StepIntegrand::constant_scalar, py::arg("J"),
                  py::arg("c"))
      .def_static("constant_diag",
                  [](int J, std::vector<double> entries) {
                    return StepIntegrand::constant_diag(J, entries);
                  })
      .def_readonly("steps", &StepIntegrand::steps)
      .def_readonly("hilbert_dim", &StepIntegrand::hilbert_dim)
      .def_readonly("state_dim", &StepIntegrand::state_dim)
      .def("gamma_lq_norm", &StepIntegrand::gamma_lq_norm, py::arg("q"), py::arg("T"));

  py::class_<DiagonalModel>(m, "DiagonalModel")
      .def(py::init<std::vector<double>, double>(), py::arg("eigenvalues"),
           py::arg("shift") = 0.0)
      .def_static("zero", &DiagonalModel::zero)
      .def_static("ou", &DiagonalModel::ou)
      .def_static("heat", &DiagonalModel::heat)
      .def_readonly("eigenvalues", &DiagonalModel::eigenvalues)
      .def_readonly("shift", &DiagonalModel::shift);

  m.def(
      "sample_brownian",
      [](int J, std::size_t d, std::uint64_t seed, std::uint64_t stream, double T) {
        return sample_brownian(J, d, {seed, stream}, T);
      },
      py::arg("J"), py::arg("d") = 1, py::arg("seed") = 20260809,
      py::arg("stream") = 0, py::arg("T") = 1.0);
  m.def(
      "sample_increments",
      [](int J, std::size_t mdim, double T, std::uint64_t seed, std::uint64_t stream) {
        NormalStream s({seed, stream});
        return matrix_to_numpy(sample_increments(J, mdim, T, s));
      },
      py::arg("J"), py::arg("m") = 1, py::arg("T") = 1.0, py::arg("seed") = 20260809,
      py::arg("stream") = 0);
  m.def(
      "ito_integral",
      [](const StepIntegrand& f, py::array_t<double> increments, double T) {
        return ito_integral(f, matrix_from_numpy(increments), T);
      },
      py::arg("f"), py::arg("increments"), py::arg("T") = 1.0);
  m.def(
      "stochastic_convolution",
      [](const StepIntegrand& f, const DiagonalModel& model,
         py::array_t<double> increments, py::array_t<double> correctors, double T) {
        return stochastic_convolution(f, model, matrix_from_numpy(increments),
                                      matrix_from_numpy(correctors), T);
      },
      py::arg("f"), py::arg("model"), py::arg("increments"), py::arg("correctors"),
      py::arg("T") = 1.0);
  m.def("deterministic_convolution", &deterministic_convolution, py::arg("g"),
        py::arg("model"));
  m.def("deterministic_convolution_stabilized", &deterministic_convolution_stabilized,
        py::arg("g"), py::arg("model"));

  py::class_<PathBundle>(m, "PathBundle")
      .def_readonly("J", &PathBundle::J)
      .def_readonly("T", &PathBundle::T)
      .def_readonly("integrand_preset", &PathBundle::integrand_preset)
      .def_readonly("model", &PathBundle::model)
      .def_readonly("wiener", &PathBundle::wiener)
      .def_readonly("integral", &PathBundle::integral)
      .def_readonly("convolution", &PathBundle::convolution)
      .def_readonly("q_convolution", &PathBundle::q_convolution)
      .def_property_readonly(
          "increments", [](const PathBundle& b) { return matrix_to_numpy(b.increments); });

  m.def(
      "simulate_bundle",
      [](const std::string& preset, const DiagonalModel& model, int J,
         std::uint64_t seed, std::uint64_t stream, double scale, double T) {
        IntegrandSpec spec;
        spec.scale = scale;
        if (preset == "const_scalar")
          spec.preset = IntegrandSpec::Preset::ConstantScalar;
        else if (preset == "const_diag")
          spec.preset = IntegrandSpec::Preset::ConstantDiag;
        else if (preset == "adapted_sigmoid")
          spec.preset = IntegrandSpec::Preset::AdaptedSigmoid;
        else
          throw std::invalid_argument("unknown integrand preset '" + preset + "'");
        return simulate_bundle(spec, model, J, {seed, stream}, T);
      },
      py::arg("preset"), py::arg("model"), py::arg("J"), py::arg("seed") = 20260809,
      py::arg("stream") = 0, py::arg("scale") = 1.0, py::arg("T") = 1.0);
  m.def("representation_check", &representation_check);

  m.def("experiment_ids", &experiment_ids);
  m.def("_run_experiment_json", &run_experiment_json, py::arg("experiment"),
        py::arg("overrides"));
}
