#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "effdof/applications.hpp"
#include "effdof/estimators.hpp"
#include "effdof/montecarlo.hpp"

namespace py = pybind11;
using namespace effdof;

namespace {

ComponentSet make_set(std::vector<double> weights, std::vector<double> variances,
                      std::vector<double> dofs) {
  if (variances.size() != weights.size()) throw LengthMismatch(weights.size(), variances.size());
  if (dofs.size() != weights.size()) throw LengthMismatch(weights.size(), dofs.size());
  std::vector<VarianceComponent> comps;
  comps.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    comps.push_back({weights[i], variances[i], dofs[i]});
  }
  return ComponentSet(std::move(comps));
}

template <typename Fn>
auto over_components(Fn fn) {
  return [fn](std::vector<double> w, std::vector<double> s2, std::vector<double> nu) {
    return fn(make_set(std::move(w), std::move(s2), std::move(nu)));
  };
}

}  // namespace

PYBIND11_MODULE(_effdof, m) {
  m.doc() = "Satterthwaite, corrected and Boardman effective df; Kish n_eff; Monte Carlo harness";
  m.attr("__version__") = EFFDOF_VERSION;

  auto base = py::register_exception<Error>(m, "EffdofError");
  auto validation = py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<LengthMismatch>(m, "LengthMismatch", validation.ptr());
  auto degenerate =
      py::register_exception<DegenerateComponents>(m, "DegenerateComponents", base.ptr());
  py::register_exception<AllZeroWeights>(m, "AllZeroWeights", degenerate.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  py::enum_<DfVariant>(m, "DfVariant")
      .value("Satterthwaite", DfVariant::Satterthwaite)
      .value("Corrected", DfVariant::Corrected)
      .value("Boardman", DfVariant::Boardman);

  py::class_<DfEstimate>(m, "DfEstimate")
      .def_readonly("variant", &DfEstimate::variant)
      .def_readonly("value", &DfEstimate::value)
      .def_readonly("numerator", &DfEstimate::numerator)
      .def_readonly("denominator", &DfEstimate::denominator)
      .def("__repr__", [](const DfEstimate& e) {
        return "DfEstimate(" + std::string(to_string(e.variant)) +
               ", value=" + std::to_string(e.value) + ")";
      });

  m.def("satterthwaite_df", over_components(satterthwaite_df), py::arg("weights"),
        py::arg("variances"), py::arg("dofs"));
  m.def("corrected_df", over_components(corrected_df), py::arg("weights"), py::arg("variances"),
        py::arg("dofs"));
  m.def("boardman_df", over_components(boardman_df), py::arg("weights"), py::arg("variances"),
        py::arg("dofs"));
  m.def("satterthwaite_df_harmonic", over_components(satterthwaite_df_harmonic),
        py::arg("weights"), py::arg("variances"), py::arg("dofs"));

  m.def("kish_neff", [](std::vector<double> w) { return kish_neff(WeightVector(std::move(w))); },
        py::arg("weights"));
  m.def("design_effect",
        [](std::vector<double> w) { return design_effect(WeightVector(std::move(w))); },
        py::arg("weights"));
  m.def("relvariance",
        [](std::vector<double> w) { return relvariance(WeightVector(std::move(w))); },
        py::arg("weights"));
  m.def("weighted_mean",
        [](const std::vector<double>& y, std::vector<double> w) {
          return weighted_mean(y, WeightVector(std::move(w)));
        },
        py::arg("values"), py::arg("weights"));
  m.def("weighted_variance",
        [](const std::vector<double>& y, std::vector<double> w) {
          return weighted_variance(y, WeightVector(std::move(w)));
        },
        py::arg("values"), py::arg("weights"));

  m.def("jackknife_df",
        [](std::vector<double> t) { return jackknife_df(PseudoValueSet(std::move(t))); },
        py::arg("pseudo_values"));
  m.def("mi_total_variance",
        [](double vs, double nus, double vi, int m) {
          return mi_total_variance({vs, nus, vi, m});
        },
        py::arg("var_sampling"), py::arg("nu_sampling"), py::arg("var_imputation"), py::arg("m"));
  m.def("mi_total_df",
        [](double vs, double nus, double vi, int m) { return mi_total_df({vs, nus, vi, m}); },
        py::arg("var_sampling"), py::arg("nu_sampling"), py::arg("var_imputation"), py::arg("m"));
  m.def("welch_corrected_df",
        [](int n1, int n2, double s1, double s2) { return welch_corrected_df({n1, n2, s1, s2}); },
        py::arg("n1"), py::arg("n2"), py::arg("s1_sq"), py::arg("s2_sq"));
  m.def("welch_satterthwaite_df",
        [](int n1, int n2, double s1, double s2) {
          return welch_satterthwaite_df({n1, n2, s1, s2});
        },
        py::arg("n1"), py::arg("n2"), py::arg("s1_sq"), py::arg("s2_sq"));

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("k_values", &SimConfig::k_values)
      .def_readwrite("nu_values", &SimConfig::nu_values)
      .def_property(
          "random_weights",
          [](const SimConfig& c) { return c.weight_mode == WeightMode::RandomNormal; },
          [](SimConfig& c, bool random) {
            c.weight_mode = random ? WeightMode::RandomNormal : WeightMode::Equal;
          })
      .def_property(
          "unit_weights", [](const SimConfig& c) { return c.equal_scale == EqualScale::Unit; },
          [](SimConfig& c, bool unit) {
            c.equal_scale = unit ? EqualScale::Unit : EqualScale::InverseK;
          })
      .def_readwrite("weight_sd", &SimConfig::weight_sd)
      .def_readwrite("fix_weights", &SimConfig::fix_weights)
      .def_readwrite("sigma_sq", &SimConfig::sigma_sq)
      .def_readwrite("replicates", &SimConfig::replicates)
      .def_readwrite("seed", &SimConfig::seed);

  py::class_<SimCell>(m, "SimCell")
      .def_readonly("k", &SimCell::k)
      .def_readonly("nu_bar", &SimCell::nu_bar)
      .def_readonly("mean_satt", &SimCell::mean_satt)
      .def_readonly("sd_satt", &SimCell::sd_satt)
      .def_readonly("mean_corr", &SimCell::mean_corr)
      .def_readonly("sd_corr", &SimCell::sd_corr)
      .def_readonly("mean_kish", &SimCell::mean_kish)
      .def_readonly("expected", &SimCell::expected)
      .def_readonly("ratio_kish_k", &SimCell::ratio_kish_k)
      .def_readonly("ratio_satt", &SimCell::ratio_satt)
      .def_readonly("ratio_corr", &SimCell::ratio_corr)
      .def_readonly("replicates", &SimCell::replicates)
      .def_readonly("weight_rejections", &SimCell::weight_rejections);

  m.def("run_grid",
        [](const SimConfig& cfg, unsigned threads) {
          py::gil_scoped_release release;
          return run_grid(cfg, ExecutionOptions{threads});
        },
        py::arg("config"), py::arg("threads") = 1);
  m.def("run_cell",
        [](int k, double nu, const SimConfig& cfg, std::uint64_t cell_index, unsigned threads) {
          py::gil_scoped_release release;
          return run_cell(k, nu, cfg, cell_index, ExecutionOptions{threads});
        },
        py::arg("k"), py::arg("nu_bar"), py::arg("config"), py::arg("cell_index") = 0,
        py::arg("threads") = 1);
  m.def("sample_component_variances",
        [](double nu, double sigma_sq, std::size_t count, std::uint64_t seed) {
          if (!(nu > 0.0) || !(sigma_sq > 0.0)) {
            throw ValidationError("nu and sigma_sq must be > 0");
          }
          auto rng = Xoshiro256StarStar::for_stream(seed, 0, 0);
          std::vector<double> out(count);
          for (auto& x : out) x = sample_component_variance(nu, sigma_sq, rng);
          return out;
        },
        py::arg("nu"), py::arg("sigma_sq"), py::arg("count"), py::arg("seed"));
}
