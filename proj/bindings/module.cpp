#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qk/asymptotics.hpp"
#include "qk/density.hpp"
#include "qk/discrete.hpp"
#include "qk/gluing.hpp"
#include "qk/kernel.hpp"
#include "qk/model.hpp"
#include "qk/oracle.hpp"
#include "qk/sphere.hpp"
#include "qk/transforms.hpp"

namespace py = pybind11;
using namespace qk;

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Stationary-distribution analytics for reflected processes in the quadrant";

  py::register_exception<config_error>(mod, "ConfigError");
  py::register_exception<numeric_error>(mod, "NumericError");

  py::class_<ContinuousModel>(mod, "ContinuousModel")
      .def(py::init<>())
      .def_readwrite("sigma", &ContinuousModel::sigma)
      .def_readwrite("mu", &ContinuousModel::mu)
      .def_readwrite("refl", &ContinuousModel::refl)
      .def("identity_refl", &ContinuousModel::identity_refl, py::arg("tol") = 0.0);

  py::class_<DiscreteModel>(mod, "DiscreteModel")
      .def(py::init<>())
      .def_readwrite("interior", &DiscreteModel::interior)
      .def_readwrite("hwall", &DiscreteModel::hwall)
      .def_readwrite("vwall", &DiscreteModel::vwall)
      .def_readwrite("origin", &DiscreteModel::origin);

  mod.def("load_model_json", [](const std::string& text) -> py::object {
    Model m = load_model_json(text);
    if (std::holds_alternative<ContinuousModel>(m))
      return py::cast(std::get<ContinuousModel>(m));
    return py::cast(std::get<DiscreteModel>(m));
  });
  mod.def("model_to_json", [](py::object m) {
    if (py::isinstance<ContinuousModel>(m))
      return model_to_json(Model(m.cast<ContinuousModel>()));
    return model_to_json(Model(m.cast<DiscreteModel>()));
  });

  py::class_<StabilityReport>(mod, "StabilityReport")
      .def_readonly("stable", &StabilityReport::stable)
      .def_readonly("condition_values", &StabilityReport::condition_values)
      .def_readonly("marginal", &StabilityReport::marginal)
      .def("any_marginal", &StabilityReport::any_marginal);
  mod.def("stability", &validate_continuous);

  py::class_<BranchPoints>(mod, "BranchPoints")
      .def_readonly("low", &BranchPoints::low)
      .def_readonly("high", &BranchPoints::high)
      .def_readonly("low_marginal", &BranchPoints::low_marginal)
      .def_readonly("high_marginal", &BranchPoints::high_marginal);
  mod.def("branch_points", &branch_points, py::arg("model"), py::arg("axis"));
  mod.def("gamma_k", &gamma_k);
  mod.def("branches_theta1", &branches_theta1);
  mod.def("branches_theta2", &branches_theta2);

  py::class_<GlueValue>(mod, "GlueValue")
      .def_readonly("value", &GlueValue::value)
      .def_readonly("on_cut", &GlueValue::on_cut);
  mod.def("glue", &glue, py::arg("model"), py::arg("t"));
  mod.def("glue_prime", &glue_prime, py::arg("model"), py::arg("t"));
  mod.def("chebyshev_T", &chebyshev_T, py::arg("a"), py::arg("x"));

  py::enum_<TransformStatus>(mod, "TransformStatus")
      .value("ok", TransformStatus::ok)
      .value("pole", TransformStatus::pole)
      .value("on_cut", TransformStatus::on_cut)
      .value("kernel_zero", TransformStatus::kernel_zero);
  py::class_<TransformValue>(mod, "TransformValue")
      .def_readonly("value", &TransformValue::value)
      .def_readonly("status", &TransformValue::status)
      .def("ok", &TransformValue::ok);
  mod.def("phi1", &phi1);
  mod.def("phi2", &phi2);
  mod.def("psi1", &psi1);
  mod.def("psi2", &psi2);
  mod.def("phi_interior", &phi_interior);
  mod.def("continue_phi1", &continue_phi1);
  mod.def("transform_pole_scan", &transform_pole_scan, py::arg("model"),
          py::arg("axis"));

  py::class_<GroupReport>(mod, "GroupReport")
      .def_property_readonly("finite",
                             [](const GroupReport& r) {
                               return r.verdict == GroupReport::Verdict::finite;
                             })
      .def_readonly("order", &GroupReport::order)
      .def_readonly("beta", &GroupReport::beta)
      .def_readonly("best_error", &GroupReport::best_error);
  mod.def("group_order", &group_order, py::arg("model"),
          py::arg("max_denominator") = 64);
  mod.def("beta_angle", &beta_angle);

  py::class_<RegimeReport>(mod, "RegimeReport")
      .def_property_readonly(
          "label", [](const RegimeReport& r) { return std::string(regime_name(r.label)); })
      .def_readonly("alpha", &RegimeReport::alpha)
      .def_readonly("saddle", &RegimeReport::saddle)
      .def_readonly("exp_saddle", &RegimeReport::exp_saddle)
      .def_readonly("exp_eta", &RegimeReport::exp_eta)
      .def_readonly("exp_zeta", &RegimeReport::exp_zeta)
      .def_readonly("dominant", &RegimeReport::dominant)
      .def_readonly("prefactor_power", &RegimeReport::prefactor_power);
  mod.def("theta_alpha", &theta_alpha);
  mod.def("classify_regime", &classify_regime);
  mod.def("decay_exponent", &decay_exponent);

  py::class_<DensityValue>(mod, "DensityValue")
      .def_readonly("value", &DensityValue::value)
      .def_readonly("error_estimate", &DensityValue::error_estimate)
      .def_readonly("imag_residual", &DensityValue::imag_residual);
  mod.def(
      "density_at",
      [](const ContinuousModel& m, double x1, double x2) {
        return density_at(m, x1, x2);
      },
      py::arg("model"), py::arg("x1"), py::arg("x2"));
  mod.def(
      "boundary_density_nu1",
      [](const ContinuousModel& m, double x2) { return boundary_density_nu1(m, x2); },
      py::arg("model"), py::arg("x2"));
  mod.def(
      "normalization_check",
      [](const ContinuousModel& m, double T, int nodes) {
        return normalization_check(m, T, nodes);
      },
      py::arg("model"), py::arg("T"), py::arg("nodes_per_axis") = 41);

  mod.def("walk_K", &walk_K);
  mod.def("walk_k", &walk_k);
  mod.def("walk_kt", &walk_kt);
  mod.def("branches_X", &branches_X);
  mod.def("branches_Y", &branches_Y);
  py::class_<WalkDiscriminantRoots>(mod, "WalkDiscriminantRoots")
      .def_readonly("roots", &WalkDiscriminantRoots::roots)
      .def_readonly("y1", &WalkDiscriminantRoots::y1)
      .def_readonly("y2", &WalkDiscriminantRoots::y2)
      .def_readonly("y3", &WalkDiscriminantRoots::y3)
      .def_readonly("y4", &WalkDiscriminantRoots::y4);
  mod.def("discriminant_roots", &discriminant_roots);
  mod.def("zeta_walk", &zeta_walk);
  mod.def("eta_walk", &eta_walk);
  py::class_<WalkGroupReport>(mod, "WalkGroupReport")
      .def_property_readonly("finite",
                             [](const WalkGroupReport& r) {
                               return r.verdict == WalkGroupReport::Verdict::finite;
                             })
      .def_readonly("order", &WalkGroupReport::order);
  mod.def("walk_group_order", &walk_group_order, py::arg("model"),
          py::arg("max_iter") = 64, py::arg("seed") = 20240901);
  mod.def("discrete_saddle", &discrete_saddle);
  py::enum_<PsiPhiConvention>(mod, "PsiPhiConvention")
      .value("psi_is_zeta", PsiPhiConvention::psi_is_zeta)
      .value("psi_is_eta", PsiPhiConvention::psi_is_eta);
  py::class_<PolePoint>(mod, "PolePoint")
      .def_readonly("x", &PolePoint::x)
      .def_readonly("y", &PolePoint::y)
      .def_readonly("rate", &PolePoint::rate);
  py::class_<DiscreteRegimeReport>(mod, "DiscreteRegimeReport")
      .def_property_readonly(
          "label",
          [](const DiscreteRegimeReport& r) { return std::string(plabel_name(r.label)); })
      .def_readonly("saddle", &DiscreteRegimeReport::saddle)
      .def_readonly("rate_saddle", &DiscreteRegimeReport::rate_saddle)
      .def_readonly("poles_k", &DiscreteRegimeReport::poles_k)
      .def_readonly("poles_kt", &DiscreteRegimeReport::poles_kt)
      .def_readonly("dominant_rate", &DiscreteRegimeReport::dominant_rate)
      .def_readonly("prefactor_power", &DiscreteRegimeReport::prefactor_power);
  mod.def("discrete_regime", &discrete_regime, py::arg("model"), py::arg("alpha"),
          py::arg("convention") = PsiPhiConvention::psi_is_zeta);

  py::class_<SimConfig>(mod, "SimConfig")
      .def(py::init<>())
      .def_readwrite("dt", &SimConfig::dt)
      .def_readwrite("horizon", &SimConfig::horizon)
      .def_readwrite("burn_in", &SimConfig::burn_in)
      .def_readwrite("replicas", &SimConfig::replicas)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("laplace_thetas", &SimConfig::laplace_thetas)
      .def_readwrite("hist_bin", &SimConfig::hist_bin)
      .def_readwrite("hist_max", &SimConfig::hist_max)
      .def_readwrite("threads", &SimConfig::threads);
  py::class_<SimResult::Estimate>(mod, "Estimate")
      .def_readonly("mean", &SimResult::Estimate::mean)
      .def_readonly("se", &SimResult::Estimate::se);
  py::class_<SimResult>(mod, "SimResult")
      .def("laplace_estimate", &SimResult::laplace_estimate)
      .def("mean_z_estimate", &SimResult::mean_z_estimate)
      .def("local_time_estimate", &SimResult::local_time_estimate)
      .def("cell_density_estimate", &SimResult::cell_density_estimate);
  mod.def("simulate_srbm", &simulate_srbm,
          py::call_guard<py::gil_scoped_release>());

  py::class_<LatticeSolution>(mod, "LatticeSolution")
      .def_readonly("N", &LatticeSolution::N)
      .def_readonly("pi", &LatticeSolution::pi)
      .def_readonly("residual", &LatticeSolution::residual)
      .def("at", &LatticeSolution::at);
  mod.def("lattice_stationary", &lattice_stationary,
          py::call_guard<py::gil_scoped_release>());

  py::class_<DecayFit>(mod, "DecayFit")
      .def_readonly("slope", &DecayFit::slope)
      .def_readonly("slope_se", &DecayFit::slope_se)
      .def_readonly("intercept", &DecayFit::intercept)
      .def_readonly("slope_log", &DecayFit::slope_log)
      .def_readonly("logr_coef", &DecayFit::logr_coef)
      .def_readonly("logr_coef_se", &DecayFit::logr_coef_se)
      .def_readonly("aic_plain", &DecayFit::aic_plain)
      .def_readonly("aic_logr", &DecayFit::aic_logr)
      .def_readonly("prefer_logr", &DecayFit::prefer_logr);
  mod.def("fit_decay_rate", &fit_decay_rate);
}
