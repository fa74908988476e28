#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "parisian/gerber_shiu.hpp"
#include "parisian/levy_model.hpp"
#include "parisian/scale_functions.hpp"
#include "parisian/simulator.hpp"
#include "parisian/validation.hpp"

namespace py = pybind11;
using namespace parisian;

PYBIND11_MODULE(parisian_risk, m) {
  m.doc() = "Parisian ruin with exponential implementation delays for spectrally negative "
            "Levy insurance risk processes";

  py::enum_<Family>(m, "Family")
      .value("BrownianDrift", Family::BrownianDrift)
      .value("CramerLundbergExp", Family::CramerLundbergExp)
      .value("JumpDiffusionExp", Family::JumpDiffusionExp);

  py::class_<LevyModel>(m, "LevyModel")
      .def(py::init<>())
      .def_readwrite("family", &LevyModel::family)
      .def_readwrite("mu", &LevyModel::mu)
      .def_readwrite("sigma", &LevyModel::sigma)
      .def_readwrite("jump_rate", &LevyModel::jump_rate)
      .def_readwrite("jump_mean_inv", &LevyModel::jump_mean_inv)
      .def_static("brownian_drift", &LevyModel::brownian_drift, py::arg("mu"), py::arg("sigma"))
      .def_static("cramer_lundberg_exp", &LevyModel::cramer_lundberg_exp, py::arg("premium"),
                  py::arg("eta"), py::arg("alpha"))
      .def_static("jump_diffusion_exp", &LevyModel::jump_diffusion_exp, py::arg("mu"),
                  py::arg("sigma"), py::arg("eta"), py::arg("alpha"))
      .def("__repr__", [](const LevyModel& mod) { return model_to_json(mod); });

  m.def("model_from_json", &model_from_json, py::arg("text"));
  m.def("model_to_json", &model_to_json, py::arg("model"));
  m.def("laplace_exponent",
        py::overload_cast<const LevyModel&, double>(&laplace_exponent), py::arg("model"),
        py::arg("lam"));
  m.def("phi", &phi, py::arg("model"), py::arg("q"));
  m.def("net_profit_drift", &net_profit_drift, py::arg("model"));
  m.def("w_at_zero", &w_at_zero, py::arg("model"), py::arg("q"));

  py::enum_<ScaleMethod>(m, "ScaleMethod")
      .value("ClosedForm", ScaleMethod::ClosedForm)
      .value("RationalInversion", ScaleMethod::RationalInversion)
      .value("NumericInversion", ScaleMethod::NumericInversion);

  py::class_<ScaleContext>(m, "ScaleContext")
      .def(py::init<const LevyModel&, double, ScaleMethod>(), py::arg("model"), py::arg("q"),
           py::arg("method") = ScaleMethod::RationalInversion)
      .def("w", &ScaleContext::w, py::arg("x"))
      .def("z", &ScaleContext::z, py::arg("x"))
      .def_property_readonly("q", &ScaleContext::q)
      .def_property_readonly("phi_q", &ScaleContext::phi_q)
      .def_property_readonly("confluent", &ScaleContext::confluent);

  m.def("h_aux",
        py::overload_cast<const LevyModel&, double, double, double>(&h_aux), py::arg("model"),
        py::arg("p"), py::arg("q_shift"), py::arg("x"));
  m.def("g_fn", py::overload_cast<const LevyModel&, double, double, double, double>(&g_fn),
        py::arg("model"), py::arg("theta"), py::arg("q"), py::arg("x"), py::arg("y"));
  m.def("g_fn_alt", py::overload_cast<const LevyModel&, double, double, double, double>(&g_fn_alt),
        py::arg("model"), py::arg("theta"), py::arg("q"), py::arg("x"), py::arg("y"));
  m.def("laplace_identity_residual", &laplace_identity_residual, py::arg("ctx"), py::arg("lam"));

  py::class_<ParisianEvaluator>(m, "ParisianEvaluator")
      .def(py::init<const LevyModel&, double, double, ScaleMethod>(), py::arg("model"),
           py::arg("theta"), py::arg("q"), py::arg("method") = ScaleMethod::RationalInversion)
      .def("density_two_sided", &ParisianEvaluator::density_two_sided, py::arg("a"), py::arg("b"),
           py::arg("x"), py::arg("y"))
      .def("density_lower", &ParisianEvaluator::density_lower, py::arg("a"), py::arg("x"),
           py::arg("y"))
      .def("density_upper", &ParisianEvaluator::density_upper, py::arg("b"), py::arg("x"),
           py::arg("y"))
      .def("density_unrestricted", &ParisianEvaluator::density_unrestricted, py::arg("x"),
           py::arg("y"))
      .def("laplace_ruin_before_b", &ParisianEvaluator::laplace_ruin_before_b, py::arg("b"),
           py::arg("x"))
      .def("exponential_penalty", &ParisianEvaluator::exponential_penalty, py::arg("lambda_"),
           py::arg("b"), py::arg("x"))
      .def("mass_two_sided", &ParisianEvaluator::mass_two_sided, py::arg("a"), py::arg("b"),
           py::arg("x"))
      .def("mass_lower", &ParisianEvaluator::mass_lower, py::arg("a"), py::arg("x"))
      .def("mass_upper", &ParisianEvaluator::mass_upper, py::arg("b"), py::arg("x"))
      .def("mass_unrestricted", &ParisianEvaluator::mass_unrestricted, py::arg("x"))
      .def("set_cross_check", &ParisianEvaluator::set_cross_check, py::arg("on"));

  m.def("parisian_ruin_prob", &parisian_ruin_prob, py::arg("model"), py::arg("q"), py::arg("x"));
  m.def("laplace_ruin_before_b", &laplace_ruin_before_b, py::arg("model"), py::arg("theta"),
        py::arg("q"), py::arg("b"), py::arg("x"));
  m.def("gs_exponential_penalty", &gs_exponential_penalty, py::arg("model"), py::arg("theta"),
        py::arg("q"), py::arg("lambda_"), py::arg("b"), py::arg("x"));

  py::enum_<Scheme>(m, "Scheme")
      .value("EventDriven", Scheme::EventDriven)
      .value("EulerGrid", Scheme::EulerGrid);

  py::enum_<OutcomeKind>(m, "OutcomeKind")
      .value("ParisianRuin", OutcomeKind::ParisianRuin)
      .value("UpperExit", OutcomeKind::UpperExit)
      .value("LowerExit", OutcomeKind::LowerExit)
      .value("Survived", OutcomeKind::Survived);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("scheme", &SimConfig::scheme)
      .def_readwrite("dt", &SimConfig::dt)
      .def_readwrite("epsilon", &SimConfig::epsilon)
      .def_readwrite("n_paths", &SimConfig::n_paths)
      .def_readwrite("horizon", &SimConfig::horizon)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("n_workers", &SimConfig::n_workers);

  py::class_<RuinOutcome>(m, "RuinOutcome")
      .def_readonly("kind", &RuinOutcome::kind)
      .def_readonly("time", &RuinOutcome::time)
      .def_readonly("position", &RuinOutcome::position);

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("mean", &Estimate::mean)
      .def_readonly("std_error", &Estimate::std_error)
      .def_readonly("n", &Estimate::n)
      .def_readonly("ci95", &Estimate::ci95)
      .def_readonly("zero_events", &Estimate::zero_events);

  py::class_<Penalty>(m, "Penalty")
      .def_static("one", &Penalty::one)
      .def_static("exponential", &Penalty::exponential, py::arg("lambda_"))
      .def_static("indicator", &Penalty::indicator, py::arg("y_lo"), py::arg("y_hi"))
      .def("__call__", &Penalty::operator(), py::arg("y"));

  m.def("estimate_gs", &estimate_gs, py::arg("model"), py::arg("theta"), py::arg("q"),
        py::arg("x"), py::arg("a"), py::arg("b"), py::arg("penalty"), py::arg("cfg"));

  py::class_<EpsScanResult>(m, "EpsScanResult")
      .def_readonly("epsilons", &EpsScanResult::epsilons)
      .def_readonly("estimates", &EpsScanResult::estimates)
      .def_readonly("coupling_violations", &EpsScanResult::coupling_violations);

  m.def("epsilon_bias_scan", &epsilon_bias_scan, py::arg("model"), py::arg("q"), py::arg("x"),
        py::arg("cfg"), py::arg("eps_list"));
  m.def("estimate_upper_exit_discount", &estimate_upper_exit_discount, py::arg("model"),
        py::arg("q"), py::arg("x"), py::arg("a"), py::arg("cfg"));
  m.def("estimate_classical_ruin", &estimate_classical_ruin, py::arg("model"), py::arg("x"),
        py::arg("cfg"));
  m.def("suggest_horizon", &suggest_horizon, py::arg("model"), py::arg("x"),
        py::arg("tail_target"));

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("criterion", &CheckResult::criterion)
      .def_readonly("name", &CheckResult::name)
      .def_readonly("detail", &CheckResult::detail)
      .def_readonly("residual", &CheckResult::residual)
      .def_readonly("tolerance", &CheckResult::tolerance)
      .def_readonly("pass_", &CheckResult::pass);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("checks", &ValidationReport::checks)
      .def_readonly("all_pass", &ValidationReport::all_pass)
      .def_readonly("jsonl", &ValidationReport::jsonl);

  m.def(
      "run_validation",
      [](std::uint64_t seed, double tol_scale) {
        ValidationOptions opts;
        opts.seed = seed;
        opts.tol_scale = tol_scale;
        return run_validation(opts);
      },
      py::arg("seed") = 12345, py::arg("tol_scale") = 1.0);

  m.attr("NO_BARRIER") = kNoBarrier;
#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
