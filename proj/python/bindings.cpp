#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "fsoqkd/basis.hpp"
#include "fsoqkd/channel.hpp"
#include "fsoqkd/commands.hpp"
#include "fsoqkd/config.hpp"
#include "fsoqkd/error.hpp"
#include "fsoqkd/planner.hpp"
#include "fsoqkd/qkd.hpp"
#include "fsoqkd/turbulence.hpp"
#include "fsoqkd/vacuum.hpp"

namespace py = pybind11;
using namespace fsoqkd;

namespace {

Channel make_channel(double wavelength, double length, double cn2, std::optional<double> radius,
                     std::optional<double> side) {
  if (radius && side) throw InvalidArgument("give either radius or side, not both");
  if (side) return square_channel(wavelength, length, cn2, *side);
  return gaussian_channel(wavelength, length, cn2, radius.value_or(0.1));
}

py::dict point_dict(const planner::RatePoint& p) {
  py::dict d;
  d["length"] = p.length;
  d["cn2"] = p.cn2;
  d["mode_set"] = planner::to_string(p.mode_set);
  d["config"] = p.config ? py::cast(planner::to_string(*p.config)) : py::none();
  d["rate"] = p.total_rate;
  d["capacity"] = p.capacity ? py::cast(*p.capacity) : py::none();
  d["mu"] = p.allocation.mu;
  return d;
}

py::dict envelope_dict(const planner::Envelope& env) {
  py::dict d = point_dict(env.best);
  py::list cands;
  for (const auto& c : env.candidates) cands.append(point_dict(c));
  d["candidates"] = cands;
  return d;
}

template <class F> std::string run_csv(const std::string& config_text, F&& cmd) {
  const auto cfg = parse_config(config_text);
  std::ostringstream out;
  const int code = cmd(cfg, out);
  if (code != 0) throw std::runtime_error("command reported failure:\n" + out.str());
  return out.str();
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Modal transmissivities and decoy-state QKD rates for free-space links";

  // keep stdout clean for callers; warnings still reach stderr
  if (!spdlog::get("fsoqkd")) spdlog::set_default_logger(spdlog::stderr_logger_mt("fsoqkd"));
  spdlog::set_level(spdlog::level::warn);

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def(
      "derive",
      [](double wavelength, double length, double cn2, std::optional<double> radius, std::optional<double> side) {
        const auto d = make_channel(wavelength, length, cn2, radius, side).derived();
        py::dict out;
        out["k"] = d.k;
        out["area"] = d.area;
        out["fresnel_product"] = d.fresnel_product;
        out["rho0"] = d.rho0;
        return out;
      },
      py::arg("wavelength"), py::arg("length"), py::arg("cn2") = 0.0, py::kw_only(), py::arg("radius") = py::none(),
      py::arg("side") = py::none());
  m.def("matched_square_side", &matched_square_side, py::arg("radius"));
  m.def("coherence_length", &coherence_length, py::arg("k"), py::arg("cn2"), py::arg("length"));

  m.def("lg_hg_unitary", [](int order) { return numerics::lg_hg_unitary(order).coeffs; }, py::arg("order"));

  m.def("lg_vacuum_eta", &vacuum::lg_vacuum_eta, py::arg("order"), py::arg("fresnel_product"));
  m.def("lg_mode_count", &vacuum::lg_mode_count, py::arg("max_order"));
  m.def(
      "qkd_capacity", [](const std::vector<double>& etas, double nu) { return vacuum::qkd_capacity(etas, nu); },
      py::arg("etas"), py::arg("nu"));
  m.def(
      "fb_vacuum_matrix",
      [](int grid, double wavelength, double length, double side) {
        return vacuum::fb_vacuum_matrix(grid, square_channel(wavelength, length, 0.0, side)).eta();
      },
      py::arg("grid"), py::arg("wavelength"), py::arg("length"), py::arg("side"));

  m.def(
      "fb_turb_matrix",
      [](int grid, double wavelength, double length, double cn2, double side) {
        return turbulence::fb_turb_matrix(grid, square_channel(wavelength, length, cn2, side)).eta();
      },
      py::arg("grid"), py::arg("wavelength"), py::arg("length"), py::arg("cn2"), py::arg("side"));
  m.def(
      "lg_turb_matrix",
      [](int max_order, double wavelength, double length, double cn2, double radius) {
        return turbulence::lg_turb_matrix(max_order, gaussian_channel(wavelength, length, cn2, radius)).eta();
      },
      py::arg("max_order"), py::arg("wavelength"), py::arg("length"), py::arg("cn2"), py::arg("radius"));
  m.def(
      "gaussian_pib_turb",
      [](double wavelength, double length, double cn2, double radius) {
        return turbulence::gaussian_pib_turb(gaussian_channel(wavelength, length, cn2, radius));
      },
      py::arg("wavelength"), py::arg("length"), py::arg("cn2"), py::arg("radius"));
  m.def(
      "gaussian_pib_53",
      [](double wavelength, double length, double cn2, double radius) {
        return turbulence::gaussian_pib_53(gaussian_channel(wavelength, length, cn2, radius));
      },
      py::arg("wavelength"), py::arg("length"), py::arg("cn2"), py::arg("radius"));

  py::class_<qkd::QkdSystemParams>(m, "QkdSystemParams")
      .def(py::init<>())
      .def_readwrite("visibility", &qkd::QkdSystemParams::visibility)
      .def_readwrite("p_dc", &qkd::QkdSystemParams::p_dc)
      .def_readwrite("nu", &qkd::QkdSystemParams::nu)
      .def_readwrite("f_ec", &qkd::QkdSystemParams::f_ec)
      .def_readwrite("sift", &qkd::QkdSystemParams::sift);
  m.def("binary_entropy", &qkd::binary_entropy, py::arg("x"));
  m.def(
      "decoy_bb84_rate",
      [](double eta, double mu, double mu_c, const qkd::QkdSystemParams& params) {
        return qkd::decoy_bb84_rate({eta, mu, mu_c}, params);
      },
      py::arg("eta"), py::arg("mu"), py::arg("mu_c") = 0.0, py::arg("params") = qkd::QkdSystemParams{});
  m.def("mode_rate", &qkd::mode_rate, py::arg("eta"), py::arg("p_t"), py::arg("p_c"),
        py::arg("params") = qkd::QkdSystemParams{});

  m.def(
      "optimize_allocation",
      [](const Eigen::MatrixXd& eta, std::optional<std::vector<int>> orbits, const qkd::QkdSystemParams& params) {
        std::vector<ModeId> modes;
        for (Eigen::Index i = 0; i < eta.rows(); ++i) modes.push_back(HgMode{static_cast<int>(i), 0});
        const CouplingMatrix matrix(std::move(modes), eta, Provenance::Vacuum);
        const auto opt = planner::optimize_allocation(
            matrix, orbits.value_or(planner::singleton_orbits(matrix.size())), params);
        return py::make_tuple(opt.allocation.mu, opt.total_rate);
      },
      py::arg("eta"), py::arg("orbits") = py::none(), py::arg("params") = qkd::QkdSystemParams{});
  m.def(
      "fb_envelope",
      [](double wavelength, double length, double cn2, double side, int n_max, const qkd::QkdSystemParams& params) {
        planner::EnvelopeOptions opts;
        opts.n_max = n_max;
        return envelope_dict(planner::fb_envelope(square_channel(wavelength, length, cn2, side), params, opts));
      },
      py::arg("wavelength"), py::arg("length"), py::arg("cn2"), py::arg("side"), py::arg("n_max") = 8,
      py::arg("params") = qkd::QkdSystemParams{});
  m.def(
      "lg_envelope",
      [](double wavelength, double length, double cn2, double radius, int q_max, const qkd::QkdSystemParams& params) {
        planner::EnvelopeOptions opts;
        opts.q_max = q_max;
        return envelope_dict(planner::lg_envelope(gaussian_channel(wavelength, length, cn2, radius), params, opts));
      },
      py::arg("wavelength"), py::arg("length"), py::arg("cn2"), py::arg("radius"), py::arg("q_max") = 8,
      py::arg("params") = qkd::QkdSystemParams{});

  m.def(
      "transmissivity_csv",
      [](const std::string& config) {
        return run_csv(config, [](const RunConfig& c, std::ostream& o) { return cmd_transmissivity(c, o); });
      },
      py::arg("config") = "", "CSV text of the transmissivity command for a YAML config string.");
  m.def(
      "rates_csv",
      [](const std::string& config) {
        py::gil_scoped_release release;
        return run_csv(config, [](const RunConfig& c, std::ostream& o) { return cmd_rates(c, o); });
      },
      py::arg("config") = "", "CSV text of the rates command for a YAML config string.");
  m.def(
      "validate_csv",
      [](const std::string& config) {
        std::ostringstream summary;
        return run_csv(config, [&](const RunConfig& c, std::ostream& o) { return cmd_validate(c, o, summary); });
      },
      py::arg("config") = "", "CSV text of the validate command for a YAML config string.");
}
