#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "susydec/expr.hpp"
#include "susydec/grid.hpp"
#include "susydec/harmonic.hpp"
#include "susydec/potential.hpp"
#include "susydec/scenario.hpp"

namespace py = pybind11;
using namespace susydec;

namespace {

py::dict residuals_dict(const SusyAlgebraResiduals& r) {
    py::dict d;
    d["q1_squared"] = r.q1_squared;
    d["q2_squared"] = r.q2_squared;
    d["commutator"] = r.commutator;
    d["anticommutator"] = r.anticommutator;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "SUSY quantum mechanics decoherence simulator core";

    py::register_exception<Error>(m, "SimulationError");

    py::enum_<Channel>(m, "Channel")
        .value("plus", Channel::plus)
        .value("minus", Channel::minus);

    py::class_<Polynomial>(m, "Polynomial")
        .def(py::init<std::vector<double>>(), py::arg("coefficients"))
        .def("__call__", [](const Polynomial& p, double x) { return p(x); })
        .def("derivative", &Polynomial::derivative)
        .def("degree", &Polynomial::degree)
        .def_property_readonly("coefficients",
                               [](const Polynomial& p) { return p.coefficients(); })
        .def("real_roots", [](const Polynomial& p) { return real_roots(p); })
        .def("__repr__", [](const Polynomial& p) { return format_polynomial(p); });

    m.def(
        "parse_superpotential",
        [](const std::string& text) {
            return parse_superpotential({text, "<python>"});
        },
        py::arg("text"));
    m.def("format_polynomial", &format_polynomial, py::arg("polynomial"));

    py::class_<SuperpotentialModel>(m, "SuperpotentialModel")
        .def(py::init<Polynomial, double, double>(), py::arg("w"), py::arg("mass") = 1.0,
             py::arg("hbar") = 1.0)
        .def_readonly("w", &SuperpotentialModel::w)
        .def_readonly("mass", &SuperpotentialModel::mass)
        .def_readonly("hbar", &SuperpotentialModel::hbar);

    py::class_<HarmonicChannel>(m, "HarmonicChannel")
        .def_readonly("channel", &HarmonicChannel::channel)
        .def_readonly("x0", &HarmonicChannel::x0)
        .def_readonly("omega0", &HarmonicChannel::omega0)
        .def_readonly("v0", &HarmonicChannel::v0)
        .def_readonly("f", &HarmonicChannel::f)
        .def_readonly("e0", &HarmonicChannel::e0)
        .def_readonly("g", &HarmonicChannel::g)
        .def("period", &HarmonicChannel::period)
        .def("vacuum_width", &HarmonicChannel::vacuum_width)
        .def("quadratic_potential", &HarmonicChannel::quadratic_potential);

    m.def("effective_potential", &effective_potential, py::arg("model"), py::arg("channel"));
    m.def("force", &force, py::arg("model"), py::arg("channel"));
    m.def("find_equilibria", &find_equilibria, py::arg("model"), py::arg("channel"));
    m.def("harmonic_params", &harmonic_params, py::arg("model"), py::arg("channel"),
          py::arg("x0"));
    m.def("select_default_equilibrium", &select_default_equilibrium, py::arg("model"),
          py::arg("channel"));
    m.def("eq21_frequency", &eq21_frequency, py::arg("model"), py::arg("channel"),
          py::arg("x0"));

    m.def("decoherence_equal_freq", &decoherence_equal_freq, py::arg("omega0"),
          py::arg("g_plus"), py::arg("g_minus"), py::arg("delta_e0"), py::arg("t"),
          py::arg("hbar") = 1.0);
    m.def(
        "decoherence_equal_freq_series",
        [](const HarmonicChannel& hp, const HarmonicChannel& hm,
           const std::vector<double>& ts) {
            return decoherence_equal_freq_series(hp, hm, ts).values;
        },
        py::arg("channel_plus"), py::arg("channel_minus"), py::arg("times"));
    m.def(
        "decoherence_paper_series",
        [](const HarmonicChannel& hp, const HarmonicChannel& hm,
           const std::vector<double>& ts) {
            return decoherence_paper_series(hp, hm, ts).values;
        },
        py::arg("channel_plus"), py::arg("channel_minus"), py::arg("times"));
    m.def(
        "gaussian_oracle_series",
        [](const HarmonicChannel& hp, const HarmonicChannel& hm, double center,
           double momentum, double width, const std::vector<double>& ts) {
            const GaussianPacket initial(center, momentum,
                                         cplx(1.0 / (2.0 * width * width), 0.0));
            return gaussian_oracle(hp, hm, initial, ts).values;
        },
        py::arg("channel_plus"), py::arg("channel_minus"), py::arg("center"),
        py::arg("momentum"), py::arg("width"), py::arg("times"));
    m.def(
        "classical_trajectory",
        [](const HarmonicChannel& hc, double t) {
            const PhaseSpacePoint p = classical_trajectory(hc, t);
            return py::make_tuple(p.x, p.p);
        },
        py::arg("channel"), py::arg("t"));

    m.def(
        "susy_algebra_report",
        [](const SuperpotentialModel& model, int n, double half_width) {
            const SusyAlgebraReport rep =
                susy_algebra_report(model, SpatialGrid(n, half_width));
            py::dict d;
            d["coarse"] = residuals_dict(rep.coarse);
            d["fine"] = residuals_dict(rep.fine);
            d["order_q1_squared"] = rep.order_q1_squared;
            d["order_q2_squared"] = rep.order_q2_squared;
            d["order_commutator"] = rep.order_commutator;
            d["order_anticommutator"] = rep.order_anticommutator;
            return d;
        },
        py::arg("model"), py::arg("n"), py::arg("half_width"));
    m.def(
        "spectrum_pair",
        [](const SuperpotentialModel& model, int n, double half_width, int k) {
            const SpatialGrid grid(n, half_width);
            return py::make_tuple(
                spectrum(build_block_hamiltonian(model, grid, Channel::plus), k),
                spectrum(build_block_hamiltonian(model, grid, Channel::minus), k));
        },
        py::arg("model"), py::arg("n"), py::arg("half_width"), py::arg("k"));
    m.def(
        "grid_decoherence",
        [](const SuperpotentialModel& model, const HarmonicChannel& hp,
           const HarmonicChannel& hm, int n, double half_width, double center,
           double width, double momentum, double dt, long steps, long sample_every,
           bool clamp) {
            auto grid = std::make_shared<const SpatialGrid>(n, half_width);
            const ChannelWavefunction psi0 =
                initial_packet(grid, center, width, momentum, Channel::plus, model.hbar);
            const auto tp = propagate(model, psi0, Channel::plus, dt, steps,
                                      clamp ? &hp : nullptr, sample_every);
            const auto tm = propagate(model, psi0, Channel::minus, dt, steps,
                                      clamp ? &hm : nullptr, sample_every);
            const DecoherenceSeries s = decoherence_numeric(tp, tm);
            return py::make_tuple(s.times, s.values);
        },
        py::arg("model"), py::arg("channel_plus"), py::arg("channel_minus"), py::arg("n"),
        py::arg("half_width"), py::arg("center"), py::arg("width"), py::arg("momentum"),
        py::arg("dt"), py::arg("steps"), py::arg("sample_every") = 1,
        py::arg("clamp") = true);

    m.def("load_config", &load_config, py::arg("path"));
    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def_readonly("w_text", &ScenarioConfig::w_text)
        .def_readonly("mass", &ScenarioConfig::mass)
        .def_readonly("hbar", &ScenarioConfig::hbar)
        .def_readonly("n", &ScenarioConfig::n)
        .def_readonly("steps", &ScenarioConfig::steps)
        .def_readonly("clamp_harmonic", &ScenarioConfig::clamp_harmonic);
    m.def("run_decoherence_csv", &cmd_decoherence, py::arg("config"), py::arg("out_path"));
}
