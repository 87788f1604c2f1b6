#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fricflow/config.hpp"
#include "fricflow/output.hpp"
#include "fricflow/regularization.hpp"
#include "fricflow/verify.hpp"

namespace py = pybind11;
using namespace fricflow;

namespace {

Vec2 vec(const std::array<double, 2>& a) { return {a[0], a[1]}; }

py::dict report_dict(const VerifyReport& r) {
    py::list checks;
    for (const auto& c : r.checks) checks.append(py::make_tuple(c.name, c.passed, c.detail));
    py::dict d;
    d["title"] = r.title;
    d["passed"] = r.passed();
    d["checks"] = checks;
    d["notes"] = r.notes;
    return d;
}

// columns of the time series as lists, keyed like the csv header
py::dict rows_dict(const std::vector<DiagnosticsRow>& rows) {
    std::vector<double> t, e, j, je, md, dl, h1;
    std::vector<int> it;
    for (const auto& r : rows) {
        t.push_back(r.t);
        e.push_back(r.energy);
        j.push_back(r.j);
        je.push_back(r.j_eps);
        md.push_back(r.max_defect);
        dl.push_back(r.delta);
        it.push_back(r.newton_iters);
        h1.push_back(r.h1_norm);
    }
    py::dict d;
    d["t"] = t;
    d["energy"] = e;
    d["j"] = j;
    d["j_eps"] = je;
    d["max_defect"] = md;
    d["delta"] = dl;
    d["newton_iters"] = it;
    d["h1_norm"] = h1;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two-domain Stokes/Navier-Stokes flow with interface friction";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NewtonError>(m, "NewtonError", PyExc_RuntimeError);

    m.def("rho_eps", [](std::array<double, 2> z, double eps) { return rho_eps(vec(z), eps); }, py::arg("z"),
          py::arg("eps"));
    m.def(
        "alpha_eps",
        [](std::array<double, 2> z, double eps) {
            const Vec2 a = alpha_eps(vec(z), eps);
            return std::array<double, 2>{a.x, a.y};
        },
        py::arg("z"), py::arg("eps"));
    m.def("beta_eps", [](std::array<double, 2> z, double eps) { return beta_eps(vec(z), eps); }, py::arg("z"),
          py::arg("eps"), "row-major 2x2 Jacobian of alpha_eps");
    m.def(
        "complementarity_defect",
        [](std::array<double, 2> z, double g, double eps) { return complementarity_defect(vec(z), g, eps); },
        py::arg("z"), py::arg("g"), py::arg("eps"));

    py::class_<ParsedConfig>(m, "Config")
        .def_static("from_file", &parse_config, py::arg("path"))
        .def_static("from_text", &parse_config_text, py::arg("text"), py::arg("origin") = "<config>")
        .def_property_readonly("n", [](const ParsedConfig& c) { return c.run.mesh.n; })
        .def_property_readonly("nu", [](const ParsedConfig& c) { return c.run.nu; })
        .def_property_readonly("T", [](const ParsedConfig& c) { return c.run.T; })
        .def_property_readonly("dt", [](const ParsedConfig& c) { return c.run.dt; })
        .def_property_readonly("eps", [](const ParsedConfig& c) { return c.run.eps; })
        .def_property_readonly("problem", [](const ParsedConfig& c) { return std::string(to_string(c.run.problem)); })
        .def_property_readonly("num_steps", [](const ParsedConfig& c) { return c.run.num_steps(); });

    m.def(
        "mesh_info",
        [](int n) {
            MeshConfig mc;
            mc.n = n;
            const Mesh mesh = build_two_domain_mesh(mc);
            py::dict d;
            d["vertices"] = mesh.vertices.size();
            d["triangles"] = mesh.triangles.size();
            d["interface_edges"] = mesh.interface_edges.size();
            d["hash"] = mesh_hash_hex(mesh);
            d["valid"] = validate(mesh).ok();
            return d;
        },
        py::arg("n"), "counts and hash of the default two-box mesh with n subdivisions");

    m.def(
        "run",
        [](const ParsedConfig& c, const std::string& out) {
            const TimeStepper stepper(c.run);
            Trajectory traj;
            {
                py::gil_scoped_release nogil;
                traj = run(stepper);
                if (!out.empty()) write_outputs(traj, stepper.discretization(), c.run, out);
            }
            py::dict d = rows_dict(traj.rows);
            d["final_velocity"] = traj.states.back().u;
            d["final_pressure"] = traj.states.back().p;
            return d;
        },
        py::arg("config"), py::arg("out") = "", "time series of a run; writes the output files when out is given");

    m.def("timeseries_csv", [](const ParsedConfig& c) { return format_timeseries(run(c.run).rows); },
          py::arg("config"));

    m.def("verify_energy", [](const ParsedConfig& c, std::uint64_t seed) { return report_dict(verify_energy(c, seed)); },
          py::arg("config"), py::arg("seed") = 20240611);
    m.def(
        "verify_complementarity",
        [](const ParsedConfig& c, std::uint64_t seed) { return report_dict(verify_complementarity(c, seed)); },
        py::arg("config"), py::arg("seed") = 20240611);
    m.def("verify_eps_rate", [](const ParsedConfig& c) { return report_dict(verify_eps_rate(c)); }, py::arg("config"));
    m.def("verify_limits", [](const ParsedConfig& c) { return report_dict(verify_limits(c)); }, py::arg("config"));
    m.def("verify_convergence", [](const ParsedConfig& c) { return report_dict(verify_convergence(c)); },
          py::arg("config"));
}
