// Python bindings for the milburn library.

#include "milburn/scenario.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace milburn;

namespace {

py::array_t<double> as_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::dict series_dict(const TimeSeries& s) {
    py::dict d;
    d["engine"] = std::string(engine_name(s.engine));
    d["t"] = as_array(s.times);
    d["n1"] = as_array(s.n1);
    d["n2"] = as_array(s.n2);
    d["n3"] = as_array(s.n3);
    if (!s.trace.empty()) d["trace"] = as_array(s.trace);
    return d;
}

std::vector<Engine> engines_from(const std::vector<std::string>& names) {
    std::string joined;
    for (const auto& n : names) joined += (joined.empty() ? "" : ",") + n;
    return parse_engines(joined);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Milburn intrinsic decoherence for three RWA-coupled oscillators";

    py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init([](double omega, double lambda, double g, double gamma, std::complex<double> alpha) {
                 SystemParams p{omega, lambda, g, gamma, alpha};
                 p.validate();
                 return p;
             }),
             py::arg("omega"), py::arg("lambda_"), py::arg("g"), py::arg("gamma"), py::arg("alpha"))
        .def_readwrite("omega", &SystemParams::omega)
        .def_readwrite("lambda_", &SystemParams::lambda)
        .def_readwrite("g", &SystemParams::g)
        .def_readwrite("gamma", &SystemParams::gamma)
        .def_readwrite("alpha", &SystemParams::alpha)
        .def("validate", &SystemParams::validate)
        .def("__repr__", [](const SystemParams& p) {
            std::ostringstream os;
            os << "SystemParams(omega=" << p.omega << ", lambda_=" << p.lambda << ", g=" << p.g
               << ", gamma=" << p.gamma << ", alpha=" << p.alpha << ")";
            return os.str();
        });

    py::class_<SpectralData>(m, "SpectralData")
        .def_readonly("theta", &SpectralData::theta)
        .def_readonly("phi", &SpectralData::phi)
        .def_readonly("omega_minus", &SpectralData::omega_minus)
        .def_readonly("omega_plus", &SpectralData::omega_plus)
        .def_readonly("Omega", &SpectralData::Omega)
        .def_readonly("Omega2", &SpectralData::Omega2);

    py::class_<PhotonNumbers>(m, "PhotonNumbers")
        .def_readonly("n1", &PhotonNumbers::n1)
        .def_readonly("n2", &PhotonNumbers::n2)
        .def_readonly("n3", &PhotonNumbers::n3)
        .def("total", &PhotonNumbers::total)
        .def("as_tuple", [](const PhotonNumbers& n) { return py::make_tuple(n.n1, n.n2, n.n3); })
        .def("__repr__", [](const PhotonNumbers& n) {
            std::ostringstream os;
            os.precision(17);
            os << "PhotonNumbers(" << n.n1 << ", " << n.n2 << ", " << n.n3 << ")";
            return os.str();
        });

    m.def("mixing_angle", &mixing_angle, py::arg("params"));
    m.def("effective_frequencies", &effective_frequencies, py::arg("params"));
    m.def("single_particle_matrix", &single_particle_matrix, py::arg("params"));
    m.def("damping_factor", &damping_factor, py::arg("delta"), py::arg("gamma"), py::arg("t"));
    m.def("steady_n3", [](const SystemParams& p) { return steady_n3(p, effective_frequencies(p)); },
          py::arg("params"));
    m.def("asymptotic_time", [](const SystemParams& p) { return asymptotic_time(p, effective_frequencies(p)); },
          py::arg("params"));

    m.def(
        "mean_photon_numbers",
        [](const SystemParams& p, const std::vector<double>& times) {
            return series_dict(analytic_series(p, times));
        },
        py::arg("params"), py::arg("times"), "Closed-form <n_j>(t) on a grid, as a dict of numpy arrays.");
    m.def(
        "per_k_expectations",
        [](const SystemParams& p, long k) {
            if (k < 0) throw py::value_error("k must be >= 0");
            return per_k_expectations(p, effective_frequencies(p), k);
        },
        py::arg("params"), py::arg("k"));
    m.def("schrodinger_occupations", &schrodinger_occupations, py::arg("params"), py::arg("t"));
    m.def("coherent_oracle", &coherent_oracle, py::arg("params"), py::arg("t"),
          py::arg("tol") = kDefaultSeriesTol);
    m.def(
        "poisson_kmax",
        [](double mean, double tol) {
            const SeriesTruncation s = poisson_kmax(mean, tol);
            return py::make_tuple(s.k_max, s.tail_bound);
        },
        py::arg("mean"), py::arg("tol"), "Returns (k_max, tail mass above k_max).");

    py::class_<CoherentOracle>(m, "CoherentOracle")
        .def(py::init<const SystemParams&, double>(), py::arg("params"), py::arg("tol") = kDefaultSeriesTol)
        .def("per_k", &CoherentOracle::per_k, py::arg("k"))
        .def("at", &CoherentOracle::at, py::arg("t"))
        .def("series", [](CoherentOracle& o, const std::vector<double>& times) { return series_dict(o.series(times)); },
             py::arg("times"));

    py::class_<FockSeriesEngine>(m, "FockSeriesEngine")
        .def(py::init([](const SystemParams& p, std::array<int, 3> dims, double tol, double leakage_budget) {
                 return FockSeriesEngine(p, FockDims(dims[0], dims[1], dims[2]),
                                         FockSeriesOptions{tol, leakage_budget});
             }),
             py::arg("params"), py::arg("dims"), py::arg("tol") = kDefaultSeriesTol,
             py::arg("leakage_budget") = kDefaultLeakageBudget)
        .def_property_readonly("leakage", &FockSeriesEngine::leakage)
        .def("observables",
             [](FockSeriesEngine& e, double t) {
                 const FockSeriesResult r = e.observables(t);
                 return py::make_tuple(r.n, r.trace);
             },
             py::arg("t"), "Returns (PhotonNumbers, trace).")
        .def("series", [](FockSeriesEngine& e, const std::vector<double>& times) { return series_dict(e.series(times)); },
             py::arg("times"))
        .def("purity", &FockSeriesEngine::purity, py::arg("t"))
        .def("density", [](const FockSeriesEngine& e, double t) { return Eigen::MatrixXcd(e.density(t).matrix); },
             py::arg("t"));

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("name", &ScenarioConfig::name)
        .def_readwrite("params", &ScenarioConfig::params)
        .def_readwrite("t_max", &ScenarioConfig::t_max)
        .def_readwrite("steps", &ScenarioConfig::steps)
        .def_property(
            "engines",
            [](const ScenarioConfig& c) {
                std::vector<std::string> out;
                for (Engine e : c.engines) out.emplace_back(engine_name(e));
                return out;
            },
            [](ScenarioConfig& c, const std::vector<std::string>& names) { c.engines = engines_from(names); })
        .def_property(
            "dims", [](const ScenarioConfig& c) { return std::array<int, 3>{c.dims.n1, c.dims.n2, c.dims.n3}; },
            [](ScenarioConfig& c, std::array<int, 3> d) { c.dims = FockDims(d[0], d[1], d[2]); })
        .def("set", [](ScenarioConfig& c, const std::string& key, const std::string& value) {
            apply_setting(c, key, value);
        }, py::arg("key"), py::arg("value"), "Applies one config-file style `key = value` setting.");

    m.def("presets", &presets);
    m.def("preset", &preset, py::arg("name"));
    m.def(
        "run_scenario",
        [](const ScenarioConfig& cfg) {
            const ScenarioResult r = run_scenario(cfg);
            py::dict out;
            py::list series;
            for (const auto& s : r.series) series.append(series_dict(s));
            py::list devs;
            for (const auto& d : r.deviations) {
                py::dict e;
                e["pair"] = py::make_tuple(std::string(engine_name(d.a)), std::string(engine_name(d.b)));
                e["max_dev"] = d.max_dev;
                e["t_at_max"] = d.t_at_max;
                e["threshold"] = d.threshold;
                e["ok"] = d.ok();
                devs.append(e);
            }
            out["series"] = series;
            out["deviations"] = devs;
            out["leakage"] = r.leakage;
            out["ok"] = r.ok();
            return out;
        },
        py::arg("config"));
    m.def(
        "validate",
        [](const ScenarioConfig& cfg, double omega_shift) {
            const ValidationReport rep = validate(cfg, FaultInjection{omega_shift});
            py::list checks;
            for (const auto& c : rep.checks) checks.append(py::make_tuple(c.name, c.measured, c.threshold, c.passed));
            return py::make_tuple(rep.passed(), checks);
        },
        py::arg("config"), py::arg("omega_shift") = 0.0, "Returns (passed, [(name, measured, threshold, passed)]).");
}
