#include "mtinv/config.hpp"
#include "mtinv/diagnostics.hpp"
#include "mtinv/errors.hpp"
#include "mtinv/harness.hpp"
#include "mtinv/inverse.hpp"
#include "mtinv/minimizers.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace mtinv;

namespace {

// System from a builtin name or a JSON string in the config schema.
MaterialSystem system_arg(const std::string& spec)
{
    if (!spec.empty() && spec.front() == '{') {
        return system_from_json(Json::parse(spec));
    }
    return builtin_system(spec);
}

py::dict report_dict(const RecoveryReport& r)
{
    py::dict d;
    d["phi_star"] = r.phi_star;
    d["t_star"] = r.t_star;
    d["status"] = std::string(to_string(r.status));
    d["formulation"] = std::string(to_string(r.formulation));
    d["iterations"] = r.iterations;
    return d;
}

} // namespace

PYBIND11_MODULE(_mtinv, m)
{
    m.doc() = "Volume-fraction recovery for dielectric composites";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    auto validation = py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<NonPositiveFrequency>(m, "NonPositiveFrequency", validation.ptr());
    py::register_exception<SingularDenominator>(m, "SingularDenominator", base.ptr());
    py::register_exception<EmptyMinimizerSet>(m, "EmptyMinimizerSet", base.ptr());
    py::register_exception<DegenerateScale>(m, "DegenerateScale", base.ptr());
    py::register_exception<InfeasibleMeasurement>(m, "InfeasibleMeasurement", base.ptr());
    py::register_exception<SingularSensitivity>(m, "SingularSensitivity", base.ptr());
    py::register_exception<NumericalFailure>(m, "NumericalFailure", base.ptr());

    m.attr("VACUUM_PERMITTIVITY") = kVacuumPermittivity;

    m.def(
        "depolarization_q", [](double alpha) { return depolarization_q({alpha}); }, py::arg("alpha"));

    m.def(
        "permittivities", [](const std::string& system, double f) { return system_arg(system).permittivities(f); },
        py::arg("system"), py::arg("frequency_hz"));

    m.def(
        "forward",
        [](const std::string& system, const Eigen::VectorXd& phi, const std::vector<double>& freqs) {
            const MaterialSystem sys = system_arg(system);
            validate_fractions(phi);
            std::vector<Complex> out;
            for (double f : freqs) {
                out.push_back(forward_permittivity(sys, phi, f));
            }
            return out;
        },
        py::arg("system"), py::arg("phi"), py::arg("frequencies_hz"), "Raw effective permittivity per frequency.");

    m.def(
        "pq",
        [](const std::string& system, double f) {
            const PQVectors pq = system_pq(system_arg(system), f);
            return py::make_tuple(pq.p, pq.q);
        },
        py::arg("system"), py::arg("frequency_hz"));

    m.def(
        "invert",
        [](const std::string& system, const std::vector<double>& freqs, const std::vector<Complex>& eps,
           bool dominance) {
            const MaterialSystem sys = system_arg(system);
            if (freqs.size() != eps.size()) {
                throw ValidationError("frequencies and measurements differ in length");
            }
            std::vector<RawMeasurement> raw;
            for (std::size_t k = 0; k < freqs.size(); ++k) {
                raw.push_back({freqs[k], eps[k]});
            }
            InvertOptions opts;
            opts.enforce_dominance = dominance;
            return report_dict(invert(sys, normalize(sys, raw), opts));
        },
        py::arg("system"), py::arg("frequencies_hz"), py::arg("eps"), py::arg("dominance") = false,
        "Recover volume fractions from raw measurements.");

    m.def(
        "invert_single",
        [](const Eigen::VectorXd& contrasts_re, double eps_hat, bool dominance) {
            std::vector<Complex> r(contrasts_re.data(), contrasts_re.data() + contrasts_re.size());
            return report_dict(solve_cc(assemble_cc(build_pq(r), eps_hat, dominance)));
        },
        py::arg("contrasts"), py::arg("eps_hat"), py::arg("dominance") = false,
        "Charnes-Cooper recovery from one real normalized value.");

    m.def(
        "simplex_minimizers",
        [](const Eigen::VectorXd& u) { return simplex_minimizers(u).generators; }, py::arg("u"));
    m.def(
        "ordered_simplex_minimizers",
        [](const Eigen::VectorXd& u) { return ordered_simplex_minimizers(u).generators; }, py::arg("u"));
    m.def(
        "ordered_vertices",
        [](std::size_t n) {
            py::list out;
            for (const auto& v : ordered_vertices(n)) {
                out.append(py::make_tuple(v.subset, v.phi));
            }
            return out;
        },
        py::arg("n"));
    m.def(
        "ordered_edges",
        [](std::size_t n) {
            py::list out;
            for (const auto& e : ordered_edges(n)) {
                out.append(py::make_tuple(e.subset, e.k));
            }
            return out;
        },
        py::arg("n"));

    m.def("tangent_basis", &tangent_basis, py::arg("n"));
    m.def(
        "sensitivity",
        [](const std::string& system, const std::vector<double>& freqs, const std::vector<Complex>& eps_hat) {
            const SensitivityReport r = sensitivity_at(system_arg(system), freqs, eps_hat);
            py::dict d;
            d["G"] = r.g;
            d["singular_values"] = r.singular_values;
            d["rank"] = r.rank;
            d["sigma_min"] = r.sigma_min;
            d["identifiable"] = r.identifiable;
            return d;
        },
        py::arg("system"), py::arg("frequencies_hz"), py::arg("eps_hat"));
    m.def("error_bound", &error_bound, py::arg("t_star"), py::arg("sigma_min"), py::arg("m"), py::arg("delta_r"),
          py::arg("delta_i"), py::arg("eps0_modulus"));

    m.def(
        "solve_lp",
        [](const Eigen::VectorXd& c, const Eigen::MatrixXd& a_ub, const Eigen::VectorXd& b_ub,
           const Eigen::MatrixXd& a_eq, const Eigen::VectorXd& b_eq, const Eigen::VectorXd& lower,
           const Eigen::VectorXd& upper) {
            LPProblem lp{c, a_eq, b_eq, a_ub, b_ub, lower, upper};
            if (lp.a_ub.size() == 0) {
                lp.a_ub.resize(0, c.size());
            }
            if (lp.a_eq.size() == 0) {
                lp.a_eq.resize(0, c.size());
            }
            const LPSolution s = solve_lp(lp);
            py::dict d;
            d["x"] = s.x;
            d["objective"] = s.objective;
            d["status"] = std::string(to_string(s.status));
            d["iterations"] = s.iterations;
            return d;
        },
        py::arg("c"), py::arg("a_ub") = Eigen::MatrixXd(), py::arg("b_ub") = Eigen::VectorXd(),
        py::arg("a_eq") = Eigen::MatrixXd(), py::arg("b_eq") = Eigen::VectorXd(),
        py::arg("lower") = Eigen::VectorXd(), py::arg("upper") = Eigen::VectorXd(),
        "min c.x subject to a_ub x <= b_ub, a_eq x = b_eq, lower <= x <= upper (default x >= 0).");

    m.def(
        "run_campaign",
        [](const std::string& system, const std::vector<std::size_t>& m_values, std::size_t samples, double noise,
           std::uint64_t seed, unsigned workers) {
            CampaignOptions opt;
            opt.m_values = m_values;
            opt.samples = samples;
            opt.noise = {noise, noise, seed};
            opt.workers = workers;
            CampaignResult res;
            {
                py::gil_scoped_release release;
                res = run_campaign(system_arg(system), opt);
            }
            std::ostringstream csv;
            write_csv(csv, res);
            const Json agg = to_json(std::span<const Aggregate>(res.aggregates));
            return py::make_tuple(agg.dump(), csv.str());
        },
        py::arg("system"), py::arg("m_values"), py::arg("samples") = 1000, py::arg("noise") = 0.1,
        py::arg("seed") = 42, py::arg("workers") = 0, "Returns (aggregate JSON, per-sample CSV).");
}
