// Python bindings. Fields cross the boundary as float64 arrays of shape
// (n_radial, n_theta), matching the ring-major storage of the C++ grid.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wente/counterexample.hpp"
#include "wente/dyadic.hpp"
#include "wente/error.hpp"
#include "wente/experiments.hpp"
#include "wente/fields.hpp"
#include "wente/grid.hpp"
#include "wente/norms.hpp"
#include "wente/poisson.hpp"

namespace py = pybind11;
using namespace wente;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const ScalarField& f) {
    const auto& g = *f.grid;
    Array out({g.n_radial(), g.n_theta()});
    std::copy(f.values.begin(), f.values.end(), out.mutable_data());
    return out;
}

ScalarField to_field(const GridPtr& grid, const Array& a) {
    if (a.ndim() != 2 || a.shape(0) != grid->n_radial() || a.shape(1) != grid->n_theta())
        throw GridMismatchError("array shape does not match the grid (n_radial, n_theta)");
    return ScalarField(grid, std::vector<double>(a.data(), a.data() + a.size()));
}

VectorField to_vector(const GridPtr& grid, const Array& vx, const Array& vy) {
    VectorField v(grid);
    v.vx = to_field(grid, vx).values;
    v.vy = to_field(grid, vy).values;
    return v;
}

py::tuple from_vector(const VectorField& v) {
    return py::make_tuple(to_array(ScalarField(v.grid, v.vx)), to_array(ScalarField(v.grid, v.vy)));
}

Weight parse_weight(const std::string& name, double param) {
    if (name == "one") return Weight::one();
    if (name == "pow") return Weight::pow(param);
    if (name == "crit") return Weight::crit();
    if (name == "crit_beta") return Weight::crit_beta(param);
    if (name == "dgr") return Weight::dgr();
    throw ParameterError("unknown weight '" + name + "' (one | pow | crit | crit_beta | dgr)");
}

py::dict report_dict(const SuiteReport& rep) {
    py::list rows;
    for (const auto& r : rep.rows) {
        py::dict d;
        d["criterion"] = r.criterion;
        d["id"] = r.id;
        d["value"] = r.value;
        d["threshold"] = r.threshold;
        d["relation"] = r.relation;
        d["pass"] = r.pass;
        rows.append(d);
    }
    py::dict out;
    out["suite"] = rep.suite;
    out["rows"] = rows;
    out["pass"] = rep.pass();
    out["resampled"] = rep.resampled;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weighted Wente inequality toolkit on the unit disk";

    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<GridMismatchError>(m, "GridMismatchError", PyExc_ValueError);
    py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError", PyExc_ZeroDivisionError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    py::class_<PolarGrid, std::shared_ptr<PolarGrid>>(m, "Grid")
        .def_property_readonly("n_theta", &PolarGrid::n_theta)
        .def_property_readonly("n_radial", &PolarGrid::n_radial)
        .def_property_readonly("shape", [](const PolarGrid& g) { return py::make_tuple(g.n_radial(), g.n_theta()); })
        .def_property_readonly("radii", [](const PolarGrid& g) {
            auto r = g.radii();
            return Array(static_cast<py::ssize_t>(r.size()), r.data());
        })
        .def_property_readonly("thetas", [](const PolarGrid& g) {
            Array out(g.n_theta());
            for (int k = 0; k < g.n_theta(); ++k) out.mutable_data()[k] = g.theta(k);
            return out;
        })
        .def_property_readonly("weights", [](const PolarGrid& g) {
            auto w = g.quad_weights();
            Array out({g.n_radial(), g.n_theta()});
            std::copy(w.begin(), w.end(), out.mutable_data());
            return out;
        })
        .def("__repr__", [](const PolarGrid& g) {
            return "<Grid n_radial=" + std::to_string(g.n_radial()) + " n_theta=" + std::to_string(g.n_theta()) + ">";
        });

    m.def("make_grid", [](int n_theta, int levels, int npl, int core) {
        return std::const_pointer_cast<PolarGrid>(make_grid(n_theta, levels, npl, core));
    }, py::arg("n_theta") = 128, py::arg("levels") = 8, py::arg("nodes_per_level") = 16, py::arg("core_levels") = 4);

    m.def("sample", [](const std::string& d, const std::shared_ptr<PolarGrid>& g) { return to_array(sample(d, g)); },
          py::arg("descriptor"), py::arg("grid"));
    m.def("catalog", &catalog);

    m.def("integrate", [](const Array& f, const std::shared_ptr<PolarGrid>& g) { return integrate(to_field(g, f)); });
    m.def("gradient", [](const Array& f, const std::shared_ptr<PolarGrid>& g) { return from_vector(gradient(to_field(g, f))); });
    m.def("jacobian", [](const Array& a, const Array& b, const std::shared_ptr<PolarGrid>& g) {
        return to_array(jacobian(to_field(g, a), to_field(g, b)));
    });

    m.def("solve", [](const Array& rhs, const std::shared_ptr<PolarGrid>& g) {
        const DirichletSolution s = solve_dirichlet(to_field(g, rhs));
        return py::make_tuple(to_array(s.phi), s.report.residual_l2, s.report.boundary_max);
    }, py::arg("rhs"), py::arg("grid"), "Solve Lap(phi) = rhs, phi = 0 on r = 1. Returns (phi, residual_l2, boundary_max).");
    m.def("oracle_compare", [](const Array& rhs, const std::shared_ptr<PolarGrid>& g) {
        return oracle_compare(to_field(g, rhs)).relative_l2;
    });

    m.def("weighted_energy", [](const Array& vx, const Array& vy, const std::shared_ptr<PolarGrid>& g,
                                const std::string& weight, double param) {
        return weighted_energy(to_vector(g, vx, vy), parse_weight(weight, param));
    }, py::arg("vx"), py::arg("vy"), py::arg("grid"), py::arg("weight") = "one", py::arg("param") = 0.0);
    m.def("weighted_sup", [](const Array& f, const std::shared_ptr<PolarGrid>& g, double alpha) {
        return weighted_sup(to_field(g, f), alpha);
    });
    m.def("lorentz", [](const Array& f, const std::shared_ptr<PolarGrid>& g, double p, double q) {
        return lorentz(to_field(g, f), p, q);
    });
    m.def("lorentz_weak", [](const Array& f, const std::shared_ptr<PolarGrid>& g, double p) {
        return lorentz_weak(to_field(g, f), p);
    });

    m.def("s_alpha", &s_alpha);
    m.def("k_factor", &k_factor);
    m.def("closed_form_norms", [](double alpha, double beta) {
        py::dict d;
        for (const auto& e : closed_form_norms(alpha, beta).entries()) d[py::str(e.name)] = e.value;
        return d;
    });
    m.def("grad_a_tilde_quadrature", &grad_a_tilde_quadrature);
    m.def("sweep", [](const std::vector<double>& alphas, double beta, const std::shared_ptr<PolarGrid>& g) {
        const SweepTable t = divergence_sweep(alphas, beta, g);
        py::list rows;
        for (const auto& r : t.rows) {
            py::dict d;
            d["alpha"] = r.alpha;
            d["s"] = r.s;
            d["ratio"] = r.report.ratio;
            d["closed_form_ratio"] = r.closed_form_ratio;
            d["solved_ratio"] = r.solved_ratio;
            rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["slope"] = t.slope;
        out["max_over_min"] = t.max_over_min;
        out["monotone_increasing"] = t.monotone_increasing;
        return out;
    }, py::arg("alphas"), py::arg("beta"), py::arg("grid"));

    m.def("decompose", [](const Array& b, const std::shared_ptr<PolarGrid>& g, int j_max) {
        const DyadicDecomposition dec = decompose_b(to_field(g, b), j_max);
        py::list pieces;
        for (const auto& p : dec.pieces) {
            py::dict d;
            d["j"] = p.j;
            d["b_j"] = to_array(p.b_j);
            d["support"] = py::make_tuple(p.support_lo, p.support_hi);
            d["level_constant"] = p.level_constant;
            pieces.append(d);
        }
        py::dict out;
        out["pieces"] = pieces;
        out["reconstruction_error"] = dec.reconstruction_error;
        out["support_violation"] = dec.support_violation;
        out["c_dec"] = dec.c_dec;
        return out;
    }, py::arg("b"), py::arg("grid"), py::arg("j_max"));

    m.def("run_suite", [](const std::string& name, py::kwargs kw) {
        ExperimentConfig cfg;
        for (auto [key, value] : kw) {
            const auto k = key.cast<std::string>();
            if (k == "n_theta") cfg.n_theta = value.cast<int>();
            else if (k == "levels") cfg.levels = value.cast<int>();
            else if (k == "nodes_per_level") cfg.nodes_per_level = value.cast<int>();
            else if (k == "core_levels") cfg.core_levels = value.cast<int>();
            else if (k == "seed") cfg.seed = value.cast<std::uint64_t>();
            else if (k == "family") cfg.family = value.cast<std::string>();
            else if (k == "samples") cfg.samples = value.cast<int>();
            else if (k == "j_max") cfg.j_max = value.cast<int>();
            else if (k == "alphas") cfg.alphas = value.cast<std::vector<double>>();
            else if (k == "sweep_alphas") cfg.sweep_alphas = value.cast<std::vector<double>>();
            else if (k == "betas") cfg.betas = value.cast<std::vector<double>>();
            else if (k == "out_dir") cfg.out_dir = value.cast<std::string>();
            else throw ParameterError("unknown option '" + k + "'");
        }
        SuiteReport (*fn)(const ExperimentConfig&) = nullptr;
        if (name == "validate-solver") fn = run_solver_validation;
        else if (name == "random-suite") fn = run_random_suite;
        else if (name == "dyadic-audit") fn = run_dyadic_audit;
        else if (name == "counterexample") fn = run_counterexample;
        else if (name == "lorentz-check") fn = run_lorentz_check;
        else if (name == "all") fn = run_all;
        else throw ParameterError("unknown suite '" + name + "'");
        SuiteReport rep;
        {
            py::gil_scoped_release release;
            rep = fn(cfg);
        }
        return report_dict(rep);
    }, py::arg("name"));
}
