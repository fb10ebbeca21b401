#include <memory>
#include <optional>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hdx/complex.hpp"
#include "hdx/decomposition.hpp"
#include "hdx/error.hpp"
#include "hdx/expansion.hpp"
#include "hdx/graph.hpp"
#include "hdx/strips.hpp"
#include "hdx/unique_games.hpp"
#include "hdx/walks.hpp"

namespace py = pybind11;
using namespace hdx;

namespace {

using PyComplexPtr = std::shared_ptr<Complex>;

PyComplexPtr as_ptr(Complex cx) { return std::make_shared<Complex>(std::move(cx)); }

py::dict strip_report_dict(const StripReport& rep) {
    py::dict d;
    d["lambdas"] = rep.lambdas;
    d["residuals"] = rep.residuals;
    d["spectrum"] = rep.spectrum;
    d["assignment"] = rep.assignment;
    d["max_deviation"] = rep.max_deviation;
    d["bound_zhang"] = rep.bound_zhang;
    d["bound_ko"] = rep.bound_ko;
    d["pass"] = rep.pass;
    d["merged"] = rep.merged;
    d["merged_groups"] = rep.merged_groups;
    py::list strips;
    for (const auto& s : rep.strips) {
        py::dict e;
        e["lambda"] = s.lambda;
        e["count"] = s.count;
        e["min"] = s.min_eig;
        e["max"] = s.max_eig;
        strips.append(e);
    }
    d["strips"] = strips;
    return d;
}

} // namespace

PYBIND11_MODULE(_hdxwalk, m) {
    m.doc() = "weighted simplicial complexes, higher-order random walks, and their spectra";

    py::register_exception<Error>(m, "HdxError");

    py::class_<Complex, PyComplexPtr>(m, "Complex")
        .def_property_readonly("dimension", &Complex::dimension)
        .def_property_readonly("vertex_count", &Complex::vertex_count)
        .def("faces", &Complex::faces, py::arg("level"))
        .def("weights", &Complex::weights, py::arg("level"))
        .def("level_size", &Complex::level_size, py::arg("level"))
        .def("index_of", &Complex::index_of, py::arg("level"), py::arg("face"))
        .def("has_face", &Complex::has_face, py::arg("face"))
        .def("is_complete", &Complex::is_complete)
        .def("__repr__", [](const Complex& cx) {
            return "<Complex n=" + std::to_string(cx.vertex_count()) +
                   " d=" + std::to_string(cx.dimension()) + ">";
        });

    m.def(
        "build_complex",
        [](std::vector<Face> tops, std::optional<Eigen::VectorXd> w) {
            return as_ptr(build_complex(std::move(tops), std::move(w)));
        },
        py::arg("top_faces"), py::arg("weights") = std::nullopt);
    m.def(
        "complete_complex", [](int n, int d) { return as_ptr(complete_complex(n, d)); },
        py::arg("n"), py::arg("d"));
    m.def(
        "punctured_complete_complex",
        [](int n) { return as_ptr(punctured_complete_complex(n)); }, py::arg("n"));
    m.def(
        "sparsified_complex",
        [](int n, int d, double p, std::uint64_t seed) {
            return as_ptr(sparsified_complex(n, d, p, seed));
        },
        py::arg("n"), py::arg("d"), py::arg("p"), py::arg("seed"));
    m.def(
        "link", [](const PyComplexPtr& cx, const Face& tau) { return as_ptr(link(*cx, tau).complex); },
        py::arg("complex"), py::arg("tau"));
    m.def(
        "link_faces",
        [](const PyComplexPtr& cx, const Face& tau, int k) { return link_faces(*cx, tau, k); },
        py::arg("complex"), py::arg("tau"), py::arg("k"));
    m.def(
        "save_complex",
        [](const PyComplexPtr& cx, const std::filesystem::path& p) { save_complex(*cx, p); },
        py::arg("complex"), py::arg("path"));
    m.def(
        "load_complex", [](const std::filesystem::path& p) { return as_ptr(load_complex(p)); },
        py::arg("path"));

    m.def(
        "gamma",
        [](const PyComplexPtr& cx) {
            auto rep = gamma(*cx);
            py::dict d;
            d["gamma"] = rep.gamma;
            d["argmax_face"] = rep.argmax_face;
            py::list links;
            for (const auto& l : rep.links) {
                py::dict e;
                e["face"] = l.face;
                e["level"] = l.level;
                e["lambda2"] = l.lambda2;
                e["disconnected"] = l.disconnected;
                links.append(e);
            }
            d["links"] = links;
            return d;
        },
        py::arg("complex"));
    m.def(
        "skeleton_lambda2",
        [](const PyComplexPtr& cx) {
            auto r = second_eigenvalue(skeleton_graph(*cx));
            return py::make_tuple(r.lambda2, r.disconnected);
        },
        py::arg("complex"));

    py::class_<HDWalk>(m, "HDWalk")
        .def_property_readonly("level", &HDWalk::level)
        .def_property_readonly("weight", &HDWalk::weight)
        .def_property_readonly("height", &HDWalk::height)
        .def_property_readonly("is_complete", &HDWalk::is_complete)
        .def_property_readonly("description", &HDWalk::description)
        .def_property_readonly("self_adjointness_gap", &HDWalk::self_adjointness_gap)
        .def_property_readonly("complex",
             [](const HDWalk& w) { return std::const_pointer_cast<Complex>(w.complex_ptr()); })
        .def("matrix", [](const HDWalk& w) { return w.matrix().dense(); })
        .def("stationary", &HDWalk::stationary)
        .def("spectrum", &HDWalk::spectrum, py::return_value_policy::copy)
        .def("__repr__",
             [](const HDWalk& w) { return "<HDWalk " + w.description() + ">"; });

    m.def(
        "canonical_walk",
        [](const PyComplexPtr& cx, int k, int j) { return canonical_walk(cx, k, j); },
        py::arg("complex"), py::arg("k"), py::arg("j"));
    m.def(
        "swap_walk", [](const PyComplexPtr& cx, int k, int j) { return swap_walk(cx, k, j); },
        py::arg("complex"), py::arg("k"), py::arg("j"));
    m.def(
        "swap_walk_direct",
        [](const PyComplexPtr& cx, int k, int j) { return swap_walk_direct(cx, k, j); },
        py::arg("complex"), py::arg("k"), py::arg("j"));
    m.def(
        "swap_walk_ajt",
        [](const PyComplexPtr& cx, int k, int j) { return swap_walk_ajt(cx, k, j); },
        py::arg("complex"), py::arg("k"), py::arg("j"));
    m.def(
        "lower_walk_power",
        [](const PyComplexPtr& cx, int k, int t) { return lower_walk_power(cx, k, t); },
        py::arg("complex"), py::arg("k"), py::arg("t"));
    m.def(
        "identity_walk", [](const PyComplexPtr& cx, int k) { return identity_walk(cx, k); },
        py::arg("complex"), py::arg("k"));
    m.def(
        "hd_walk",
        [](const PyComplexPtr& cx, int k, const std::vector<std::pair<double, std::string>>& terms,
           bool complete) {
            std::vector<std::pair<double, Word>> ts;
            for (const auto& [a, w] : terms) ts.emplace_back(a, word_from_string(w));
            return hd_walk(cx, k, ts, complete);
        },
        py::arg("complex"), py::arg("k"), py::arg("terms"), py::arg("is_complete") = false);
    m.def(
        "parse_walk_spec",
        [](const PyComplexPtr& cx, const std::string& spec) { return parse_walk_spec(cx, spec); },
        py::arg("complex"), py::arg("spec"));
    m.def("laziness", &laziness, py::arg("walk"));
    m.def(
        "walk_graph",
        [](const HDWalk& w) {
            auto g = walk_graph(w);
            py::dict d;
            d["vertices"] = g.vertices;
            d["weights"] = g.weights;
            d["vertex_measure"] = g.vertex_measure;
            return d;
        },
        py::arg("walk"));

    m.def(
        "kernel_basis",
        [](const PyComplexPtr& cx, int i) { return kernel_basis(*cx, i).vectors; },
        py::arg("complex"), py::arg("i"));
    m.def(
        "decompose",
        [](const PyComplexPtr& cx, int k, const Eigen::VectorXd& f) {
            auto dec = decompose(*cx, k, f);
            py::dict d;
            d["k"] = dec.k;
            d["residual"] = dec.residual;
            d["components"] = dec.components;
            d["lifts"] = dec.lifts;
            return d;
        },
        py::arg("complex"), py::arg("k"), py::arg("f"));
    m.def(
        "orthogonality_report",
        [](const PyComplexPtr& cx, int k, const Eigen::VectorXd& f) {
            auto bases = lifted_bases(*cx, k);
            auto rep = orthogonality_report(*cx, bases, decompose(*cx, bases, f));
            py::dict d;
            d["gram"] = rep.gram;
            d["space_overlap"] = rep.space_overlap;
            d["norm_f"] = rep.norm_f;
            d["max_cross_gram"] = rep.max_cross_gram;
            d["max_cross_overlap"] = rep.max_cross_overlap;
            return d;
        },
        py::arg("complex"), py::arg("k"), py::arg("f"));
    m.def(
        "norm_ratio",
        [](const PyComplexPtr& cx, int k, int i, const Eigen::VectorXd& g) {
            return norm_ratio(*cx, k, i, g);
        },
        py::arg("complex"), py::arg("k"), py::arg("i"), py::arg("g"));

    m.def("pure_walk_lambda", &pure_walk_lambda, py::arg("k"), py::arg("down_positions"),
          py::arg("ell"));
    m.def("walk_lambdas", &walk_lambdas, py::arg("walk"));
    m.def(
        "stripping_report", [](const HDWalk& w) { return strip_report_dict(stripping_report(w)); },
        py::arg("walk"));
    m.def(
        "st_rank",
        [](const HDWalk& w, double delta) {
            auto r = st_rank(w, delta);
            return py::make_tuple(r.rank_predicted, r.rank_empirical);
        },
        py::arg("walk"), py::arg("delta"));
    m.def(
        "monotonicity_check",
        [](const HDWalk& w) {
            auto r = monotonicity_check(w);
            return py::make_tuple(r.monotone, r.violations);
        },
        py::arg("walk"));

    m.def(
        "link_indicator",
        [](const PyComplexPtr& cx, int k, const Face& tau) { return link_indicator(*cx, k, tau); },
        py::arg("complex"), py::arg("k"), py::arg("tau"));
    m.def(
        "expansion",
        [](const HDWalk& w, const Eigen::VectorXd& ind) {
            auto rec = expansion(w, ind);
            py::dict d;
            d["alpha"] = rec.alpha;
            d["phi"] = rec.phi;
            d["phi_quadratic"] = rec.phi_quadratic;
            return d;
        },
        py::arg("walk"), py::arg("indicator"));
    m.def(
        "local_expectation",
        [](const PyComplexPtr& cx, int k, const Eigen::VectorXd& f, int i) {
            return local_expectation(*cx, k, f, i);
        },
        py::arg("complex"), py::arg("k"), py::arg("f"), py::arg("i"));
    m.def(
        "ell2_profile",
        [](const PyComplexPtr& cx, int k, const Eigen::VectorXd& ind, int r) {
            return ell2_profile(*cx, k, ind, r);
        },
        py::arg("complex"), py::arg("k"), py::arg("indicator"), py::arg("r"));
    m.def(
        "ellinf_profile",
        [](const PyComplexPtr& cx, int k, const Eigen::VectorXd& f, int r) {
            return ellinf_profile(*cx, k, f, r);
        },
        py::arg("complex"), py::arg("k"), py::arg("f"), py::arg("r"));
    m.def(
        "variance_identity_check",
        [](const PyComplexPtr& cx, int k, const Eigen::VectorXd& f, int ell) {
            return variance_identity_check(*cx, k, f, ell);
        },
        py::arg("complex"), py::arg("k"), py::arg("f"), py::arg("ell"));
    m.def(
        "link_expansion_profile",
        [](const HDWalk& w) {
            auto prof = link_expansion_profile(w);
            py::dict d;
            d["lambdas"] = prof.lambdas;
            d["max_abs_error"] = prof.max_abs_error;
            d["dimension_equals_level"] = prof.dimension_equals_level;
            py::list entries;
            for (const auto& e : prof.entries) {
                py::dict x;
                x["face"] = e.face;
                x["level"] = e.level;
                x["phi"] = e.phi;
                x["alpha"] = e.alpha;
                entries.append(x);
            }
            d["links"] = entries;
            return d;
        },
        py::arg("walk"));
    m.def(
        "expansion_lower_bound",
        [](const HDWalk& w, const Eigen::VectorXd& ind, double delta,
           std::optional<double> gamma_value) {
            auto b = expansion_lower_bound(w, ind, delta, gamma_value);
            py::dict d;
            d["delta"] = b.delta;
            d["r"] = b.r;
            d["alpha"] = b.alpha;
            d["bound_c0"] = b.bound_c0;
            d["bound_with_c"] = b.bound_with_c;
            d["epsilons"] = b.epsilons;
            d["measured_phi"] = b.measured_phi;
            return d;
        },
        py::arg("walk"), py::arg("indicator"), py::arg("delta"),
        py::arg("gamma_value") = std::nullopt);
    m.def(
        "tightness_fixture_bm",
        [](const PyComplexPtr& cx, int mm, int k, int t) {
            auto fx = tightness_fixture_Bm(cx, mm, k, t);
            py::dict d;
            d["set"] = fx.set;
            d["exact_phi"] = fx.exact_phi;
            d["measured_phi"] = fx.measured_phi;
            d["eps_measured"] = fx.eps_measured;
            d["eps_formula"] = fx.eps_formula;
            return d;
        },
        py::arg("complex"), py::arg("m"), py::arg("k"), py::arg("t"));
    m.def(
        "vertex_expansion_deviation",
        [](const HDWalk& w, const Face& tau) {
            auto dev = vertex_expansion_deviation(w, tau);
            py::dict d;
            d["mean_abs"] = dev.mean_abs;
            d["max_abs"] = dev.max_abs;
            d["phi_link"] = dev.phi_link;
            return d;
        },
        py::arg("walk"), py::arg("tau"));

    py::class_<AffineUGInstance>(m, "AffineUGInstance")
        .def_property_readonly("alphabet_size", &AffineUGInstance::alphabet_size)
        .def_property_readonly("vertex_count", &AffineUGInstance::vertex_count)
        .def("edges", [](const AffineUGInstance& inst) {
            py::list out;
            for (const auto& e : inst.edges())
                out.append(py::make_tuple(e.u, e.v, e.weight, e.shift));
            return out;
        });

    m.def(
        "plant_instance",
        [](const HDWalk& w, int mm, double eps, std::uint64_t seed) {
            auto p = plant_instance(w, mm, eps, seed);
            return py::make_tuple(std::move(p.instance), p.ground_truth, p.corrupted_weight);
        },
        py::arg("walk"), py::arg("m"), py::arg("eps"), py::arg("seed"));
    m.def(
        "ug_value",
        [](const AffineUGInstance& inst, const Assignment& x) { return value(inst, x); },
        py::arg("instance"), py::arg("assignment"));
    m.def("random_baseline", &random_baseline, py::arg("instance"), py::arg("seed"));
    m.def(
        "iterated_link_rounding",
        [](const AffineUGInstance& inst, double eps, std::uint64_t seed, std::optional<int> r) {
            auto res = iterated_link_rounding(inst, eps, seed, r);
            py::dict d;
            d["assignment"] = res.assignment;
            d["value"] = res.value;
            d["baseline"] = res.baseline_value;
            d["r"] = res.r;
            d["rounds"] = res.rounds.size();
            return d;
        },
        py::arg("instance"), py::arg("eps"), py::arg("seed"), py::arg("r_override") = std::nullopt);
    m.def(
        "expander_fallback_check",
        [](const HDWalk& w) {
            auto d = expander_fallback_check(w);
            py::dict out;
            out["laziness"] = d.laziness;
            out["spectral_gap"] = d.spectral_gap;
            out["gap_threshold"] = d.gap_threshold;
            out["expander_route"] = d.expander_route;
            return out;
        },
        py::arg("walk"));
    m.def(
        "save_instance",
        [](const AffineUGInstance& inst, const std::filesystem::path& p) {
            save_instance(inst, p);
        },
        py::arg("instance"), py::arg("path"));
}
