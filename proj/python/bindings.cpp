// Copyright 2026 The ofalqon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ofalqon/bench.hpp"
#include "ofalqon/error.hpp"

namespace py = pybind11;
using namespace ofq;

namespace {

using ComplexArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

ComplexArray to_numpy(const Statevector &s) {
    const auto amps = s.amplitudes();
    ComplexArray out(static_cast<py::ssize_t>(amps.size()));
    std::copy(amps.begin(), amps.end(), out.mutable_data());
    return out;
}

Statevector from_numpy(const ComplexArray &a) {
    if (a.ndim() != 1) {
        throw DimensionError("state must be a one-dimensional array");
    }
    return Statevector::from_amplitudes(std::vector<cplx>(a.data(), a.data() + a.size()));
}

FeedbackOrder parse_order(const std::string &s) {
    if (s == "fo" || s == "FO" || s == "first") {
        return FeedbackOrder::first;
    }
    if (s == "so" || s == "SO" || s == "second") {
        return FeedbackOrder::second;
    }
    throw InvalidArgument("order must be 'fo' or 'so'");
}

AnsatzVariant parse_variant(const std::string &s) {
    if (s == "standard") {
        return AnsatzVariant::standard;
    }
    if (s == "multi-angle" || s == "multi_angle") {
        return AnsatzVariant::multi_angle;
    }
    throw InvalidArgument("variant must be 'standard' or 'multi-angle'");
}

QaoaParams make_params(const Graph &g, const std::string &variant,
                       std::vector<std::vector<double>> gammas,
                       std::vector<std::vector<double>> betas) {
    QaoaParams p;
    p.variant = parse_variant(variant);
    p.gammas = std::move(gammas);
    p.betas = std::move(betas);
    p.validate(g);
    return p;
}

py::dict layer_dict(const FalqonLayer &l) {
    py::dict d;
    d["k"] = l.k;
    d["delta"] = l.delta;
    d["m"] = l.m;
    d["gamma"] = l.gamma;
    d["beta"] = l.beta;
    d["a_prev"] = l.a_prev;
    d["b_prev"] = l.b_prev;
    d["c_prev"] = l.c_prev;
    d["cost_after_layer"] = l.cost_after_layer;
    d["evals_this_layer"] = l.evals_this_layer;
    return d;
}

py::dict record_dict(const RunRecord &r) {
    py::dict d;
    d["method"] = r.method_id;
    d["instance"] = r.instance_id;
    d["depth"] = r.depth;
    d["seed"] = r.seed;
    if (r.ok()) {
        d["p_success"] = r.p_success;
        d["n_evals"] = r.n_evals;
        d["e1"] = r.e1;
        d["e2"] = r.e2;
    } else {
        d["error"] = r.error;
    }
    return d;
}

} // namespace

PYBIND11_MODULE(_ofalqon, m) {
    m.doc() = "Statevector FALQON / QAOA toolkit with a MaxCut benchmark harness";

    static py::exception<Error> base_error(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<SizeError>(m, "SizeError", PyExc_ValueError);
    py::register_exception<ConsistencyError>(m, "ConsistencyError", base_error.ptr());
    py::register_exception<OptimizerError>(m, "OptimizerError", base_error.ptr());
    py::register_exception<DegenerateSampleError>(m, "DegenerateSampleError", PyExc_ValueError);
    py::register_exception<InsufficientTraceError>(m, "InsufficientTraceError", PyExc_ValueError);
    py::register_exception<PairingError>(m, "PairingError", PyExc_ValueError);

    // Graphs
    py::class_<Graph>(m, "Graph")
        .def(py::init([](int n, const std::vector<std::pair<int, int>> &edges) {
                 std::vector<Edge> e;
                 for (const auto &[u, v] : edges) {
                     e.push_back({u, v});
                 }
                 return Graph(n, std::move(e));
             }),
             py::arg("n_vertices"), py::arg("edges"))
        .def_property_readonly("n_vertices", &Graph::n_vertices)
        .def_property_readonly("n_edges", &Graph::n_edges)
        .def_property_readonly("edges",
                               [](const Graph &g) {
                                   std::vector<std::pair<int, int>> out;
                                   for (const auto &e : g.edges()) {
                                       out.emplace_back(e.u, e.v);
                                   }
                                   return out;
                               })
        .def("degrees", &Graph::degrees)
        .def("is_regular", &Graph::is_regular, py::arg("degree"))
        .def("to_graph6", [](const Graph &g) { return emit_graph6(g); })
        .def_static("from_graph6", [](const std::string &s) { return parse_graph6(s); })
        .def("__eq__", [](const Graph &a, const Graph &b) { return a == b; })
        .def("__repr__", [](const Graph &g) {
            return "Graph(n_vertices=" + std::to_string(g.n_vertices()) +
                   ", n_edges=" + std::to_string(g.n_edges()) + ")";
        });

    m.def(
        "enumerate_cubic_graphs",
        [](int n, bool connected_only) {
            return enumerate_cubic_graphs(n, connected_only ? Connectivity::connected_only
                                                            : Connectivity::any);
        },
        py::arg("n_vertices") = 12, py::arg("connected_only") = false,
        py::call_guard<py::gil_scoped_release>());
    m.def("are_isomorphic", &are_isomorphic, py::arg("a"), py::arg("b"));
    m.def("canonical_graph6", &canonical_graph6, py::arg("graph"));
    m.def("load_ensemble", &load_ensemble, py::arg("source") = "builtin");
    m.def("ising_energies", &ising_energies, py::arg("graph"));
    m.def(
        "exact_maxcut",
        [](const Graph &g) {
            const auto s = exact_maxcut(g);
            py::dict d;
            d["max_cut_value"] = s.max_cut_value;
            d["min_energy"] = s.min_energy;
            d["optimal_bitstrings"] = s.optimal_bitstrings;
            return d;
        },
        py::arg("graph"));

    // States and feedback quantities
    m.def("plus_state", [](int n) { return to_numpy(plus_state(n)); }, py::arg("n_qubits"));
    m.def(
        "commutator_expectations",
        [](const Graph &g, const ComplexArray &state) {
            const auto s = from_numpy(state);
            const auto fb = commutator_expectations(IsingProblem(g), DriverOperator(g.n_vertices()), s);
            py::dict d;
            d["a"] = fb.a;
            d["b"] = fb.b;
            d["c"] = fb.c;
            d["var_a"] = fb.var_a;
            d["var_b"] = fb.var_b;
            d["var_c"] = fb.var_c;
            return d;
        },
        py::arg("graph"), py::arg("state"));
    m.def(
        "success_probability",
        [](const ComplexArray &state, const std::vector<Bitstring> &optimal) {
            return success_probability(from_numpy(state), optimal);
        },
        py::arg("state"), py::arg("optimal_bitstrings"));
    m.def(
        "sample_bitstrings",
        [](const ComplexArray &state, std::uint64_t shots, std::uint64_t seed) {
            return sample_bitstrings(from_numpy(state), shots, seed);
        },
        py::arg("state"), py::arg("shots"), py::arg("seed") = 0);

    // FALQON
    m.def("beta_from_feedback",
          [](const std::string &order, double a, double b, double c, double delta, double mm) {
              return beta_from_feedback(parse_order(order), a, b, c, delta, mm);
          },
          py::arg("order"), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("delta"),
          py::arg("m") = 1.0);
    m.def(
        "run_falqon",
        [](const Graph &g, int depth, const std::string &order, const std::string &mode,
           std::uint64_t shots, bool exact_cost, std::uint64_t seed,
           std::optional<double> delta, std::optional<double> gain) {
            const FeedbackOrder fo = parse_order(order);
            if (mode != "standard" && mode != "optimal") {
                throw InvalidArgument("mode must be 'standard' or 'optimal'");
            }
            FalqonConfig config = mode == "optimal" ? FalqonConfig::optimal(fo, depth)
                                                    : FalqonConfig::standard(fo, depth);
            if (delta) {
                config.delta_init = *delta;
            }
            if (gain) {
                config.m_init = *gain;
            }
            FalqonTrace trace;
            {
                py::gil_scoped_release release;
                trace = run_falqon(IsingProblem(g), config, shot_policy(shots, exact_cost), seed);
            }
            py::dict d;
            py::list layers;
            for (const auto &l : trace.layers) {
                layers.append(layer_dict(l));
            }
            d["layers"] = layers;
            d["final_state"] = to_numpy(trace.final_state);
            d["final_cost"] = trace.final_cost();
            d["n_evals"] = trace.n_evals();
            d["jsonl"] = trace_to_jsonl(trace);
            return d;
        },
        py::arg("graph"), py::arg("depth"), py::arg("order") = "fo",
        py::arg("mode") = "standard", py::arg("shots") = 0, py::arg("exact_cost") = false,
        py::arg("seed") = 0, py::arg("delta") = py::none(), py::arg("gain") = py::none());

    // QAOA
    m.def(
        "qaoa_state",
        [](const Graph &g, std::vector<std::vector<double>> gammas,
           std::vector<std::vector<double>> betas, const std::string &variant) {
            const auto p = make_params(g, variant, std::move(gammas), std::move(betas));
            return to_numpy(prepare_qaoa_state(IsingProblem(g), p));
        },
        py::arg("graph"), py::arg("gammas"), py::arg("betas"), py::arg("variant") = "standard");
    m.def(
        "qaoa_cost",
        [](const Graph &g, std::vector<std::vector<double>> gammas,
           std::vector<std::vector<double>> betas, const std::string &variant) {
            const auto p = make_params(g, variant, std::move(gammas), std::move(betas));
            return qaoa_cost(IsingProblem(g), p);
        },
        py::arg("graph"), py::arg("gammas"), py::arg("betas"), py::arg("variant") = "standard");
    m.def(
        "optimize_qaoa",
        [](const Graph &g, std::vector<std::vector<double>> gammas,
           std::vector<std::vector<double>> betas, const std::string &variant,
           const std::string &optimizer, int max_iterations, std::uint64_t shots,
           bool exact_cost, std::uint64_t seed, double learning_rate, double fd_step) {
            const auto init = make_params(g, variant, std::move(gammas), std::move(betas));
            OptimizerKind kind;
            if (optimizer == "powell") {
                kind = OptimizerKind::powell;
            } else if (optimizer == "gd" || optimizer == "gradient_descent") {
                kind = OptimizerKind::gradient_descent;
            } else {
                throw InvalidArgument("optimizer must be 'powell' or 'gd'");
            }
            OptimizerBudget budget;
            budget.max_iterations = max_iterations;
            QaoaOptimization out;
            {
                py::gil_scoped_release release;
                out = optimize_qaoa(IsingProblem(g), init, kind, budget,
                                    shot_policy(shots, exact_cost), seed,
                                    GradientSettings{learning_rate, fd_step});
            }
            py::dict d;
            d["gammas"] = out.params.gammas;
            d["betas"] = out.params.betas;
            d["value"] = out.result.best_value;
            d["n_evals"] = out.result.n_evals;
            d["iterations"] = out.result.iterations;
            return d;
        },
        py::arg("graph"), py::arg("gammas"), py::arg("betas"), py::arg("variant") = "standard",
        py::arg("optimizer") = "powell", py::arg("max_iterations") = 20, py::arg("shots") = 0,
        py::arg("exact_cost") = false, py::arg("seed") = 0,
        py::arg("learning_rate") = default_learning_rate, py::arg("fd_step") = default_fd_step);

    // Statistics
    py::class_<WilcoxonResult>(m, "WilcoxonResult")
        .def_readonly("statistic", &WilcoxonResult::statistic)
        .def_readonly("w_plus", &WilcoxonResult::w_plus)
        .def_readonly("w_minus", &WilcoxonResult::w_minus)
        .def_readonly("p_value", &WilcoxonResult::p_value)
        .def_readonly("n_used", &WilcoxonResult::n_used)
        .def_readonly("n_zero", &WilcoxonResult::n_zero)
        .def_readonly("exact", &WilcoxonResult::exact);
    m.def(
        "wilcoxon_signed_rank",
        [](const std::vector<double> &a, const std::vector<double> &b) {
            return wilcoxon_signed_rank(a, b);
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "holm_adjust", [](const std::vector<double> &p) { return holm_adjust(p); },
        py::arg("p_values"));

    // Benchmark harness
    m.def("table_methods", [] {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto &spec : table_methods()) {
            out.emplace_back(spec.id, spec.label);
        }
        return out;
    });
    m.def(
        "run_benchmark",
        [](const std::string &out, const std::string &methods, const std::string &depths,
           const std::string &graphs, const std::string &instances, std::uint64_t shots,
           bool exact_cost, std::uint64_t seed, int workers, bool resume, double learning_rate,
           int qaoa_max_iterations, int falqon_max_iterations,
           std::uint64_t falqon_max_evaluations) {
            BenchmarkPlan plan;
            plan.out_dir = out;
            plan.methods = parse_method_list(methods);
            plan.depths = parse_int_list(depths);
            plan.graphs = graphs;
            if (!instances.empty()) {
                plan.instances = parse_int_list(instances);
            }
            plan.shots = shots;
            plan.exact_cost = exact_cost;
            plan.base_seed = seed;
            plan.workers = workers;
            plan.resume = resume;
            plan.settings.gradient.learning_rate = learning_rate;
            plan.settings.qaoa_max_iterations = qaoa_max_iterations;
            plan.settings.falqon_layer_budget.max_iterations = falqon_max_iterations;
            plan.settings.falqon_layer_budget.max_evaluations = falqon_max_evaluations;
            RunReport report;
            {
                py::gil_scoped_release release;
                report = run_plan(plan);
            }
            py::dict d;
            d["scheduled"] = report.scheduled;
            d["skipped"] = report.skipped;
            d["failed"] = report.failed;
            return d;
        },
        py::arg("out"), py::arg("methods") = "falqon", py::arg("depths") = "1..10",
        py::arg("graphs") = "builtin", py::arg("instances") = "", py::arg("shots") = 8192,
        py::arg("exact_cost") = false, py::arg("seed") = 0, py::arg("workers") = 1,
        py::arg("resume") = false, py::arg("learning_rate") = default_learning_rate,
        py::arg("qaoa_max_iterations") = 20, py::arg("falqon_max_iterations") = 20,
        py::arg("falqon_max_evaluations") = 0);
    m.def(
        "load_records",
        [](const std::string &store) {
            py::list out;
            for (const auto &r : load_store(store).records) {
                out.append(record_dict(r));
            }
            return out;
        },
        py::arg("store"));
    m.def(
        "summarize",
        [](const std::string &store) {
            py::list out;
            for (const auto &r : summarize(load_store(store))) {
                py::dict d;
                d["method"] = r.method_id;
                d["label"] = r.label;
                d["depth"] = r.depth == 0 ? py::object(py::str("all")) : py::object(py::int_(r.depth));
                d["n_cells"] = r.n_cells;
                d["n_failed"] = r.n_failed;
                d["median_p_success"] = r.median_p_success;
                d["median_e1"] = r.median_e1;
                d["median_e2"] = r.median_e2;
                out.append(d);
            }
            return out;
        },
        py::arg("store"));
    m.def(
        "significance",
        [](const std::string &store, double alpha,
           std::vector<std::pair<std::string, std::string>> pairs, std::vector<int> depths) {
            SignificanceOptions opts;
            opts.alpha = alpha;
            opts.pairs = std::move(pairs);
            opts.depths = std::move(depths);
            py::list out;
            for (const auto &t : significance_report(load_store(store), opts)) {
                py::dict d;
                d["metric"] = t.metric;
                d["depth"] = t.depth;
                d["method_a"] = t.method_a;
                d["method_b"] = t.method_b;
                d["W"] = t.statistic;
                d["p_raw"] = t.p_raw;
                d["p_adj"] = t.p_adj;
                d["n_pairs"] = t.n_pairs;
                d["direction"] = t.direction;
                d["significant"] = t.significant;
                d["degenerate"] = t.degenerate;
                out.append(d);
            }
            return out;
        },
        py::arg("store"), py::arg("alpha") = 0.05,
        py::arg("pairs") = std::vector<std::pair<std::string, std::string>>{},
        py::arg("depths") = std::vector<int>{});
}
