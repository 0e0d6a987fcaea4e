#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fnbo/bench.hpp"

namespace py = pybind11;
using namespace fnbo;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cost-aware Bayesian optimization of function networks";

    py::class_<ProblemInstance>(m, "Problem")
        .def_property_readonly("name", [](const ProblemInstance& p) { return p.name; })
        .def_property_readonly("dim", [](const ProblemInstance& p) { return p.spec.d; })
        .def_property_readonly("num_nodes", [](const ProblemInstance& p) { return p.spec.K(); })
        .def_property_readonly("budget", [](const ProblemInstance& p) { return p.budget; })
        .def_property_readonly("n_init", [](const ProblemInstance& p) { return p.n_init; })
        .def_property_readonly("full_cost",
                               [](const ProblemInstance& p) { return p.spec.full_cost(); })
        .def_property_readonly("costs",
                               [](const ProblemInstance& p) {
                                   std::vector<double> out;
                                   for (const NodeSpec& n : p.spec.nodes) out.push_back(n.cost);
                                   return out;
                               })
        .def_property_readonly("noisy", &ProblemInstance::noisy)
        .def("metric", &ProblemInstance::metric, py::arg("x"),
             "noise-free ground-truth composite at x")
        .def("network_toml", [](const ProblemInstance& p) { return p.spec.to_toml(); })
        .def("__repr__", [](const ProblemInstance& p) {
            return "<Problem " + p.name + " d=" + std::to_string(p.spec.d) +
                   " nodes=" + std::to_string(p.spec.K()) + ">";
        });

    m.def("problem_names", &problem_names);
    m.def("make_problem", &make_problem, py::arg("name"), py::arg("seed") = 0);
    m.def("with_noise", &with_noise, py::arg("problem"), py::arg("std"));
    m.def("algo_names", [] {
        std::vector<std::string> out;
        for (Algo a : all_algos()) out.push_back(algo_name(a));
        return out;
    });

    py::class_<MultiStartConfig>(m, "MultiStartConfig")
        .def(py::init<>())
        .def_readwrite("raw_per_dim", &MultiStartConfig::raw_per_dim)
        .def_readwrite("starts_per_dim", &MultiStartConfig::starts_per_dim)
        .def_readwrite("ascent_iters", &MultiStartConfig::ascent_iters)
        .def_readwrite("seed", &MultiStartConfig::seed);

    py::class_<InnerSetConfig>(m, "InnerSetConfig")
        .def(py::init<>())
        .def_readwrite("n_thompson", &InnerSetConfig::n_thompson)
        .def_readwrite("n_local", &InnerSetConfig::n_local)
        .def_readwrite("local_radius", &InnerSetConfig::local_radius)
        .def_readwrite("ts_raw", &InnerSetConfig::ts_raw)
        .def_readwrite("ts_starts", &InnerSetConfig::ts_starts)
        .def_readwrite("ts_ascent_iters", &InnerSetConfig::ts_ascent_iters)
        .def_readwrite("seed", &InnerSetConfig::seed);

    py::class_<LoopConfig>(m, "LoopConfig")
        .def(py::init<>())
        .def_readwrite("I", &LoopConfig::I)
        .def_readwrite("J", &LoopConfig::J)
        .def_readwrite("qmc", &LoopConfig::qmc)
        .def_readwrite("antithetic", &LoopConfig::antithetic)
        .def_readwrite("inner", &LoopConfig::inner)
        .def_readwrite("acq_ms", &LoopConfig::acq_ms)
        .def_readwrite("rec_ms", &LoopConfig::rec_ms)
        .def_readwrite("fit_restarts", &LoopConfig::fit_restarts)
        .def_readwrite("charge_init", &LoopConfig::charge_init)
        .def_readwrite("blackbox_metric", &LoopConfig::blackbox_metric)
        .def_readwrite("seed", &LoopConfig::seed);

    py::class_<IterRow>(m, "IterRow")
        .def_readonly("iter", &IterRow::iter)
        .def_readonly("node", &IterRow::node)
        .def_readonly("cost", &IterRow::cost)
        .def_readonly("spent", &IterRow::spent)
        .def_readonly("metric", &IterRow::metric)
        .def_readonly("nu_star", &IterRow::nu_star)
        .def_readonly("wall_ms", &IterRow::wall_ms);

    py::class_<RunRecord>(m, "RunRecord")
        .def_readonly("algo", &RunRecord::algo)
        .def_readonly("rows", &RunRecord::rows)
        .def_readonly("node_counts", &RunRecord::node_counts)
        .def_readonly("x_rec", &RunRecord::x_rec)
        .def_readonly("nu_rec", &RunRecord::nu_rec)
        .def_readonly("metric_rec", &RunRecord::metric_rec)
        .def_readonly("aborted", &RunRecord::aborted)
        .def("to_csv", &RunRecord::to_csv);

    m.def(
        "run_bo",
        [](const ProblemInstance& p, const std::string& algo, double budget,
           const LoopConfig& cfg) { return run_bo(p, algo_from_name(algo), budget, cfg); },
        py::arg("problem"), py::arg("algo"), py::arg("budget"), py::arg("config") = LoopConfig{},
        py::call_guard<py::gil_scoped_release>());

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_static("from_toml",
                    [](const std::string& text) {
                        return ExperimentConfig::from_toml(TomlTable::parse(text));
                    })
        .def_static("from_toml_file",
                    [](const std::string& path) {
                        return ExperimentConfig::from_toml(TomlTable::parse_file(path));
                    })
        .def("to_toml", &ExperimentConfig::to_toml)
        .def("validate", &ExperimentConfig::validate)
        .def_readwrite("problem", &ExperimentConfig::problem)
        .def_readwrite("algorithms", &ExperimentConfig::algorithms)
        .def_readwrite("budget", &ExperimentConfig::budget)
        .def_readwrite("replications", &ExperimentConfig::replications)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("costs", &ExperimentConfig::costs)
        .def_readwrite("noise", &ExperimentConfig::noise)
        .def_readwrite("I", &ExperimentConfig::I)
        .def_readwrite("J", &ExperimentConfig::J)
        .def_readwrite("n_thompson", &ExperimentConfig::n_thompson)
        .def_readwrite("n_local", &ExperimentConfig::n_local)
        .def_readwrite("local_radius", &ExperimentConfig::local_radius)
        .def_readwrite("model_mode", &ExperimentConfig::model_mode)
        .def_readwrite("out_dir", &ExperimentConfig::out_dir)
        .def_readwrite("raw_per_dim", &ExperimentConfig::raw_per_dim)
        .def_readwrite("starts_per_dim", &ExperimentConfig::starts_per_dim)
        .def_readwrite("ascent_iters", &ExperimentConfig::ascent_iters)
        .def_readwrite("fit_restarts", &ExperimentConfig::fit_restarts)
        .def_readwrite("qmc", &ExperimentConfig::qmc)
        .def_readwrite("antithetic", &ExperimentConfig::antithetic)
        .def_readwrite("charge_init", &ExperimentConfig::charge_init)
        .def_readwrite("threads", &ExperimentConfig::threads)
        .def_readwrite("score_I", &ExperimentConfig::score_I)
        .def_readwrite("score_J", &ExperimentConfig::score_J)
        .def_readwrite("compare_snapshots", &ExperimentConfig::compare_snapshots)
        .def_readwrite("compare_I", &ExperimentConfig::compare_I)
        .def_readwrite("compare_A", &ExperimentConfig::compare_A);

    py::class_<AlgoCurve>(m, "AlgoCurve")
        .def_readonly("algo", &AlgoCurve::algo)
        .def_readonly("mean", &AlgoCurve::mean)
        .def_readonly("se", &AlgoCurve::se)
        .def_readonly("node_means", &AlgoCurve::node_means)
        .def_readonly("mean_run_ms", &AlgoCurve::mean_run_ms)
        .def_readonly("mean_iter_ms", &AlgoCurve::mean_iter_ms);

    py::class_<AggregateReport>(m, "AggregateReport")
        .def_readonly("problem", &AggregateReport::problem)
        .def_readonly("budget", &AggregateReport::budget)
        .def_readonly("grid", &AggregateReport::grid)
        .def_readonly("curves", &AggregateReport::curves)
        .def_readonly("runs", &AggregateReport::runs)
        .def("aggregate_csv", &AggregateReport::aggregate_csv)
        .def("node_counts_csv", &AggregateReport::node_counts_csv)
        .def("timings_csv", &AggregateReport::timings_csv)
        .def("curves_svg", &AggregateReport::curves_svg);

    m.def("run_experiment", &run_experiment, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<CompareRow>(m, "CompareRow")
        .def_readonly("snapshot", &CompareRow::snapshot)
        .def_readonly("I", &CompareRow::I)
        .def_readonly("method", &CompareRow::method)
        .def_readonly("A", &CompareRow::A)
        .def_readonly("value", &CompareRow::value)
        .def_readonly("wall_ms", &CompareRow::wall_ms);

    py::class_<CompareReport>(m, "CompareReport")
        .def_readonly("rows", &CompareReport::rows)
        .def("to_csv", &CompareReport::to_csv);

    m.def("compare_optimizers", &compare_optimizers, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
}
