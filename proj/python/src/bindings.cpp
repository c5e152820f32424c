#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "curvecast/curve_model.hpp"
#include "curvecast/errors.hpp"
#include "curvecast/experiments.hpp"
#include "curvecast/predictor.hpp"
#include "curvecast/synthlab.hpp"
#include "curvecast/wnls_fit.hpp"

namespace py = pybind11;
using namespace curvecast;

namespace {

DataPoints make_points(std::vector<double> sizes, std::vector<double> accuracies) {
    return DataPoints{std::move(sizes), std::move(accuracies)};
}

const char* status_name(SizeStatus s) { return s == SizeStatus::ok ? "ok" : "sub-unit-size"; }

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Inverse power law learning-curve fitting and training-size prediction";

    auto error = py::register_exception<Error>(m, "Error");
    py::register_exception<DomainError>(m, "DomainError", error);
    py::register_exception<ContractError>(m, "ContractError", error);
    py::register_exception<FlatCurveError>(m, "FlatCurveError", error);
    py::register_exception<UnreachableTargetError>(m, "UnreachableTargetError", error);
    py::register_exception<FlatDataError>(m, "FlatDataError", error);
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", error);
    py::register_exception<BootstrapFailure>(m, "BootstrapFailure", error);
    py::register_exception<ParseError>(m, "ParseError", error);

    py::class_<CurveParams>(m, "CurveParams")
        .def(py::init<double, double>(), py::arg("b1"), py::arg("b2"))
        .def_property_readonly("b1", &CurveParams::b1)
        .def_property_readonly("b2", &CurveParams::b2)
        .def("__repr__", [](const CurveParams& p) {
            return "CurveParams(b1=" + std::to_string(p.b1()) + ", b2=" + std::to_string(p.b2()) + ")";
        });

    py::class_<JacobianRow>(m, "JacobianRow")
        .def_readonly("d_b1", &JacobianRow::d_b1)
        .def_readonly("d_b2", &JacobianRow::d_b2);

    m.def("eval", &eval, py::arg("params"), py::arg("x"));
    m.def("jacobian_row", &jacobian_row, py::arg("params"), py::arg("x"));
    m.def(
        "invert_for_size",
        [](const CurveParams& p, double target) {
            const auto r = invert_for_size(p, target);
            return py::make_tuple(r.size, status_name(r.status));
        },
        py::arg("params"), py::arg("target"), "Returns (size, status).");

    py::class_<ObservationGroup>(m, "ObservationGroup")
        .def_readonly("size", &ObservationGroup::size)
        .def_readonly("replicates", &ObservationGroup::replicates)
        .def_readonly("repetitions", &ObservationGroup::repetitions)
        .def_readonly("class_label", &ObservationGroup::class_label);

    py::class_<ObservationSet>(m, "ObservationSet")
        .def_property_readonly("groups", &ObservationSet::groups)
        .def("class_labels", &ObservationSet::class_labels)
        .def("sizes", &ObservationSet::sizes)
        .def("select_class", &ObservationSet::select_class, py::arg("label"))
        .def("average_total", &ObservationSet::average_total)
        .def("default_series", &ObservationSet::default_series)
        .def("__eq__", [](const ObservationSet& a, const ObservationSet& b) { return a == b; });

    m.def("parse_observations", &parse_observations, py::arg("text"));
    m.def("serialize_observations", &serialize_observations, py::arg("observations"));

    py::class_<AggregateRow>(m, "AggregateRow")
        .def_readonly("size", &AggregateRow::size)
        .def_readonly("class_means", &AggregateRow::class_means)
        .def_readonly("overall_mean", &AggregateRow::overall_mean)
        .def_readonly("std_dev", &AggregateRow::std_dev)
        .def_readonly("replicate_count", &AggregateRow::replicate_count);
    m.def("aggregate", &aggregate, py::arg("observations"));

    py::class_<UniformWeights>(m, "UniformWeights").def(py::init<>());
    py::class_<ManualWeights>(m, "ManualWeights")
        .def(py::init([](std::vector<double> v) { return ManualWeights{std::move(v)}; }), py::arg("values"))
        .def_readonly("values", &ManualWeights::values);
    py::class_<InverseVarianceWeights>(m, "InverseVarianceWeights")
        .def(py::init([](double floor) { return InverseVarianceWeights{floor}; }), py::arg("floor") = 1e-4)
        .def_readonly("floor", &InverseVarianceWeights::floor);

    m.def(
        "materialize_weights",
        [](const ObservationSet& obs, const WeightScheme& scheme, bool per_replicate) {
            auto w = materialize_weights(obs, scheme, per_replicate);
            return py::make_tuple(w.values, w.warnings);
        },
        py::arg("observations"), py::arg("scheme"), py::arg("per_replicate") = false,
        "Returns (weights, warnings).");
    m.def(
        "flatten",
        [](const ObservationSet& obs, bool per_replicate) {
            auto p = flatten(obs, per_replicate);
            return py::make_tuple(p.sizes, p.accuracies);
        },
        py::arg("observations"), py::arg("per_replicate") = false);

    py::class_<FitOptions>(m, "FitOptions")
        .def(py::init<>())
        .def_readwrite("max_iterations", &FitOptions::max_iterations)
        .def_readwrite("relative_sse_tolerance", &FitOptions::relative_sse_tolerance)
        .def_readwrite("initial_damping", &FitOptions::initial_damping)
        .def_readwrite("damping_increase", &FitOptions::damping_increase)
        .def_readwrite("damping_decrease", &FitOptions::damping_decrease)
        .def_readwrite("initial_params", &FitOptions::initial_params);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("params", &FitResult::params)
        .def_readonly("residuals", &FitResult::residuals)
        .def_readonly("weighted_sse", &FitResult::weighted_sse)
        .def_readonly("iterations_used", &FitResult::iterations_used)
        .def_readonly("converged", &FitResult::converged)
        .def_readonly("condition_warning", &FitResult::condition_warning)
        .def_readonly("sse_history", &FitResult::sse_history);

    m.def(
        "weighted_sse",
        [](const CurveParams& p, std::vector<double> x, std::vector<double> t, std::vector<double> w) {
            return weighted_sse(p, make_points(std::move(x), std::move(t)), w);
        },
        py::arg("params"), py::arg("sizes"), py::arg("accuracies"), py::arg("weights"));
    m.def(
        "default_init",
        [](std::vector<double> x, std::vector<double> t) { return default_init(make_points(std::move(x), std::move(t))); },
        py::arg("sizes"), py::arg("accuracies"));
    m.def(
        "fit",
        [](std::vector<double> x, std::vector<double> t, std::vector<double> w, const FitOptions& o) {
            return fit(make_points(std::move(x), std::move(t)), w, o);
        },
        py::arg("sizes"), py::arg("accuracies"), py::arg("weights"), py::arg("options") = FitOptions{});
    m.def(
        "fit_observations",
        [](const ObservationSet& obs, const WeightScheme& scheme, const FitOptions& o, bool per_replicate) {
            return fit(obs, scheme, o, per_replicate);
        },
        py::arg("observations"), py::arg("scheme"), py::arg("options") = FitOptions{},
        py::arg("per_replicate") = false);
    m.def(
        "grid_search_fit",
        [](std::vector<double> x, std::vector<double> t, std::vector<double> w, std::pair<double, double> b1,
           std::pair<double, double> b2, int steps) {
            return grid_search_fit(make_points(std::move(x), std::move(t)), w, {b1.first, b1.second},
                                   {b2.first, b2.second}, steps);
        },
        py::arg("sizes"), py::arg("accuracies"), py::arg("weights"), py::arg("b1_range"), py::arg("b2_range"),
        py::arg("grid_steps") = 200);

    py::class_<SizePrediction>(m, "SizePrediction")
        .def_readonly("target_accuracy", &SizePrediction::target_accuracy)
        .def_readonly("required_size_real", &SizePrediction::required_size_real)
        .def_readonly("required_size", &SizePrediction::required_size)
        .def_readonly("interval", &SizePrediction::interval)
        .def_property_readonly("status", [](const SizePrediction& s) { return status_name(s.status); });

    py::class_<Interval>(m, "Interval").def_readonly("low", &Interval::low).def_readonly("high", &Interval::high);

    py::class_<BootstrapReport>(m, "BootstrapReport")
        .def_readonly("replicate_count", &BootstrapReport::replicate_count)
        .def_readonly("seed", &BootstrapReport::seed)
        .def_readonly("b1", &BootstrapReport::b1)
        .def_readonly("b2", &BootstrapReport::b2)
        .def_readonly("required_size_real", &BootstrapReport::required_size_real)
        .def_readonly("required_size", &BootstrapReport::required_size)
        .def_readonly("target", &BootstrapReport::target)
        .def_readonly("failed_refits", &BootstrapReport::failed_refits);

    m.def("predict_accuracy", &predict_accuracy, py::arg("fit"), py::arg("x"));
    m.def("required_size", &required_size, py::arg("fit"), py::arg("target"));
    m.def(
        "bootstrap",
        [](const ObservationSet& obs, const WeightScheme& scheme, const FitOptions& o, double target, int b,
           std::uint64_t seed, bool per_replicate, unsigned threads) {
            py::gil_scoped_release release;
            return bootstrap(obs, scheme, o, target, b, seed, BootstrapConfig{per_replicate, threads});
        },
        py::arg("observations"), py::arg("scheme"), py::arg("options"), py::arg("target"), py::arg("replicates"),
        py::arg("seed"), py::arg("per_replicate") = false, py::arg("threads") = 1u);
    m.def("sample_curve", &sample_curve, py::arg("fit"), py::arg("x_min"), py::arg("x_max"), py::arg("n_points"));

    py::class_<SynthSpec>(m, "SynthSpec")
        .def(py::init<>())
        .def_readwrite("truth", &SynthSpec::truth)
        .def_readwrite("sizes", &SynthSpec::sizes)
        .def_readwrite("replicates_per_size", &SynthSpec::replicates_per_size)
        .def_readwrite("noise_scale", &SynthSpec::noise_scale)
        .def_readwrite("noise_exponent", &SynthSpec::noise_exponent)
        .def_readwrite("seed", &SynthSpec::seed);

    py::class_<RecoverySummary>(m, "RecoverySummary")
        .def_readonly("errors", &RecoverySummary::errors)
        .def_readonly("median_b1_error", &RecoverySummary::median_b1_error)
        .def_readonly("median_b2_error", &RecoverySummary::median_b2_error)
        .def_readonly("mad_b1_error", &RecoverySummary::mad_b1_error)
        .def_readonly("mad_b2_error", &RecoverySummary::mad_b2_error)
        .def_readonly("median_abs_b1_error", &RecoverySummary::median_abs_b1_error)
        .def_readonly("median_abs_b2_error", &RecoverySummary::median_abs_b2_error)
        .def_readonly("failures", &RecoverySummary::failures);

    m.def("generate", &generate, py::arg("spec"));
    m.def("recovery_experiment", &recovery_experiment, py::arg("spec"), py::arg("scheme"), py::arg("options"),
          py::arg("trials"), py::arg("per_replicate") = false);
}
