#include "curvecast/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "curvecast/errors.hpp"
#include "curvecast/experiments.hpp"
#include "curvecast/predictor.hpp"
#include "curvecast/report.hpp"
#include "curvecast/synthlab.hpp"
#include "curvecast/wnls_fit.hpp"

namespace curvecast::cli {

namespace {

struct FitFlags {
    std::string input;
    std::string weights;
    double variance_floor = 1e-4;
    bool per_replicate = false;
    std::string series;
    std::string format = "json";
    FitOptions options;
};

struct PredictFlags {
    std::vector<double> at;
    std::optional<double> target;
    int bootstrap = 0;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string svg;
};

struct SimulateFlags {
    double b1 = 0.0;
    double b2 = 0.0;
    std::vector<std::int64_t> sizes{5, 10, 20, 50, 100, 200};
    int reps = 10;
    double noise_a = 0.0;
    double noise_c = 0.5;
    std::uint64_t seed = 0;
    std::string output;
};

void add_fit_flags(CLI::App& cmd, FitFlags& f) {
    cmd.add_option("input", f.input, "Observation CSV (size,accuracy[,class][,repetition])")->required();
    cmd.add_option("--weights", f.weights,
                   "Weight scheme: 'uniform', 'inverse-variance', or one positive value per size "
                   "in ascending size order, e.g. 1,1,1,1,100,150. Default: inverse-variance when "
                   "replicates exist, uniform otherwise");
    cmd.add_option("--variance-floor", f.variance_floor, "Variance floor for inverse-variance weights")
        ->check(CLI::PositiveNumber);
    cmd.add_flag("--per-replicate", f.per_replicate, "Fit every replicate instead of per-size means");
    cmd.add_option("--class", f.series, "Class to fit, or AverageTotal (default for multi-class input)");
    cmd.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "table"}));
    cmd.add_option("--max-iter", f.options.max_iterations, "LM iteration budget")->check(CLI::PositiveNumber);
    cmd.add_option("--tolerance", f.options.relative_sse_tolerance, "Relative SSE decrease treated as converged")
        ->check(CLI::PositiveNumber);
}

void add_bootstrap_flags(CLI::App& cmd, PredictFlags& p) {
    cmd.add_option("--target", p.target, "Target accuracy (percent) to size for");
    cmd.add_option("--bootstrap", p.bootstrap, "Bootstrap replicate count (0 disables)")
        ->check(CLI::NonNegativeNumber);
    cmd.add_option("--seed", p.seed, "Bootstrap seed");
    cmd.add_option("--threads", p.threads, "Bootstrap worker threads")->check(CLI::PositiveNumber);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ContractError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Opens for writing up front so a bad path fails before any fitting.
std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ContractError("cannot write '" + path + "'");
    return out;
}

WeightScheme parse_scheme(const FitFlags& f, const ObservationSet& series) {
    if (f.weights.empty()) {
        auto scheme = default_weight_scheme(series);
        if (auto* iv = std::get_if<InverseVarianceWeights>(&scheme)) iv->floor = f.variance_floor;
        return scheme;
    }
    if (f.weights == "uniform") return UniformWeights{};
    if (f.weights == "inverse-variance") return InverseVarianceWeights{f.variance_floor};
    ManualWeights manual;
    std::stringstream ss(f.weights);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw ContractError("malformed weight '" + item + "'");
        manual.values.push_back(v);
    }
    return manual;
}

Report build_report(const FitFlags& f, ObservationSet& series_out) {
    const auto obs = parse_observations(read_file(f.input));
    series_out = f.series.empty() ? obs.default_series() : obs.series(f.series);
    const auto scheme = parse_scheme(f, series_out);

    Report report;
    if (!f.series.empty()) {
        report.series = f.series;
    } else if (series_out.has_classes()) {
        report.series = *series_out.groups().front().class_label;
    } else {
        report.series = "all";
    }
    report.weight_scheme = describe(scheme);
    report.points = flatten(series_out, f.per_replicate);
    auto weights = materialize_weights(series_out, scheme, f.per_replicate);
    report.weights = weights.values;
    report.warnings = std::move(weights.warnings);
    report.fit = fit(report.points, report.weights, f.options);
    report.observed = aggregate(series_out);
    if (!report.fit.converged) {
        report.warnings.push_back("fit did not converge within " + std::to_string(f.options.max_iterations) +
                                  " iterations");
    }
    return report;
}

void emit(const Report& report, const std::string& format, std::ostream& out, bool color) {
    if (format == "table") {
        out << render_table(report, color);
    } else {
        out << to_json(report).dump(2) << '\n';
    }
}

void add_predictions(Report& report, const FitFlags& f, const PredictFlags& p, const ObservationSet& series) {
    for (double x : p.at) report.predictions.emplace_back(x, predict_accuracy(report.fit, x));
    if (!p.target) return;
    report.required = required_size(report.fit, *p.target);
    if (report.required->status == SizeStatus::sub_unit_size) {
        report.warnings.push_back("required size is below one sample");
    }
    if (p.bootstrap > 0) {
        BootstrapConfig config{f.per_replicate, p.threads};
        report.bootstrap =
            bootstrap(series, parse_scheme(f, series), f.options, *p.target, p.bootstrap, p.seed, config);
        attach_interval(*report.required, *report.bootstrap);
        if (report.required->outside_interval) {
            report.warnings.push_back("point estimate lies outside the bootstrap interval");
        }
    }
}

int status_of(const Report& report) { return report.fit.converged ? kOk : kNotConverged; }

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color) {
    CLI::App app{"Fit inverse power law learning curves and size training sets", "curvecast"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "curvecast 0.1.0");

    FitFlags fit_flags;
    PredictFlags predict_flags;
    SimulateFlags sim;

    auto* fit_cmd = app.add_subcommand("fit", "Fit the learning curve and print parameters and residuals");
    add_fit_flags(*fit_cmd, fit_flags);

    auto* predict_cmd = app.add_subcommand("predict", "Predict accuracy at sizes and/or the size for a target");
    add_fit_flags(*predict_cmd, fit_flags);
    add_bootstrap_flags(*predict_cmd, predict_flags);
    predict_cmd->add_option("--at", predict_flags.at, "Sizes to predict accuracy at (comma separated)")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);

    auto* report_cmd = app.add_subcommand("report", "Write an SVG plot of the fit and print the JSON report");
    add_fit_flags(*report_cmd, fit_flags);
    add_bootstrap_flags(*report_cmd, predict_flags);
    report_cmd->add_option("--at", predict_flags.at, "Sizes to predict accuracy at (comma separated)")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    report_cmd->add_option("--svg", predict_flags.svg, "Output SVG path")->required();

    auto* sim_cmd = app.add_subcommand("simulate", "Generate synthetic replicated observations as CSV");
    sim_cmd->add_option("--b1", sim.b1, "True b1 (<= 0)")->required();
    sim_cmd->add_option("--b2", sim.b2, "True b2 (< 0)")->required();
    sim_cmd->add_option("--sizes", sim.sizes, "Training sizes")->delimiter(',');
    sim_cmd->add_option("--reps", sim.reps, "Replicates per size")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--noise-a", sim.noise_a, "Noise scale a in sigma(x) = a * x^-c");
    sim_cmd->add_option("--noise-c", sim.noise_c, "Noise exponent c in sigma(x) = a * x^-c");
    sim_cmd->add_option("--seed", sim.seed, "Generator seed");
    sim_cmd->add_option("--output,-o", sim.output, "Write CSV here instead of stdout");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*fit_cmd) {
            ObservationSet series;
            const auto report = build_report(fit_flags, series);
            emit(report, fit_flags.format, out, color);
            return status_of(report);
        }
        if (*predict_cmd) {
            if (predict_flags.at.empty() && !predict_flags.target) {
                err << "curvecast predict: give --at and/or --target\n";
                return kInputError;
            }
            if (predict_flags.bootstrap > 0 && !predict_flags.target) {
                err << "curvecast predict: --bootstrap needs --target\n";
                return kInputError;
            }
            ObservationSet series;
            auto report = build_report(fit_flags, series);
            add_predictions(report, fit_flags, predict_flags, series);
            emit(report, fit_flags.format, out, color);
            return status_of(report);
        }
        if (*report_cmd) {
            auto svg_out = open_output(predict_flags.svg);
            ObservationSet series;
            auto report = build_report(fit_flags, series);
            add_predictions(report, fit_flags, predict_flags, series);
            svg_out << render_svg(report);
            if (!svg_out.flush()) throw ContractError("failed writing '" + predict_flags.svg + "'");
            emit(report, fit_flags.format, out, color);
            return status_of(report);
        }
        if (*sim_cmd) {
            SynthSpec spec;
            spec.truth = CurveParams(sim.b1, sim.b2);
            spec.sizes = sim.sizes;
            spec.replicates_per_size = sim.reps;
            spec.noise_scale = sim.noise_a;
            spec.noise_exponent = sim.noise_c;
            spec.seed = sim.seed;
            spec.validate();
            const auto csv = serialize_observations(generate(spec));
            if (sim.output.empty()) {
                out << csv;
            } else {
                auto file = open_output(sim.output);
                file << csv;
                if (!file.flush()) throw ContractError("failed writing '" + sim.output + "'");
            }
            return kOk;
        }
    } catch (const UnreachableTargetError& e) {
        err << "curvecast: unreachable target: " << e.what() << '\n';
        return kUnreachableTarget;
    } catch (const FlatCurveError& e) {
        err << "curvecast: unreachable target: " << e.what() << '\n';
        return kUnreachableTarget;
    } catch (const Error& e) {
        err << "curvecast: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

} // namespace curvecast::cli
