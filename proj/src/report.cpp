#include "curvecast/report.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

namespace curvecast {

namespace {

const char* status_name(SizeStatus s) { return s == SizeStatus::ok ? "ok" : "sub-unit-size"; }

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

} // namespace

nlohmann::ordered_json to_json(const Report& report) {
    using json = nlohmann::ordered_json;
    json doc;
    doc["series"] = report.series;
    doc["weight_scheme"] = report.weight_scheme;
    doc["params"] = {{"b1", report.fit.params.b1()}, {"b2", report.fit.params.b2()}};
    doc["weighted_sse"] = report.fit.weighted_sse;
    doc["converged"] = report.fit.converged;
    doc["iterations"] = report.fit.iterations_used;
    doc["condition_warning"] = report.fit.condition_warning;
    doc["residuals"] = report.fit.residuals;

    json points = json::array();
    for (std::size_t p = 0; p < report.points.count(); ++p) {
        points.push_back({{"x", report.points.sizes[p]},
                          {"observed", report.points.accuracies[p]},
                          {"fitted", report.points.accuracies[p] - report.fit.residuals[p]},
                          {"weight", report.weights[p]}});
    }
    doc["points"] = std::move(points);

    json predictions = json::array();
    for (const auto& [x, acc] : report.predictions) predictions.push_back({{"x", x}, {"accuracy", acc}});
    doc["predictions"] = std::move(predictions);

    if (report.required) {
        const auto& r = *report.required;
        json req = {{"target", r.target_accuracy},
                    {"real", r.required_size_real},
                    {"int", r.required_size},
                    {"status", status_name(r.status)}};
        if (r.interval) {
            req["interval"] = {r.interval->first, r.interval->second};
            req["outside_interval"] = r.outside_interval;
        }
        doc["required_size"] = std::move(req);
    }
    if (report.bootstrap) {
        const auto& b = *report.bootstrap;
        doc["bootstrap"] = {
            {"B", b.replicate_count},
            {"seed", b.seed},
            {"failed_refits", b.failed_refits},
            {"intervals",
             {{"b1", {b.b1.low, b.b1.high}},
              {"b2", {b.b2.low, b.b2.high}},
              {"required_size_real", {b.required_size_real.low, b.required_size_real.high}},
              {"required_size", {b.required_size.first, b.required_size.second}}}}};
    }
    doc["warnings"] = report.warnings;
    return doc;
}

std::string render_table(const Report& report, bool color) {
    const std::string bold = color ? "\x1b[1m" : "";
    const std::string dim = color ? "\x1b[2m" : "";
    const std::string reset = color ? "\x1b[0m" : "";
    std::ostringstream os;

    os << bold << "series" << reset << "          " << report.series << '\n';
    os << bold << "weights" << reset << "         " << report.weight_scheme << '\n';
    os << bold << "b1" << reset << "              " << std::setprecision(10) << report.fit.params.b1() << '\n';
    os << bold << "b2" << reset << "              " << std::setprecision(10) << report.fit.params.b2() << '\n';
    os << bold << "weighted SSE" << reset << "    " << std::setprecision(10) << report.fit.weighted_sse << '\n';
    os << bold << "converged" << reset << "       " << (report.fit.converged ? "yes" : "no") << " ("
       << report.fit.iterations_used << " iterations"
       << (report.fit.condition_warning ? ", ill-conditioned steps seen" : "") << ")\n\n";

    os << bold << std::right << std::setw(10) << "size" << std::setw(12) << "observed" << std::setw(12) << "fitted"
       << std::setw(12) << "residual" << std::setw(12) << "weight" << reset << '\n';
    for (std::size_t p = 0; p < report.points.count(); ++p) {
        const double r = report.fit.residuals[p];
        os << std::setw(10) << fixed(report.points.sizes[p], 0) << std::setw(12)
           << fixed(report.points.accuracies[p], 4) << std::setw(12) << fixed(report.points.accuracies[p] - r, 4)
           << std::setw(12) << fixed(r, 4) << std::setw(12) << std::setprecision(6) << std::defaultfloat
           << report.weights[p] << '\n';
    }

    if (!report.predictions.empty()) {
        os << '\n' << bold << std::setw(10) << "size" << std::setw(12) << "predicted" << reset << '\n';
        for (const auto& [x, acc] : report.predictions) {
            os << std::setw(10) << std::defaultfloat << std::setprecision(10) << x << std::setw(12) << fixed(acc, 4)
               << '\n';
        }
    }
    if (report.required) {
        const auto& r = *report.required;
        os << '\n'
           << bold << "required size" << reset << "   " << r.required_size << " for " << r.target_accuracy
           << "% (exact " << std::setprecision(10) << std::defaultfloat << r.required_size_real << ")";
        if (r.interval) os << ", 95% interval [" << r.interval->first << ", " << r.interval->second << "]";
        if (r.status == SizeStatus::sub_unit_size) os << " " << dim << "[sub-unit size]" << reset;
        os << '\n';
    }
    if (report.bootstrap) {
        const auto& b = *report.bootstrap;
        os << bold << "bootstrap" << reset << "       B=" << b.replicate_count << " seed=" << b.seed
           << " failed=" << b.failed_refits << '\n'
           << "  b1 in [" << b.b1.low << ", " << b.b1.high << "]\n"
           << "  b2 in [" << b.b2.low << ", " << b.b2.high << "]\n";
    }
    for (const auto& w : report.warnings) os << dim << "warning: " << w << reset << '\n';
    return os.str();
}

} // namespace curvecast
