#include <algorithm>
#include <cmath>
#include <sstream>

#include "curvecast/report.hpp"
#include "number_format.hpp"

namespace curvecast {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 30.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 70.0;

struct Frame {
    double log_lo;
    double log_hi;

    double px(double x) const {
        return kLeft + (std::log10(x) - log_lo) / (log_hi - log_lo) * (kWidth - kLeft - kRight);
    }
    static double py(double y) { return kTop + (100.0 - y) / 100.0 * (kHeight - kTop - kBottom); }
};

std::string f2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

std::string render_svg(const Report& report) {
    double x_min = *std::min_element(report.points.sizes.begin(), report.points.sizes.end());
    double x_max = *std::max_element(report.points.sizes.begin(), report.points.sizes.end());
    if (report.required && report.required->required_size_real > 0.0) {
        x_min = std::min(x_min, report.required->required_size_real);
        x_max = std::max(x_max, report.required->required_size_real);
    }
    for (const auto& [x, acc] : report.predictions) {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
    }
    Frame frame{std::floor(std::log10(x_min)), std::ceil(std::log10(x_max))};
    if (frame.log_hi <= frame.log_lo) frame.log_hi = frame.log_lo + 1.0;
    const double plot_lo = std::pow(10.0, frame.log_lo);
    const double plot_hi = std::pow(10.0, frame.log_hi);

    std::ostringstream os;
    os << R"(<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" viewBox="0 0 800 600" )"
       << R"(font-family="sans-serif" font-size="12">)" << '\n';
    os << R"(  <rect width="800" height="600" fill="white"/>)" << '\n';
    os << "  <text x=\"400\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">Learning curve: "
       << report.series << " (b1=" << f2(report.fit.params.b1()) << ", b2=" << f2(report.fit.params.b2())
       << ")</text>\n";

    // Axes, gridlines and ticks.
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = Frame::py(0.0), y1 = Frame::py(100.0);
    os << "  <g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
    os << "    <line x1=\"" << f2(x0) << "\" y1=\"" << f2(y0) << "\" x2=\"" << f2(x1) << "\" y2=\"" << f2(y0)
       << "\"/>\n";
    os << "    <line x1=\"" << f2(x0) << "\" y1=\"" << f2(y0) << "\" x2=\"" << f2(x0) << "\" y2=\"" << f2(y1)
       << "\"/>\n";
    os << "  </g>\n  <g class=\"ticks\" fill=\"black\">\n";
    for (int d = static_cast<int>(frame.log_lo); d <= static_cast<int>(frame.log_hi); ++d) {
        const double x = std::pow(10.0, d);
        const double px = frame.px(x);
        os << "    <line x1=\"" << f2(px) << "\" y1=\"" << f2(y0) << "\" x2=\"" << f2(px) << "\" y2=\"" << f2(y1)
           << "\" stroke=\"#dddddd\"/>\n";
        os << "    <text x=\"" << f2(px) << "\" y=\"" << f2(y0 + 18) << "\" text-anchor=\"middle\">"
           << detail::shortest(x) << "</text>\n";
    }
    for (int y = 0; y <= 100; y += 20) {
        const double py = Frame::py(y);
        os << "    <line x1=\"" << f2(x0) << "\" y1=\"" << f2(py) << "\" x2=\"" << f2(x1) << "\" y2=\"" << f2(py)
           << "\" stroke=\"#dddddd\"/>\n";
        os << "    <text x=\"" << f2(x0 - 8) << "\" y=\"" << f2(py + 4) << "\" text-anchor=\"end\">" << y
           << "</text>\n";
    }
    os << "    <text x=\"" << f2((x0 + x1) / 2) << "\" y=\"" << f2(kHeight - 20)
       << "\" text-anchor=\"middle\">training size per class (log scale)</text>\n";
    os << "    <text x=\"20\" y=\"" << f2((y0 + y1) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
       << f2((y0 + y1) / 2) << ")\">accuracy (%)</text>\n";
    os << "  </g>\n";

    // Fitted curve.
    const auto curve = sample_curve(report.fit, plot_lo, plot_hi, 200);
    os << "  <polyline class=\"fitted-curve\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (i) os << ' ';
        os << f2(frame.px(curve[i].first)) << ',' << f2(Frame::py(curve[i].second));
    }
    os << "\"/>\n";

    // Observations: per-size mean with +/- one standard deviation.
    os << "  <g class=\"observations\">\n";
    for (const auto& row : report.observed) {
        const double x = static_cast<double>(row.size);
        const double px = frame.px(x);
        if (row.replicate_count > 1 && row.std_dev > 0.0) {
            const double lo = std::clamp(row.overall_mean - row.std_dev, 0.0, 100.0);
            const double hi = std::clamp(row.overall_mean + row.std_dev, 0.0, 100.0);
            os << "    <line class=\"whisker\" x1=\"" << f2(px) << "\" y1=\"" << f2(Frame::py(lo)) << "\" x2=\""
               << f2(px) << "\" y2=\"" << f2(Frame::py(hi)) << "\" stroke=\"#d62728\"/>\n";
        }
        os << "    <circle class=\"observed\" data-x=\"" << detail::shortest(x) << "\" data-y=\""
           << detail::shortest(row.overall_mean) << "\" cx=\"" << f2(px) << "\" cy=\""
           << f2(Frame::py(row.overall_mean)) << "\" r=\"4\" fill=\"#d62728\"/>\n";
    }
    os << "  </g>\n";

    if (report.required) {
        const auto& r = *report.required;
        const double px = frame.px(r.required_size_real);
        const double py = Frame::py(r.target_accuracy);
        os << "  <g class=\"target-marker\" data-x=\"" << detail::shortest(r.required_size_real)
           << "\" data-target=\"" << detail::shortest(r.target_accuracy) << "\" stroke=\"#2ca02c\">\n";
        os << "    <line x1=\"" << f2(px) << "\" y1=\"" << f2(y0) << "\" x2=\"" << f2(px) << "\" y2=\"" << f2(py)
           << "\" stroke-dasharray=\"4 3\"/>\n";
        os << "    <circle cx=\"" << f2(px) << "\" cy=\"" << f2(py) << "\" r=\"5\" fill=\"none\"/>\n";
        os << "    <text x=\"" << f2(px + 6) << "\" y=\"" << f2(py + 16) << "\" fill=\"#2ca02c\" stroke=\"none\">"
           << r.required_size << " for " << detail::shortest(r.target_accuracy) << "%</text>\n";
        os << "  </g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace curvecast
