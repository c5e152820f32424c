#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "curvecast/experiments.hpp"
#include "curvecast/predictor.hpp"
#include "curvecast/wnls_fit.hpp"

namespace curvecast {

/// Everything a CLI run knows about one fitted series.
struct Report {
    std::string series;
    std::string weight_scheme;
    DataPoints points;
    std::vector<double> weights;
    FitResult fit;
    AggregateTable observed;
    std::vector<std::pair<double, double>> predictions;
    std::optional<SizePrediction> required;
    std::optional<BootstrapReport> bootstrap;
    std::vector<std::string> warnings;
};

/// Stable-key JSON document; see schemas/report.schema.json.
nlohmann::ordered_json to_json(const Report& report);

/// Aligned plain-text rendering. `color` adds ANSI bold/dim styling.
std::string render_table(const Report& report, bool color);

/// Self-contained 800x600 SVG: observed means with std whiskers, the fitted
/// curve on a log-x axis, and the required-size marker when present.
std::string render_svg(const Report& report);

} // namespace curvecast
