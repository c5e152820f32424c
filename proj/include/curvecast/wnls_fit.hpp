#pragma once

#include <optional>
#include <span>
#include <vector>

#include "curvecast/curve_model.hpp"
#include "curvecast/experiments.hpp"

namespace curvecast {

struct FitOptions {
    int max_iterations = 500;
    double relative_sse_tolerance = 1e-10;
    double initial_damping = 1e-3;
    double damping_increase = 10.0;
    double damping_decrease = 0.1;
    std::optional<CurveParams> initial_params;

    /// Throws ContractError on nonpositive fields or a damping schedule that
    /// does not straddle 1.
    void validate() const;
};

struct FitResult {
    CurveParams params{-1.0, -1.0};
    std::vector<double> residuals; ///< t_p - y(x_p), accuracy points
    double weighted_sse = 0.0;
    int iterations_used = 0;
    bool converged = false;
    bool condition_warning = false;
    /// Weighted SSE at the start point followed by every accepted step.
    std::vector<double> sse_history;
};

/// E(b) = sum_p w_p (t_p - y(x_p))^2.
double weighted_sse(const CurveParams& params, const DataPoints& points, std::span<const double> weights);

/// Log-log least squares on ln(100 - mean) = ln(-b1) + b2 ln(x), skipping
/// sizes whose mean reaches 100.
CurveParams default_init(const DataPoints& points);

/// Levenberg-Marquardt over theta = (ln(-b1), ln(-b2)) so every iterate
/// keeps b1 < 0 and b2 < 0. Damping scales the diagonal of J'WJ.
FitResult fit(const DataPoints& points, std::span<const double> weights, const FitOptions& options = {});

/// Convenience: flatten, materialize weights and fit.
FitResult fit(const ObservationSet& obs, const WeightScheme& scheme, const FitOptions& options = {},
              bool per_replicate = false);

struct ParamRange {
    double low;  ///< most negative end
    double high; ///< closest to zero, still < 0 (b1 may reach 0 only if low does too)
};

/// Brute-force oracle: log-spaced grid over |b1| x |b2| followed by a zooming
/// local grid around the best cell. Independent of the LM path.
FitResult grid_search_fit(const DataPoints& points, std::span<const double> weights, ParamRange b1_range,
                          ParamRange b2_range, int grid_steps);

} // namespace curvecast
