#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "curvecast/curve_model.hpp"
#include "curvecast/experiments.hpp"
#include "curvecast/wnls_fit.hpp"

namespace curvecast {

/// Fitted curve value clamped to [0, 100].
double predict_accuracy(const FitResult& fit, double x);

struct Interval {
    double low;
    double high;

    friend bool operator==(const Interval&, const Interval&) = default;
};

struct SizePrediction {
    double target_accuracy = 0.0;
    double required_size_real = 0.0;
    std::int64_t required_size = 0; ///< ceil(required_size_real)
    std::optional<std::pair<std::int64_t, std::int64_t>> interval;
    SizeStatus status = SizeStatus::ok;
    /// Set when a bootstrap interval is attached and excludes the point estimate.
    bool outside_interval = false;
};

SizePrediction required_size(const FitResult& fit, double target);

struct BootstrapConfig {
    bool per_replicate = false;
    /// Worker threads; results do not depend on this value.
    unsigned threads = 1;
};

struct BootstrapReport {
    int replicate_count = 0;
    std::uint64_t seed = 0;
    Interval b1;
    Interval b2;
    Interval required_size_real;
    std::pair<std::int64_t, std::int64_t> required_size; ///< ceilings of required_size_real
    double target = 0.0;
    int failed_refits = 0;

    friend bool operator==(const BootstrapReport&, const BootstrapReport&) = default;
};

/// Percentile bootstrap (2.5 / 97.5) over `replicates` rounds. Each round
/// resamples replicates with replacement inside every size group using the
/// stream derive_seed(seed, round), then refits. Failed or non-converged
/// refits are counted and skipped.
BootstrapReport bootstrap(const ObservationSet& obs, const WeightScheme& scheme, const FitOptions& options,
                          double target, int replicates, std::uint64_t seed, const BootstrapConfig& config = {});

/// Copies the bootstrap size interval onto `prediction`, flagging a point
/// estimate that falls outside it.
void attach_interval(SizePrediction& prediction, const BootstrapReport& report);

/// `n_points` log-spaced sizes over [x_min, x_max], both ends included.
std::vector<std::pair<double, double>> sample_curve(const FitResult& fit, double x_min, double x_max,
                                                    int n_points);

} // namespace curvecast
