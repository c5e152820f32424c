#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "curvecast/curve_model.hpp"
#include "curvecast/experiments.hpp"
#include "curvecast/wnls_fit.hpp"

namespace curvecast {

/// Ground truth plus a heteroscedastic Gaussian noise model with standard
/// deviation sigma(x) = noise_scale * x^(-noise_exponent) percent.
struct SynthSpec {
    CurveParams truth{-150.0, -0.7};
    std::vector<std::int64_t> sizes{5, 10, 20, 50, 100, 200};
    int replicates_per_size = 10;
    double noise_scale = 0.0;
    double noise_exponent = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
    double noise_sd(double x) const;
};

/// Draws sizes ascending, replicates ascending within a size; each value is
/// eval(truth, x) + sigma(x) * N(0,1), clamped into [0, 100].
ObservationSet generate(const SynthSpec& spec);

struct RecoverySummary {
    std::vector<std::pair<double, double>> errors; ///< (b1_hat - b1, b2_hat - b2) per successful trial
    double median_b1_error = 0.0;
    double median_b2_error = 0.0;
    double mad_b1_error = 0.0; ///< median absolute deviation about the median
    double mad_b2_error = 0.0;
    double median_abs_b1_error = 0.0;
    double median_abs_b2_error = 0.0;
    int failures = 0;
};

/// Trial t uses seed derive_seed(spec.seed, t). Fit errors and non-converged
/// fits count as failures and never abort the batch.
RecoverySummary recovery_experiment(const SynthSpec& spec, const WeightScheme& scheme,
                                    const FitOptions& options, int trials, bool per_replicate = false);

} // namespace curvecast
