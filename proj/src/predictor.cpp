#include "curvecast/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "curvecast/errors.hpp"
#include "curvecast/random.hpp"
#include "stats.hpp"

namespace curvecast {

double predict_accuracy(const FitResult& fit, double x) {
    return std::clamp(eval(fit.params, x), 0.0, kAsymptote);
}

SizePrediction required_size(const FitResult& fit, double target) {
    const auto inversion = invert_for_size(fit.params, target);
    SizePrediction out;
    out.target_accuracy = target;
    out.required_size_real = inversion.size;
    out.required_size = static_cast<std::int64_t>(std::ceil(inversion.size));
    out.status = inversion.status;
    return out;
}

namespace {

struct RoundResult {
    bool ok = false;
    double b1 = 0.0, b2 = 0.0, size = 0.0;
};

ObservationSet resample(const ObservationSet& obs, Rng& rng) {
    std::vector<ObservationGroup> groups;
    for (const auto& g : obs.groups()) {
        ObservationGroup r;
        r.size = g.size;
        r.class_label = g.class_label;
        for (std::size_t i = 0; i < g.replicates.size(); ++i) {
            r.replicates.push_back(g.replicates[rng.below(g.replicates.size())]);
        }
        groups.push_back(std::move(r));
    }
    return ObservationSet(std::move(groups));
}

RoundResult run_round(const ObservationSet& obs, const WeightScheme& scheme, const FitOptions& options,
                      double target, bool per_replicate, std::uint64_t stream_seed) {
    Rng rng(stream_seed);
    try {
        const auto sample = resample(obs, rng);
        const auto refit = fit(sample, scheme, options, per_replicate);
        if (!refit.converged) return {};
        const auto size = invert_for_size(refit.params, target).size;
        if (!std::isfinite(size)) return {};
        return {true, refit.params.b1(), refit.params.b2(), size};
    } catch (const Error&) {
        return {};
    }
}

Interval percentile_interval(const std::vector<double>& values) {
    return {detail::quantile(values, 0.025), detail::quantile(values, 0.975)};
}

} // namespace

BootstrapReport bootstrap(const ObservationSet& obs, const WeightScheme& scheme, const FitOptions& options,
                          double target, int replicates, std::uint64_t seed, const BootstrapConfig& config) {
    if (replicates < 1) throw ContractError("bootstrap needs at least one replicate");
    if (!(target < kAsymptote)) {
        throw UnreachableTargetError("target " + std::to_string(target) + " is not below the 100% asymptote");
    }
    options.validate();
    if (!obs.is_single_series()) {
        throw ContractError("bootstrap needs a single series; select a class or AverageTotal first");
    }

    std::vector<RoundResult> rounds(static_cast<std::size_t>(replicates));
    const auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t b = begin; b < end; ++b) {
            rounds[b] = run_round(obs, scheme, options, target, config.per_replicate, derive_seed(seed, b));
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(config.threads, 1, rounds.size());
    if (workers == 1) {
        run_range(0, rounds.size());
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (rounds.size() + workers - 1) / workers;
        for (std::size_t begin = 0; begin < rounds.size(); begin += chunk) {
            pool.emplace_back(run_range, begin, std::min(begin + chunk, rounds.size()));
        }
    }

    std::vector<double> b1, b2, sizes;
    int failed = 0;
    for (const auto& r : rounds) {
        if (!r.ok) {
            ++failed;
            continue;
        }
        b1.push_back(r.b1);
        b2.push_back(r.b2);
        sizes.push_back(r.size);
    }
    if (b1.empty()) {
        throw BootstrapFailure("all " + std::to_string(replicates) + " bootstrap refits failed");
    }

    BootstrapReport report;
    report.replicate_count = replicates;
    report.seed = seed;
    report.target = target;
    report.failed_refits = failed;
    report.b1 = percentile_interval(b1);
    report.b2 = percentile_interval(b2);
    report.required_size_real = percentile_interval(sizes);
    report.required_size = {static_cast<std::int64_t>(std::ceil(report.required_size_real.low)),
                            static_cast<std::int64_t>(std::ceil(report.required_size_real.high))};
    return report;
}

void attach_interval(SizePrediction& prediction, const BootstrapReport& report) {
    prediction.interval = report.required_size;
    prediction.outside_interval = prediction.required_size < report.required_size.first ||
                                  prediction.required_size > report.required_size.second;
}

std::vector<std::pair<double, double>> sample_curve(const FitResult& fit, double x_min, double x_max,
                                                    int n_points) {
    if (!(x_min > 0.0) || !(x_max > x_min) || !std::isfinite(x_max)) {
        throw DomainError("curve range must satisfy 0 < x_min < x_max");
    }
    if (n_points < 2) throw DomainError("curve sampling needs at least 2 points");
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(n_points));
    const double lo = std::log(x_min);
    const double hi = std::log(x_max);
    for (int i = 0; i < n_points; ++i) {
        double x;
        if (i == 0) {
            x = x_min;
        } else if (i == n_points - 1) {
            x = x_max;
        } else {
            x = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_points - 1));
        }
        out.emplace_back(x, predict_accuracy(fit, x));
    }
    return out;
}

} // namespace curvecast
