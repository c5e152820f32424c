#include "curvecast/synthlab.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "curvecast/errors.hpp"
#include "curvecast/random.hpp"
#include "stats.hpp"

namespace curvecast {

void SynthSpec::validate() const {
    if (sizes.empty()) throw ContractError("synthetic setup needs at least one size");
    std::set<std::int64_t> seen;
    for (auto s : sizes) {
        if (s <= 0) throw ContractError("synthetic sizes must be positive");
        if (!seen.insert(s).second) throw ContractError("synthetic sizes must be unique");
    }
    if (replicates_per_size <= 0) throw ContractError("replicates_per_size must be positive");
    if (!std::isfinite(noise_scale) || noise_scale < 0.0) throw ContractError("noise scale must be >= 0");
    if (!std::isfinite(noise_exponent) || noise_exponent < 0.0) {
        throw ContractError("noise exponent must be >= 0");
    }
}

double SynthSpec::noise_sd(double x) const { return noise_scale * std::pow(x, -noise_exponent); }

ObservationSet generate(const SynthSpec& spec) {
    spec.validate();
    auto sizes = spec.sizes;
    std::sort(sizes.begin(), sizes.end());
    Rng rng(spec.seed);
    std::vector<ObservationGroup> groups;
    for (auto size : sizes) {
        const double x = static_cast<double>(size);
        const double clean = eval(spec.truth, x);
        const double sd = spec.noise_sd(x);
        ObservationGroup g;
        g.size = size;
        for (int r = 0; r < spec.replicates_per_size; ++r) {
            // Always draw, so the stream layout does not depend on the noise level.
            const double z = rng.normal();
            g.replicates.push_back(std::clamp(clean + sd * z, 0.0, 100.0));
        }
        groups.push_back(std::move(g));
    }
    return ObservationSet(std::move(groups));
}

RecoverySummary recovery_experiment(const SynthSpec& spec, const WeightScheme& scheme,
                                    const FitOptions& options, int trials, bool per_replicate) {
    if (trials < 1) throw ContractError("trials must be >= 1");
    spec.validate();
    RecoverySummary summary;
    for (int t = 0; t < trials; ++t) {
        auto trial_spec = spec;
        trial_spec.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(t));
        try {
            const auto obs = generate(trial_spec);
            const auto result = fit(obs, scheme, options, per_replicate);
            if (!result.converged) {
                ++summary.failures;
                continue;
            }
            summary.errors.emplace_back(result.params.b1() - spec.truth.b1(),
                                        result.params.b2() - spec.truth.b2());
        } catch (const Error&) {
            ++summary.failures;
        }
    }
    if (summary.errors.empty()) return summary;

    std::vector<double> e1, e2;
    for (const auto& [a, b] : summary.errors) {
        e1.push_back(a);
        e2.push_back(b);
    }
    auto abs_all = [](std::vector<double> v) {
        for (auto& x : v) x = std::abs(x);
        return v;
    };
    auto mad = [](const std::vector<double>& v, double centre) {
        std::vector<double> dev;
        for (double x : v) dev.push_back(std::abs(x - centre));
        return detail::median(dev);
    };
    summary.median_b1_error = detail::median(e1);
    summary.median_b2_error = detail::median(e2);
    summary.mad_b1_error = mad(e1, summary.median_b1_error);
    summary.mad_b2_error = mad(e2, summary.median_b2_error);
    summary.median_abs_b1_error = detail::median(abs_all(e1));
    summary.median_abs_b2_error = detail::median(abs_all(e2));
    return summary;
}

} // namespace curvecast
