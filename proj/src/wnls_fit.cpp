#include "curvecast/wnls_fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "curvecast/errors.hpp"

namespace curvecast {

namespace {

void check_inputs(const DataPoints& points, std::span<const double> weights) {
    if (points.sizes.size() != points.accuracies.size()) {
        throw ContractError("sizes and accuracies differ in length");
    }
    if (weights.size() != points.count()) {
        throw ContractError("weight count " + std::to_string(weights.size()) + " does not match " +
                            std::to_string(points.count()) + " observations");
    }
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw ContractError("weights must be positive and finite, got " + std::to_string(w));
        }
    }
    for (double x : points.sizes) {
        if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("training sizes must be positive");
    }
}

std::size_t distinct_sizes(const DataPoints& points) {
    auto xs = points.sizes;
    std::sort(xs.begin(), xs.end());
    return static_cast<std::size_t>(std::unique(xs.begin(), xs.end()) - xs.begin());
}

// b = -exp(theta)
CurveParams from_theta(double t1, double t2) { return CurveParams(-std::exp(t1), -std::exp(t2)); }

double sse_unchecked(double b1, double b2, const DataPoints& points, std::span<const double> weights) {
    double sse = 0.0;
    for (std::size_t p = 0; p < points.count(); ++p) {
        const double r = points.accuracies[p] - (kAsymptote + b1 * std::pow(points.sizes[p], b2));
        sse += weights[p] * r * r;
    }
    return sse;
}

FitResult finish(const CurveParams& params, const DataPoints& points, std::span<const double> weights) {
    FitResult out;
    out.params = params;
    out.residuals.resize(points.count());
    for (std::size_t p = 0; p < points.count(); ++p) {
        out.residuals[p] = points.accuracies[p] - eval(params, points.sizes[p]);
    }
    double sse = 0.0;
    for (std::size_t p = 0; p < points.count(); ++p) sse += weights[p] * out.residuals[p] * out.residuals[p];
    out.weighted_sse = sse;
    return out;
}

} // namespace

void FitOptions::validate() const {
    if (max_iterations <= 0) throw ContractError("max_iterations must be positive");
    if (!(relative_sse_tolerance > 0.0)) throw ContractError("relative_sse_tolerance must be positive");
    if (!(initial_damping > 0.0)) throw ContractError("initial_damping must be positive");
    if (!(damping_decrease > 0.0 && damping_decrease < 1.0 && damping_increase > 1.0)) {
        throw ContractError("damping schedule must satisfy 0 < decrease < 1 < increase");
    }
}

double weighted_sse(const CurveParams& params, const DataPoints& points, std::span<const double> weights) {
    check_inputs(points, weights);
    double sse = 0.0;
    for (std::size_t p = 0; p < points.count(); ++p) {
        const double r = points.accuracies[p] - eval(params, points.sizes[p]);
        sse += weights[p] * r * r;
    }
    return sse;
}

CurveParams default_init(const DataPoints& points) {
    std::map<double, std::pair<double, int>> by_size;
    for (std::size_t p = 0; p < points.count(); ++p) {
        auto& [sum, n] = by_size[points.sizes[p]];
        sum += points.accuracies[p];
        ++n;
    }
    if (by_size.size() < 2) {
        throw InsufficientDataError("need at least 2 distinct training sizes, got " +
                                    std::to_string(by_size.size()));
    }
    std::vector<double> lx, ly;
    for (const auto& [x, acc] : by_size) {
        const double m = acc.first / acc.second;
        if (m < kAsymptote) {
            lx.push_back(std::log(x));
            ly.push_back(std::log(kAsymptote - m));
        }
    }
    if (lx.empty()) throw FlatDataError("every per-size mean accuracy is 100; nothing to fit");
    if (lx.size() < 2) {
        throw InsufficientDataError("need at least 2 sizes with mean accuracy below 100");
    }
    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    return CurveParams(std::min(-std::exp(intercept), -1e-9), std::min(slope, -1e-6));
}

FitResult fit(const DataPoints& points, std::span<const double> weights, const FitOptions& options) {
    options.validate();
    check_inputs(points, weights);
    if (distinct_sizes(points) < 2) {
        throw InsufficientDataError("need at least 2 distinct training sizes to fit 2 parameters");
    }

    const CurveParams start = options.initial_params ? *options.initial_params : default_init(points);
    if (start.b1() == 0.0) throw ContractError("initial b1 must be strictly negative");
    std::array<double, 2> theta{std::log(-start.b1()), std::log(-start.b2())};

    const std::size_t m = points.count();
    std::vector<double> fitted(m), grad1(m), grad2(m);

    // Model values and d f / d theta at theta.
    auto linearize = [&](const std::array<double, 2>& th) {
        const double b1 = -std::exp(th[0]);
        const double b2 = -std::exp(th[1]);
        for (std::size_t p = 0; p < m; ++p) {
            const double x = points.sizes[p];
            const double power = std::pow(x, b2);
            fitted[p] = kAsymptote + b1 * power;
            grad1[p] = b1 * power;                    // d_b1 * db1/dtheta1
            grad2[p] = b1 * power * std::log(x) * b2; // d_b2 * db2/dtheta2
        }
    };

    double sse = sse_unchecked(-std::exp(theta[0]), -std::exp(theta[1]), points, weights);
    double damping = options.initial_damping;
    bool converged = false;
    bool condition_warning = false;
    int iter = 0;
    std::vector<double> history{sse};
    constexpr double kDampingCeiling = 1e20;

    bool relinearize = true;
    double a11 = 0, a12 = 0, a22 = 0, g1 = 0, g2 = 0;
    while (iter < options.max_iterations && !converged) {
        if (sse == 0.0) {
            converged = true;
            break;
        }
        ++iter;
        if (relinearize) {
            linearize(theta);
            a11 = a12 = a22 = g1 = g2 = 0.0;
            for (std::size_t p = 0; p < m; ++p) {
                const double w = weights[p];
                const double r = points.accuracies[p] - fitted[p];
                a11 += w * grad1[p] * grad1[p];
                a12 += w * grad1[p] * grad2[p];
                a22 += w * grad2[p] * grad2[p];
                g1 += w * grad1[p] * r;
                g2 += w * grad2[p] * r;
            }
            relinearize = false;
        }

        const double d11 = a11 * (1.0 + damping);
        const double d22 = a22 * (1.0 + damping);
        const double det = d11 * d22 - a12 * a12;
        const double scale = std::max({std::abs(d11), std::abs(d22), std::abs(a12)});
        if (!(std::abs(det) > 1e-14 * scale * scale)) {
            condition_warning = true;
            damping *= options.damping_increase;
            if (damping > kDampingCeiling) break;
            continue;
        }
        const std::array<double, 2> trial{theta[0] + (d22 * g1 - a12 * g2) / det,
                                          theta[1] + (d11 * g2 - a12 * g1) / det};
        const double b1 = -std::exp(trial[0]);
        const double b2 = -std::exp(trial[1]);
        const double trial_sse = (std::isfinite(b1) && std::isfinite(b2) && b1 < 0.0 && b2 < 0.0)
                                     ? sse_unchecked(b1, b2, points, weights)
                                     : std::numeric_limits<double>::infinity();

        if (std::isfinite(trial_sse) && trial_sse < sse) {
            const double decrease = sse - trial_sse;
            theta = trial;
            converged = decrease <= options.relative_sse_tolerance * sse;
            sse = trial_sse;
            history.push_back(sse);
            damping *= options.damping_decrease;
            relinearize = true;
        } else {
            damping *= options.damping_increase;
            // No damped step lowers the objective: stationary to round-off.
            if (damping > kDampingCeiling) converged = true;
        }
    }

    auto result = finish(from_theta(theta[0], theta[1]), points, weights);
    result.iterations_used = iter;
    result.converged = converged;
    result.condition_warning = condition_warning;
    result.sse_history = std::move(history);
    return result;
}

FitResult fit(const ObservationSet& obs, const WeightScheme& scheme, const FitOptions& options,
              bool per_replicate) {
    const auto points = flatten(obs, per_replicate);
    const auto weights = materialize_weights(obs, scheme, per_replicate);
    return fit(points, weights.values, options);
}

FitResult grid_search_fit(const DataPoints& points, std::span<const double> weights, ParamRange b1_range,
                          ParamRange b2_range, int grid_steps) {
    check_inputs(points, weights);
    if (grid_steps < 10) throw ContractError("grid_steps must be at least 10");
    if (!(b1_range.low <= b1_range.high && b1_range.high < 0.0)) {
        throw ContractError("b1 range must be a negative interval [low, high]");
    }
    if (!(b2_range.low <= b2_range.high && b2_range.high < 0.0)) {
        throw ContractError("b2 range must be a negative interval [low, high]");
    }

    // Work on u = ln|b|, which is where a log-spaced grid is uniform.
    struct Axis {
        double lo, hi;
    };
    const Axis u1{std::log(-b1_range.high), std::log(-b1_range.low)};
    const Axis u2{std::log(-b2_range.high), std::log(-b2_range.low)};
    auto objective = [&](double v1, double v2) {
        const double s = sse_unchecked(-std::exp(v1), -std::exp(v2), points, weights);
        return std::isfinite(s) ? s : std::numeric_limits<double>::infinity();
    };
    auto node = [](const Axis& a, int i, int n) {
        return n == 0 ? a.lo : a.lo + (a.hi - a.lo) * static_cast<double>(i) / static_cast<double>(n);
    };

    const int n1 = u1.hi > u1.lo ? grid_steps - 1 : 0;
    const int n2 = u2.hi > u2.lo ? grid_steps - 1 : 0;
    double best = std::numeric_limits<double>::infinity();
    double best1 = u1.lo, best2 = u2.lo;
    for (int i = 0; i <= n1; ++i) {
        for (int j = 0; j <= n2; ++j) {
            const double v1 = node(u1, i, n1);
            const double v2 = node(u2, j, n2);
            const double s = objective(v1, v2);
            if (s < best) {
                best = s;
                best1 = v1;
                best2 = v2;
            }
        }
    }

    // Zoom: a 21x21 local grid spanning one coarse cell either side of the
    // incumbent, halving the half-width each pass. The incumbent is always a
    // node, so the best value never increases.
    double h1 = n1 > 0 ? (u1.hi - u1.lo) / n1 : 0.0;
    double h2 = n2 > 0 ? (u2.hi - u2.lo) / n2 : 0.0;
    constexpr int kLocal = 10;
    for (int pass = 0; pass < 200 && (h1 > 1e-15 || h2 > 1e-15); ++pass) {
        const double c1 = best1, c2 = best2;
        for (int i = -kLocal; i <= kLocal; ++i) {
            for (int j = -kLocal; j <= kLocal; ++j) {
                const double v1 = std::clamp(c1 + h1 * i / kLocal, u1.lo, u1.hi);
                const double v2 = std::clamp(c2 + h2 * j / kLocal, u2.lo, u2.hi);
                const double s = objective(v1, v2);
                if (s < best) {
                    best = s;
                    best1 = v1;
                    best2 = v2;
                }
            }
        }
        // Re-centre without shrinking when the minimum moved to the border.
        const bool moved_to_edge = (h1 > 0 && std::abs(best1 - c1) >= h1 * (1.0 - 1e-12)) ||
                                   (h2 > 0 && std::abs(best2 - c2) >= h2 * (1.0 - 1e-12));
        if (!moved_to_edge) {
            h1 *= 0.5;
            h2 *= 0.5;
        }
    }

    auto result = finish(from_theta(best1, best2), points, weights);
    result.converged = true;
    result.sse_history = {result.weighted_sse};
    return result;
}

} // namespace curvecast
