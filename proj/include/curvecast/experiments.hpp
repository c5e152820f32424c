#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace curvecast {

inline constexpr std::string_view kAverageTotal = "AverageTotal";

/// Replicated accuracy measurements for one (class, training size) cell.
struct ObservationGroup {
    std::int64_t size = 0;
    std::vector<double> replicates;
    /// Repetition ids parallel to `replicates`. Left empty, they are filled
    /// with 1..n on construction of the owning ObservationSet.
    std::vector<std::int64_t> repetitions;
    std::optional<std::string> class_label;

    friend bool operator==(const ObservationGroup&, const ObservationGroup&) = default;
};

/// Validated collection of observation groups, possibly spanning several
/// classes. Groups are kept in class first-appearance order, sizes ascending
/// within each class.
class ObservationSet {
public:
    ObservationSet() = default;
    explicit ObservationSet(std::vector<ObservationGroup> groups);

    const std::vector<ObservationGroup>& groups() const noexcept { return groups_; }
    bool empty() const noexcept { return groups_.empty(); }

    /// Distinct class labels in first-appearance order; empty when unlabeled.
    std::vector<std::string> class_labels() const;
    bool has_classes() const;

    /// True when every size appears at most once, i.e. the set describes a
    /// single learning curve that can be fitted directly.
    bool is_single_series() const;

    /// Distinct sizes, ascending.
    std::vector<std::int64_t> sizes() const;

    ObservationSet select_class(std::string_view label) const;

    /// Pooled whole-set view labelled "AverageTotal". Per size, replicate k is
    /// the mean over classes of each class's repetition k when all classes
    /// share the same repetition ids; otherwise each class contributes its
    /// mean as one replicate.
    ObservationSet average_total() const;

    /// The series a fit should use when the caller names none: the only
    /// series for unlabeled data, the AverageTotal view otherwise.
    ObservationSet default_series() const;

    /// `label` may be kAverageTotal or one of class_labels().
    ObservationSet series(std::string_view label) const;

    friend bool operator==(const ObservationSet&, const ObservationSet&) = default;

private:
    std::vector<ObservationGroup> groups_;
};

/// Parses the observation CSV schema: header naming `size` and `accuracy`,
/// optionally `class` and `repetition`. Throws ParseError with the offending
/// line number.
ObservationSet parse_observations(std::string_view text);

/// Writes the set in the same schema, always with a repetition column.
std::string serialize_observations(const ObservationSet& obs);

struct AggregateRow {
    std::int64_t size = 0;
    std::vector<std::pair<std::string, double>> class_means;
    double overall_mean = 0.0;
    double std_dev = 0.0;
    std::size_t replicate_count = 0;
};

using AggregateTable = std::vector<AggregateRow>;

/// Per-size summary. The overall mean is the unweighted mean of per-class
/// means; std_dev and replicate_count describe the pooled series.
AggregateTable aggregate(const ObservationSet& obs);

double mean(std::span<const double> values);
/// n-1 denominator; 0 for a single value.
double sample_variance(std::span<const double> values);

/// Flattened (x_p, t_p) pairs consumed by the fitter.
struct DataPoints {
    std::vector<double> sizes;
    std::vector<double> accuracies;

    std::size_t count() const noexcept { return sizes.size(); }
};

/// Per-size means (ascending size), or every replicate when `per_replicate`.
DataPoints flatten(const ObservationSet& obs, bool per_replicate);

struct UniformWeights {};
struct ManualWeights {
    std::vector<double> values; ///< one per size, ascending size order
};
struct InverseVarianceWeights {
    double floor = 1e-4; ///< variance floor in percent^2
};

using WeightScheme = std::variant<UniformWeights, ManualWeights, InverseVarianceWeights>;

struct WeightVector {
    std::vector<double> values;
    std::vector<std::string> warnings;
};

/// Diagonal of W, aligned with flatten(obs, per_replicate).
WeightVector materialize_weights(const ObservationSet& obs, const WeightScheme& scheme,
                                 bool per_replicate);

/// InverseVariance when any group has more than one replicate, Uniform otherwise.
WeightScheme default_weight_scheme(const ObservationSet& obs);

std::string describe(const WeightScheme& scheme);

} // namespace curvecast
