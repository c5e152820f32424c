#include "curvecast/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "curvecast/errors.hpp"
#include "number_format.hpp"

namespace curvecast {

namespace {

std::string label_of(const ObservationGroup& g) {
    return g.class_label.value_or(std::string{});
}

void validate_group(ObservationGroup& g) {
    if (g.size <= 0) {
        throw ContractError("training size must be positive, got " + std::to_string(g.size));
    }
    if (g.replicates.empty()) {
        throw ContractError("size " + std::to_string(g.size) + " has no replicates");
    }
    for (double a : g.replicates) {
        if (!std::isfinite(a) || a < 0.0 || a > 100.0) {
            throw ContractError("accuracy " + std::to_string(a) + " at size " +
                                std::to_string(g.size) + " is outside [0, 100]");
        }
    }
    if (g.repetitions.empty()) {
        g.repetitions.resize(g.replicates.size());
        std::iota(g.repetitions.begin(), g.repetitions.end(), std::int64_t{1});
    }
    if (g.repetitions.size() != g.replicates.size()) {
        throw ContractError("repetition ids do not match replicate count at size " +
                            std::to_string(g.size));
    }
    std::set<std::int64_t> seen;
    for (auto r : g.repetitions) {
        if (r <= 0 || !seen.insert(r).second) {
            throw ContractError("repetition ids must be positive and unique at size " +
                                std::to_string(g.size));
        }
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line, const char* column) {
    T value{};
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (field.empty() || ec != std::errc{} || ptr != last) {
        throw ParseError(line, std::string("malformed ") + column + " '" + std::string(field) + "'");
    }
    return value;
}

} // namespace

ObservationSet::ObservationSet(std::vector<ObservationGroup> groups) {
    std::vector<std::string> order;
    std::map<std::string, std::size_t> rank;
    std::set<std::pair<std::string, std::int64_t>> keys;
    for (auto& g : groups) {
        validate_group(g);
        const auto label = label_of(g);
        if (!keys.emplace(label, g.size).second) {
            throw ContractError("size " + std::to_string(g.size) + " appears twice" +
                                (label.empty() ? std::string{} : " in class " + label));
        }
        if (rank.emplace(label, order.size()).second) order.push_back(label);
    }
    const bool any_labeled = std::any_of(groups.begin(), groups.end(),
                                         [](const auto& g) { return g.class_label.has_value(); });
    const bool any_unlabeled = std::any_of(groups.begin(), groups.end(),
                                           [](const auto& g) { return !g.class_label.has_value(); });
    if (any_labeled && any_unlabeled) {
        throw ContractError("either every group carries a class label or none does");
    }
    std::stable_sort(groups.begin(), groups.end(), [&](const auto& a, const auto& b) {
        const auto ra = rank.at(label_of(a));
        const auto rb = rank.at(label_of(b));
        return ra != rb ? ra < rb : a.size < b.size;
    });
    groups_ = std::move(groups);
}

std::vector<std::string> ObservationSet::class_labels() const {
    std::vector<std::string> labels;
    for (const auto& g : groups_) {
        if (g.class_label && std::find(labels.begin(), labels.end(), *g.class_label) == labels.end()) {
            labels.push_back(*g.class_label);
        }
    }
    return labels;
}

bool ObservationSet::has_classes() const {
    return !groups_.empty() && groups_.front().class_label.has_value();
}

bool ObservationSet::is_single_series() const {
    std::set<std::int64_t> seen;
    for (const auto& g : groups_) {
        if (!seen.insert(g.size).second) return false;
    }
    return true;
}

std::vector<std::int64_t> ObservationSet::sizes() const {
    std::set<std::int64_t> s;
    for (const auto& g : groups_) s.insert(g.size);
    return {s.begin(), s.end()};
}

ObservationSet ObservationSet::select_class(std::string_view label) const {
    std::vector<ObservationGroup> picked;
    for (const auto& g : groups_) {
        if (g.class_label && *g.class_label == label) picked.push_back(g);
    }
    if (picked.empty()) {
        throw ContractError("no observations for class '" + std::string(label) + "'");
    }
    return ObservationSet(std::move(picked));
}

ObservationSet ObservationSet::average_total() const {
    std::vector<ObservationGroup> pooled;
    for (auto size : sizes()) {
        std::vector<const ObservationGroup*> cells;
        for (const auto& g : groups_) {
            if (g.size == size) cells.push_back(&g);
        }
        ObservationGroup out;
        out.size = size;
        out.class_label = std::string(kAverageTotal);

        auto sorted_ids = [](const ObservationGroup& g) {
            auto ids = g.repetitions;
            std::sort(ids.begin(), ids.end());
            return ids;
        };
        const auto ids = sorted_ids(*cells.front());
        const bool aligned = std::all_of(cells.begin(), cells.end(),
                                         [&](const auto* g) { return sorted_ids(*g) == ids; });
        if (aligned) {
            for (auto id : ids) {
                double sum = 0.0;
                for (const auto* g : cells) {
                    const auto at = std::find(g->repetitions.begin(), g->repetitions.end(), id) -
                                    g->repetitions.begin();
                    sum += g->replicates[static_cast<std::size_t>(at)];
                }
                out.replicates.push_back(sum / static_cast<double>(cells.size()));
                out.repetitions.push_back(id);
            }
        } else {
            for (const auto* g : cells) out.replicates.push_back(mean(g->replicates));
        }
        pooled.push_back(std::move(out));
    }
    return ObservationSet(std::move(pooled));
}

ObservationSet ObservationSet::default_series() const {
    if (!has_classes()) return *this;
    const auto labels = class_labels();
    if (labels.size() == 1) return *this;
    return average_total();
}

ObservationSet ObservationSet::series(std::string_view label) const {
    if (label == kAverageTotal) {
        return has_classes() ? average_total() : *this;
    }
    return select_class(label);
}

ObservationSet parse_observations(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

    std::size_t line_no = 0;
    std::size_t pos = 0;
    auto next_line = [&](std::string_view& line) {
        while (pos <= text.size()) {
            if (pos == text.size()) return false;
            const auto nl = text.find('\n', pos);
            line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
            pos = nl == std::string_view::npos ? text.size() : nl + 1;
            ++line_no;
            if (!trim(line).empty()) return true;
        }
        return false;
    };

    std::string_view line;
    if (!next_line(line)) throw ParseError(1, "empty input; expected header 'size,accuracy'");

    int col_size = -1, col_acc = -1, col_class = -1, col_rep = -1;
    const auto header = split_fields(line);
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string name(header[i]);
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        int* slot = name == "size"         ? &col_size
                    : name == "accuracy"   ? &col_acc
                    : name == "class"      ? &col_class
                    : name == "repetition" ? &col_rep
                                           : nullptr;
        if (slot == nullptr) throw ParseError(line_no, "unknown column '" + name + "'");
        if (*slot != -1) throw ParseError(line_no, "duplicate column '" + name + "'");
        *slot = static_cast<int>(i);
    }
    if (col_size < 0 || col_acc < 0) {
        throw ParseError(line_no, "header must name 'size' and 'accuracy' columns");
    }

    struct Cell {
        ObservationGroup group;
        std::set<std::int64_t> seen;
    };
    std::vector<Cell> cells;
    std::map<std::pair<std::string, std::int64_t>, std::size_t> index;

    while (next_line(line)) {
        const auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                          std::to_string(fields.size()));
        }
        const auto size = parse_number<std::int64_t>(fields[col_size], line_no, "size");
        if (size <= 0) throw ParseError(line_no, "size must be positive, got " + std::to_string(size));
        const auto acc = parse_number<double>(fields[col_acc], line_no, "accuracy");
        if (!std::isfinite(acc) || acc < 0.0 || acc > 100.0) {
            throw ParseError(line_no, "accuracy " + std::string(fields[col_acc]) + " outside [0, 100]");
        }
        std::optional<std::string> label;
        if (col_class >= 0) {
            label = std::string(fields[col_class]);
            if (label->empty()) throw ParseError(line_no, "empty class label");
        }
        const auto key = std::make_pair(label.value_or(std::string{}), size);
        auto [it, fresh] = index.emplace(key, cells.size());
        if (fresh) {
            Cell c;
            c.group.size = size;
            c.group.class_label = label;
            cells.push_back(std::move(c));
        }
        auto& cell = cells[it->second];
        std::int64_t rep = static_cast<std::int64_t>(cell.group.replicates.size()) + 1;
        if (col_rep >= 0) {
            rep = parse_number<std::int64_t>(fields[col_rep], line_no, "repetition");
            if (rep <= 0) throw ParseError(line_no, "repetition must be positive");
        }
        if (!cell.seen.insert(rep).second) {
            throw ParseError(line_no, "duplicate observation for size " + std::to_string(size) +
                                          ", repetition " + std::to_string(rep));
        }
        cell.group.replicates.push_back(acc);
        cell.group.repetitions.push_back(rep);
    }
    if (cells.empty()) throw ParseError(line_no, "no data rows");

    std::vector<ObservationGroup> groups;
    groups.reserve(cells.size());
    for (auto& c : cells) groups.push_back(std::move(c.group));
    return ObservationSet(std::move(groups));
}

std::string serialize_observations(const ObservationSet& obs) {
    std::ostringstream out;
    const bool labeled = obs.has_classes();
    out << "size,accuracy" << (labeled ? ",class" : "") << ",repetition\n";
    for (const auto& g : obs.groups()) {
        for (std::size_t i = 0; i < g.replicates.size(); ++i) {
            out << g.size << ',' << detail::shortest(g.replicates[i]);
            if (labeled) out << ',' << *g.class_label;
            out << ',' << g.repetitions[i] << '\n';
        }
    }
    return out.str();
}

double mean(std::span<const double> values) {
    if (values.empty()) throw ContractError("mean of an empty range");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return ss / static_cast<double>(values.size() - 1);
}

AggregateTable aggregate(const ObservationSet& obs) {
    const auto pooled = obs.has_classes() && obs.class_labels().size() > 1 ? obs.average_total() : obs;
    AggregateTable table;
    for (auto size : obs.sizes()) {
        AggregateRow row;
        row.size = size;
        double sum = 0.0;
        for (const auto& g : obs.groups()) {
            if (g.size != size) continue;
            const double m = mean(g.replicates);
            row.class_means.emplace_back(label_of(g), m);
            sum += m;
        }
        row.overall_mean = sum / static_cast<double>(row.class_means.size());
        for (const auto& g : pooled.groups()) {
            if (g.size != size) continue;
            row.std_dev = std::sqrt(sample_variance(g.replicates));
            row.replicate_count = g.replicates.size();
        }
        table.push_back(std::move(row));
    }
    return table;
}

namespace {

const ObservationSet& require_series(const ObservationSet& obs) {
    if (obs.empty()) throw ContractError("no observations");
    if (!obs.is_single_series()) {
        throw ContractError("observations span several classes; select one class or the "
                            "AverageTotal view before fitting");
    }
    return obs;
}

} // namespace

DataPoints flatten(const ObservationSet& obs, bool per_replicate) {
    DataPoints points;
    for (const auto& g : require_series(obs).groups()) {
        if (per_replicate) {
            for (double a : g.replicates) {
                points.sizes.push_back(static_cast<double>(g.size));
                points.accuracies.push_back(a);
            }
        } else {
            points.sizes.push_back(static_cast<double>(g.size));
            points.accuracies.push_back(mean(g.replicates));
        }
    }
    return points;
}

WeightVector materialize_weights(const ObservationSet& obs, const WeightScheme& scheme,
                                 bool per_replicate) {
    const auto& groups = require_series(obs).groups();
    WeightVector out;
    std::vector<double> per_size;

    if (std::holds_alternative<UniformWeights>(scheme)) {
        per_size.assign(groups.size(), 1.0);
    } else if (const auto* manual = std::get_if<ManualWeights>(&scheme)) {
        if (manual->values.size() != groups.size()) {
            throw ContractError("manual weights: expected " + std::to_string(groups.size()) +
                                " values (one per size), got " + std::to_string(manual->values.size()));
        }
        for (double w : manual->values) {
            if (!(w > 0.0) || !std::isfinite(w)) {
                throw ContractError("manual weights must be positive and finite, got " + std::to_string(w));
            }
        }
        per_size = manual->values;
    } else {
        const auto& iv = std::get<InverseVarianceWeights>(scheme);
        if (!(iv.floor > 0.0) || !std::isfinite(iv.floor)) {
            throw ContractError("variance floor must be positive and finite");
        }
        for (const auto& g : groups) {
            if (g.replicates.size() < 2) {
                out.warnings.push_back("size " + std::to_string(g.size) +
                                       " has a single replicate; using the variance floor");
            }
            per_size.push_back(1.0 / std::max(sample_variance(g.replicates), iv.floor));
        }
    }

    for (std::size_t i = 0; i < groups.size(); ++i) {
        const std::size_t copies = per_replicate ? groups[i].replicates.size() : 1;
        out.values.insert(out.values.end(), copies, per_size[i]);
    }
    return out;
}

WeightScheme default_weight_scheme(const ObservationSet& obs) {
    const bool replicated = std::any_of(obs.groups().begin(), obs.groups().end(),
                                        [](const auto& g) { return g.replicates.size() > 1; });
    if (replicated) return InverseVarianceWeights{};
    return UniformWeights{};
}

std::string describe(const WeightScheme& scheme) {
    if (std::holds_alternative<UniformWeights>(scheme)) return "uniform";
    if (const auto* m = std::get_if<ManualWeights>(&scheme)) {
        std::string s = "manual(";
        for (std::size_t i = 0; i < m->values.size(); ++i) {
            if (i) s += ',';
            s += detail::shortest(m->values[i]);
        }
        return s + ")";
    }
    return "inverse-variance(floor=" + detail::shortest(std::get<InverseVarianceWeights>(scheme).floor) + ")";
}

} // namespace curvecast
