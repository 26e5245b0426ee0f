#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "faircompass/dataset.hpp"
#include "faircompass/subgroup.hpp"

namespace faircompass {

struct ConfusionCounts {
    size_t tp = 0;
    size_t fp = 0;
    size_t tn = 0;
    size_t fn = 0;

    size_t total() const noexcept { return tp + fp + tn + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }
    bool operator==(const ConfusionCounts&) const = default;
};

// A rate is std::nullopt exactly when its denominator is zero.
using Rate = std::optional<double>;

struct MetricVector {
    size_t size = 0;
    Rate accuracy;
    Rate precision;
    Rate recall;  // true positive rate
    Rate tnr;
    Rate fpr;
    Rate fnr;
    Rate positive_rate;  // fraction predicted 1
    Rate negative_rate;  // fraction predicted 0
    Rate base_rate;      // fraction labelled 1

    bool operator==(const MetricVector&) const = default;
};

enum class RateKind { positive_rate, negative_rate, tpr, fpr, fnr, precision, accuracy };

inline constexpr std::array<RateKind, 7> kAllRateKinds = {
    RateKind::positive_rate, RateKind::negative_rate, RateKind::tpr,     RateKind::fpr,
    RateKind::fnr,           RateKind::precision,     RateKind::accuracy,
};

std::string_view to_string(RateKind kind) noexcept;
RateKind parse_rate_kind(std::string_view text);  // throws InvalidArgument

ConfusionCounts confusion(const Dataset& dataset, const RowMask& mask);
MetricVector metrics(const ConfusionCounts& counts);
Rate rate_of(const MetricVector& vector, RateKind kind) noexcept;

// Fraction of the favourable predicted class: positive_rate for 1, negative_rate for 0.
double rate_for_class(const MetricVector& vector, int favourable_class);
RateKind favourable_rate_kind(int favourable_class);

inline constexpr double kDefaultParityThreshold = 0.1;
inline constexpr size_t kDefaultMinStratumSize = 20;

struct GroupRate {
    std::string subgroup_id;
    std::string display_name;
    size_t size = 0;
    Rate rate;

    bool operator==(const GroupRate&) const = default;
};

// Satisfied iff the largest pairwise gap between defined rates is within the
// threshold. min_ratio is informational (smallest / largest defined rate).
struct ParityAssessment {
    RateKind rate_kind = RateKind::positive_rate;
    std::optional<int> favourable_class;
    std::vector<GroupRate> per_group;
    double max_abs_difference = 0.0;
    Rate min_ratio;
    bool satisfied = false;
    double threshold = kDefaultParityThreshold;

    bool operator==(const ParityAssessment&) const = default;
};

struct Stratum {
    std::vector<Predicate> predicates;
    std::string display_name;
    size_t size = 0;
    ParityAssessment assessment;

    bool operator==(const Stratum&) const = default;
};

struct ExcludedStratum {
    std::string display_name;
    size_t size = 0;
    std::string reason;

    bool operator==(const ExcludedStratum&) const = default;
};

struct StratifiedParity {
    std::string sensitive_attribute;
    std::vector<std::string> legitimate_attributes;
    int favourable_class = 1;
    double threshold = kDefaultParityThreshold;
    size_t min_stratum_size = kDefaultMinStratumSize;
    std::vector<Stratum> strata;
    std::vector<ExcludedStratum> excluded;
    std::vector<std::string> warnings;
    bool satisfied = false;  // AND over strata

    bool operator==(const StratifiedParity&) const = default;
};

ParityAssessment demographic_parity(const Dataset& dataset, const std::vector<Subgroup>& subgroups,
                                    int favourable_class, double threshold = kDefaultParityThreshold);

ParityAssessment parity_by_rate(const Dataset& dataset, const std::vector<Subgroup>& subgroups, RateKind rate_kind,
                                double threshold = kDefaultParityThreshold);

// Demographic parity across the sensitive attribute's groups inside every
// combination of legitimate-attribute values. A stratum is evaluated when it
// has at least min_stratum_size rows and at least two sensitive groups that
// each reach min_stratum_size; the rest are reported as excluded. When
// `population` is given, only its rows are considered.
StratifiedParity conditional_statistical_parity(const Dataset& dataset, const std::string& sensitive_attribute,
                                                const std::vector<std::string>& legitimate_attributes,
                                                int favourable_class, double threshold = kDefaultParityThreshold,
                                                size_t min_stratum_size = kDefaultMinStratumSize,
                                                const RowMask* population = nullptr);

// Subgroup rate minus dataset-wide rate.
double metric_deviation(const MetricVector& subgroup, const MetricVector& overall, RateKind kind);

}  // namespace faircompass
