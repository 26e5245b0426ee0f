#include "faircompass/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "faircompass/error.hpp"

namespace faircompass {

namespace {

Rate ratio(size_t num, size_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

ParityAssessment assess(std::vector<GroupRate> per_group, RateKind kind, double threshold) {
    ParityAssessment out;
    out.rate_kind = kind;
    out.threshold = threshold;
    double lo = 0.0;
    double hi = 0.0;
    bool any = false;
    for (const auto& g : per_group) {
        if (!g.rate) continue;
        lo = any ? std::min(lo, *g.rate) : *g.rate;
        hi = any ? std::max(hi, *g.rate) : *g.rate;
        any = true;
    }
    // max over pairs |r_i - r_j| is attained by the extreme pair
    out.max_abs_difference = any ? hi - lo : 0.0;
    out.min_ratio = (any && hi > 0.0) ? Rate(lo / hi) : std::nullopt;
    out.satisfied = out.max_abs_difference <= threshold;
    out.per_group = std::move(per_group);
    return out;
}

std::vector<GroupRate> group_rates(const Dataset& dataset, const std::vector<Subgroup>& subgroups, RateKind kind) {
    std::vector<GroupRate> rates;
    rates.reserve(subgroups.size());
    for (const auto& g : subgroups) {
        const auto mv = metrics(confusion(dataset, membership_mask(dataset, g)));
        rates.push_back({g.id, g.display_name, mv.size, rate_of(mv, kind)});
    }
    return rates;
}

size_t defined_count(const std::vector<GroupRate>& rates) {
    return static_cast<size_t>(
        std::count_if(rates.begin(), rates.end(), [](const GroupRate& g) { return g.rate.has_value(); }));
}

void check_threshold(double threshold) {
    if (!(threshold >= 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be a non-negative number");
}

void check_class(int favourable_class) {
    if (favourable_class != 0 && favourable_class != 1) {
        throw Error(ErrorCode::InvalidArgument, "favourable class must be 0 or 1");
    }
}

}  // namespace

std::string_view to_string(RateKind kind) noexcept {
    switch (kind) {
        case RateKind::positive_rate: return "positive_rate";
        case RateKind::negative_rate: return "negative_rate";
        case RateKind::tpr: return "tpr";
        case RateKind::fpr: return "fpr";
        case RateKind::fnr: return "fnr";
        case RateKind::precision: return "precision";
        case RateKind::accuracy: return "accuracy";
    }
    return "unknown";
}

RateKind parse_rate_kind(std::string_view text) {
    for (RateKind k : kAllRateKinds) {
        if (to_string(k) == text) return k;
    }
    if (text == "recall") return RateKind::tpr;
    throw Error(ErrorCode::InvalidArgument, "unknown rate kind '" + std::string(text) + "'");
}

ConfusionCounts confusion(const Dataset& dataset, const RowMask& mask) {
    if (mask.size() != dataset.row_count()) {
        throw Error(ErrorCode::InvalidArgument, "mask length does not match row count");
    }
    const auto y = dataset.labels();
    const auto yhat = dataset.predictions();
    ConfusionCounts c;
    for (size_t r = 0; r < mask.size(); ++r) {
        if (!mask[r]) continue;
        if (y[r]) {
            yhat[r] ? ++c.tp : ++c.fn;
        } else {
            yhat[r] ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

MetricVector metrics(const ConfusionCounts& c) {
    MetricVector m;
    const size_t n = c.total();
    m.size = n;
    m.accuracy = ratio(c.tp + c.tn, n);
    m.precision = ratio(c.tp, c.tp + c.fp);
    m.recall = ratio(c.tp, c.tp + c.fn);
    m.tnr = ratio(c.tn, c.tn + c.fp);
    m.fpr = ratio(c.fp, c.fp + c.tn);
    m.fnr = ratio(c.fn, c.fn + c.tp);
    m.positive_rate = ratio(c.tp + c.fp, n);
    m.negative_rate = ratio(c.tn + c.fn, n);
    m.base_rate = ratio(c.tp + c.fn, n);
    return m;
}

Rate rate_of(const MetricVector& v, RateKind kind) noexcept {
    switch (kind) {
        case RateKind::positive_rate: return v.positive_rate;
        case RateKind::negative_rate: return v.negative_rate;
        case RateKind::tpr: return v.recall;
        case RateKind::fpr: return v.fpr;
        case RateKind::fnr: return v.fnr;
        case RateKind::precision: return v.precision;
        case RateKind::accuracy: return v.accuracy;
    }
    return std::nullopt;
}

RateKind favourable_rate_kind(int favourable_class) {
    check_class(favourable_class);
    return favourable_class == 1 ? RateKind::positive_rate : RateKind::negative_rate;
}

double rate_for_class(const MetricVector& v, int favourable_class) {
    const Rate r = rate_of(v, favourable_rate_kind(favourable_class));
    if (!r) throw Error(ErrorCode::UndefinedRate, "favourable rate is undefined for an empty group");
    return *r;
}

ParityAssessment demographic_parity(const Dataset& dataset, const std::vector<Subgroup>& subgroups,
                                    int favourable_class, double threshold) {
    check_threshold(threshold);
    const RateKind kind = favourable_rate_kind(favourable_class);
    auto rates = group_rates(dataset, subgroups, kind);
    if (defined_count(rates) < 2) {
        throw Error(ErrorCode::TooFewGroups, "demographic parity needs at least two non-empty groups");
    }
    auto out = assess(std::move(rates), kind, threshold);
    out.favourable_class = favourable_class;
    return out;
}

ParityAssessment parity_by_rate(const Dataset& dataset, const std::vector<Subgroup>& subgroups, RateKind rate_kind,
                                double threshold) {
    check_threshold(threshold);
    if (subgroups.size() < 2) throw Error(ErrorCode::TooFewGroups, "rate parity needs at least two groups");
    auto rates = group_rates(dataset, subgroups, rate_kind);
    const size_t defined = defined_count(rates);
    if (defined == 0) {
        throw Error(ErrorCode::UndefinedRate, std::string(to_string(rate_kind)) + " is undefined for every group");
    }
    if (defined < 2) {
        throw Error(ErrorCode::TooFewGroups,
                    std::string(to_string(rate_kind)) + " is defined for only one group");
    }
    return assess(std::move(rates), rate_kind, threshold);
}

StratifiedParity conditional_statistical_parity(const Dataset& dataset, const std::string& sensitive_attribute,
                                                const std::vector<std::string>& legitimate_attributes,
                                                int favourable_class, double threshold, size_t min_stratum_size,
                                                const RowMask* population) {
    check_threshold(threshold);
    check_class(favourable_class);
    if (min_stratum_size < 1) throw Error(ErrorCode::InvalidArgument, "min_stratum_size must be at least 1");
    if (legitimate_attributes.empty()) {
        throw Error(ErrorCode::MissingInput, "conditional parity needs at least one legitimate attribute");
    }
    if (population && population->size() != dataset.row_count()) {
        throw Error(ErrorCode::InvalidArgument, "population mask length does not match row count");
    }
    const size_t sens = dataset.feature_index(sensitive_attribute);
    std::vector<size_t> legit;
    std::set<std::string> seen;
    for (const auto& name : legitimate_attributes) {
        if (name == sensitive_attribute) {
            throw Error(ErrorCode::OverlappingAttributes,
                        "'" + name + "' cannot be both sensitive and legitimate");
        }
        if (!seen.insert(name).second) {
            throw Error(ErrorCode::DuplicateFeature, "legitimate attribute '" + name + "' listed twice");
        }
        legit.push_back(dataset.feature_index(name));
    }

    // stratum key (legitimate level indices) -> per sensitive level counts
    std::map<std::vector<std::int32_t>, std::map<std::int32_t, ConfusionCounts>> cells;
    const auto sens_codes = dataset.codes(sens);
    std::vector<std::span<const std::int32_t>> legit_codes;
    for (size_t f : legit) legit_codes.push_back(dataset.codes(f));
    const auto y = dataset.labels();
    const auto yhat = dataset.predictions();
    std::vector<std::int32_t> key(legit.size());
    for (size_t r = 0; r < dataset.row_count(); ++r) {
        if (population && !(*population)[r]) continue;
        for (size_t i = 0; i < legit.size(); ++i) key[i] = legit_codes[i][r];
        auto& c = cells[key][sens_codes[r]];
        if (y[r]) {
            yhat[r] ? ++c.tp : ++c.fn;
        } else {
            yhat[r] ? ++c.fp : ++c.tn;
        }
    }

    StratifiedParity out;
    out.sensitive_attribute = sensitive_attribute;
    out.legitimate_attributes = legitimate_attributes;
    out.favourable_class = favourable_class;
    out.threshold = threshold;
    out.min_stratum_size = min_stratum_size;
    const RateKind kind = favourable_rate_kind(favourable_class);
    const auto& sens_levels = dataset.levels(sens);
    const auto& sens_name = dataset.feature(sens).name;

    for (const auto& [stratum_key, groups] : cells) {
        std::vector<Predicate> predicates;
        std::string stratum_name;
        for (size_t i = 0; i < legit.size(); ++i) {
            const auto& spec = dataset.feature(legit[i]);
            const auto level = static_cast<size_t>(stratum_key[i]);
            predicates.push_back(spec.kind == FeatureKind::categorical
                                     ? Predicate::equals(spec.name, dataset.levels(legit[i])[level])
                                     : Predicate::in_bin(spec.name, level));
            if (!stratum_name.empty()) stratum_name += ", ";
            stratum_name += dataset.levels(legit[i])[level];
        }
        size_t stratum_size = 0;
        for (const auto& [level, counts] : groups) stratum_size += counts.total();
        if (stratum_size < min_stratum_size) {
            out.excluded.push_back({stratum_name, stratum_size,
                                    "fewer than " + std::to_string(min_stratum_size) + " rows"});
            continue;
        }
        std::vector<GroupRate> rates;
        std::vector<std::string> small;
        for (const auto& [level, counts] : groups) {
            const auto& label = sens_levels[static_cast<size_t>(level)];
            if (counts.total() < min_stratum_size) {
                small.push_back(label + " (" + std::to_string(counts.total()) + ")");
                continue;
            }
            auto member = predicates;
            member.push_back(Predicate::equals(sens_name, label));
            if (dataset.feature(sens).kind == FeatureKind::numeric) {
                member.back() = Predicate::in_bin(sens_name, static_cast<size_t>(level));
            }
            const auto mv = metrics(counts);
            rates.push_back({subgroup_key(dataset, member), stratum_name + ", " + label, mv.size, rate_of(mv, kind)});
        }
        if (rates.size() < 2) {
            std::string reason = rates.empty() ? "no sensitive group" : "only one sensitive group";
            reason += " with at least " + std::to_string(min_stratum_size) + " rows";
            if (!small.empty()) {
                reason += "; too small:";
                for (const auto& s : small) reason += " " + s;
            }
            out.warnings.push_back("stratum '" + stratum_name + "' excluded: " + reason);
            out.excluded.push_back({stratum_name, stratum_size, reason});
            continue;
        }
        if (!small.empty()) {
            std::string w = "stratum '" + stratum_name + "': sensitive groups below " +
                            std::to_string(min_stratum_size) + " rows left out:";
            for (const auto& s : small) w += " " + s;
            out.warnings.push_back(w);
        }
        Stratum s;
        s.predicates = std::move(predicates);
        s.display_name = stratum_name;
        s.size = stratum_size;
        s.assessment = assess(std::move(rates), kind, threshold);
        s.assessment.favourable_class = favourable_class;
        out.strata.push_back(std::move(s));
    }
    if (out.strata.empty()) {
        throw Error(ErrorCode::NoQualifyingStrata, "no stratum has two sensitive groups of at least " +
                                                       std::to_string(min_stratum_size) + " rows");
    }
    out.satisfied = std::all_of(out.strata.begin(), out.strata.end(),
                                [](const Stratum& s) { return s.assessment.satisfied; });
    return out;
}

double metric_deviation(const MetricVector& subgroup, const MetricVector& overall, RateKind kind) {
    const Rate a = rate_of(subgroup, kind);
    const Rate b = rate_of(overall, kind);
    if (!a || !b) {
        throw Error(ErrorCode::UndefinedRate, std::string(to_string(kind)) + " is undefined");
    }
    return *a - *b;
}

}  // namespace faircompass
