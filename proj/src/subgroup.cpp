#include "faircompass/subgroup.hpp"

#include <algorithm>
#include <set>

#include "faircompass/error.hpp"

namespace faircompass {

Predicate Predicate::equals(std::string feature, std::string category) {
    Predicate p;
    p.feature = std::move(feature);
    p.match = Match::equals;
    p.category = std::move(category);
    return p;
}

Predicate Predicate::in_bin(std::string feature, size_t bin_index) {
    Predicate p;
    p.feature = std::move(feature);
    p.match = Match::in_bin;
    p.bin_index = bin_index;
    return p;
}

size_t predicate_level(const Dataset& dataset, const Predicate& p) {
    const size_t f = dataset.feature_index(p.feature);
    const auto& spec = dataset.feature(f);
    const auto& levels = dataset.levels(f);
    if (p.match == Predicate::Match::equals) {
        if (spec.kind != FeatureKind::categorical) {
            throw Error(ErrorCode::NotNumeric, "feature '" + p.feature + "' is numeric; use a bin predicate");
        }
        auto it = std::find(levels.begin(), levels.end(), p.category);
        if (it == levels.end()) {
            throw Error(ErrorCode::UnknownValue, "feature '" + p.feature + "' has no value '" + p.category + "'");
        }
        return static_cast<size_t>(std::distance(levels.begin(), it));
    }
    if (spec.kind != FeatureKind::numeric) {
        throw Error(ErrorCode::NotNumeric, "feature '" + p.feature + "' is categorical; use an equals predicate");
    }
    if (p.bin_index >= levels.size()) {
        throw Error(ErrorCode::UnknownValue,
                    "feature '" + p.feature + "' has no bin " + std::to_string(p.bin_index));
    }
    return p.bin_index;
}

std::string predicate_value_label(const Dataset& dataset, const Predicate& p) {
    return dataset.levels(dataset.feature_index(p.feature))[predicate_level(dataset, p)];
}

std::string subgroup_key(const Dataset& dataset, const std::vector<Predicate>& predicates) {
    std::string key;
    for (const auto& p : predicates) {
        if (!key.empty()) key += "&";
        key += p.feature + "=" + predicate_value_label(dataset, p);
    }
    return key;
}

Predicate predicate_for_level(const Dataset& dataset, const std::string& feature, const std::string& level) {
    const size_t f = dataset.feature_index(feature);
    const auto& levels = dataset.levels(f);
    auto it = std::find(levels.begin(), levels.end(), level);
    if (it == levels.end()) {
        throw Error(ErrorCode::UnknownValue, "feature '" + feature + "' has no value '" + level + "'");
    }
    if (dataset.feature(f).kind == FeatureKind::categorical) return Predicate::equals(feature, level);
    return Predicate::in_bin(feature, static_cast<size_t>(std::distance(levels.begin(), it)));
}

namespace {

std::string display_name_of(const Dataset& dataset, const std::vector<Predicate>& predicates) {
    std::string name;
    for (const auto& p : predicates) {
        if (!name.empty()) name += ", ";
        name += predicate_value_label(dataset, p);
    }
    return name;
}

}  // namespace

Subgroup make_subgroup(const Dataset& dataset, std::vector<Predicate> predicates, std::string id) {
    if (predicates.empty()) throw Error(ErrorCode::InvalidArgument, "a subgroup needs at least one predicate");
    std::set<std::string> seen;
    for (const auto& p : predicates) {
        predicate_level(dataset, p);
        if (!seen.insert(p.feature).second) {
            throw Error(ErrorCode::DuplicateFeature, "feature '" + p.feature + "' appears in two predicates");
        }
    }
    Subgroup g;
    g.id = id.empty() ? subgroup_key(dataset, predicates) : std::move(id);
    g.dataset_id = dataset.id();
    g.display_name = display_name_of(dataset, predicates);
    g.predicates = std::move(predicates);
    g.size = popcount(membership_mask(dataset, g));
    return g;
}

std::vector<Subgroup> generate_subgroups(const Dataset& dataset, const std::vector<FeatureSelection>& selections,
                                         size_t product_cap) {
    if (selections.empty()) throw Error(ErrorCode::InvalidArgument, "select at least one feature");

    struct Axis {
        size_t feature;
        std::vector<size_t> levels;          // selected level indices, in output order
        std::vector<std::int32_t> position;  // level index -> position in `levels`, or -1
    };
    std::vector<Axis> axes;
    std::set<std::string> seen;
    size_t product = 1;
    for (const auto& sel : selections) {
        Axis axis;
        axis.feature = dataset.feature_index(sel.feature);
        if (!seen.insert(sel.feature).second) {
            throw Error(ErrorCode::DuplicateFeature, "feature '" + sel.feature + "' selected twice");
        }
        const auto& levels = dataset.levels(axis.feature);
        if (sel.values.empty()) {
            for (size_t i = 0; i < levels.size(); ++i) axis.levels.push_back(i);
        } else {
            for (const auto& v : sel.values) {
                auto it = std::find(levels.begin(), levels.end(), v);
                if (it == levels.end()) {
                    throw Error(ErrorCode::UnknownValue, "feature '" + sel.feature + "' has no value '" + v + "'");
                }
                const auto idx = static_cast<size_t>(std::distance(levels.begin(), it));
                if (std::find(axis.levels.begin(), axis.levels.end(), idx) == axis.levels.end()) {
                    axis.levels.push_back(idx);
                }
            }
        }
        axis.position.assign(levels.size(), -1);
        for (size_t i = 0; i < axis.levels.size(); ++i) axis.position[axis.levels[i]] = static_cast<std::int32_t>(i);
        const size_t width = std::max<size_t>(axis.levels.size(), 1);
        if (static_cast<double>(product) * static_cast<double>(width) > static_cast<double>(product_cap)) {
            throw Error(ErrorCode::ProductTooLarge, "selection spans more than " + std::to_string(product_cap) +
                                                        " combinations");
        }
        product *= width;
        axes.push_back(std::move(axis));
    }
    for (const auto& axis : axes) {
        if (axis.levels.empty()) return {};
    }

    // Mixed-radix cell index per row; the first selection is the most significant digit.
    std::vector<size_t> counts(product, 0);
    std::vector<std::span<const std::int32_t>> codes;
    for (const auto& axis : axes) codes.push_back(dataset.codes(axis.feature));
    for (size_t r = 0; r < dataset.row_count(); ++r) {
        size_t cell = 0;
        bool selected = true;
        for (size_t a = 0; a < axes.size(); ++a) {
            const std::int32_t pos = axes[a].position[static_cast<size_t>(codes[a][r])];
            if (pos < 0) {
                selected = false;
                break;
            }
            cell = cell * axes[a].levels.size() + static_cast<size_t>(pos);
        }
        if (selected) ++counts[cell];
    }

    std::vector<Subgroup> out;
    for (size_t cell = 0; cell < product; ++cell) {
        if (counts[cell] == 0) continue;
        std::vector<Predicate> predicates(axes.size());
        size_t rest = cell;
        for (size_t a = axes.size(); a-- > 0;) {
            const size_t pos = rest % axes[a].levels.size();
            rest /= axes[a].levels.size();
            const size_t level = axes[a].levels[pos];
            const auto& name = dataset.feature(axes[a].feature).name;
            predicates[a] = dataset.feature(axes[a].feature).kind == FeatureKind::categorical
                                ? Predicate::equals(name, dataset.levels(axes[a].feature)[level])
                                : Predicate::in_bin(name, level);
        }
        Subgroup g;
        g.id = subgroup_key(dataset, predicates);
        g.dataset_id = dataset.id();
        g.display_name = display_name_of(dataset, predicates);
        g.predicates = std::move(predicates);
        g.size = counts[cell];
        out.push_back(std::move(g));
    }
    return out;
}

RowMask membership_mask(const Dataset& dataset, const Subgroup& subgroup) {
    if (subgroup.dataset_id != dataset.id()) {
        throw Error(ErrorCode::StaleSubgroup, "subgroup '" + subgroup.id + "' belongs to dataset " +
                                                  subgroup.dataset_id + ", not " + dataset.id());
    }
    RowMask mask(dataset.row_count(), true);
    for (const auto& p : subgroup.predicates) {
        const auto level = static_cast<std::int32_t>(predicate_level(dataset, p));
        const auto codes = dataset.codes(dataset.feature_index(p.feature));
        for (size_t r = 0; r < mask.size(); ++r) {
            if (mask[r] && codes[r] != level) mask[r] = false;
        }
    }
    return mask;
}

RowMask mask_all(const Dataset& dataset) { return RowMask(dataset.row_count(), true); }

size_t popcount(const RowMask& mask) {
    return static_cast<size_t>(std::count(mask.begin(), mask.end(), true));
}

}  // namespace faircompass
