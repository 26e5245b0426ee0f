#pragma once

#include <optional>
#include <string>
#include <vector>

#include "faircompass/dataset.hpp"

namespace faircompass {

using RowMask = std::vector<bool>;

struct Predicate {
    enum class Match { equals, in_bin };

    std::string feature;
    Match match = Match::equals;
    std::string category;  // equals
    size_t bin_index = 0;  // in_bin; the missing-value level of a numeric feature is bins()

    static Predicate equals(std::string feature, std::string category);
    static Predicate in_bin(std::string feature, size_t bin_index);

    bool operator==(const Predicate&) const = default;
};

// Conjunction of predicates over distinct features, bound to one dataset.
struct Subgroup {
    std::string id;
    std::string dataset_id;
    std::vector<Predicate> predicates;
    std::string display_name;
    size_t size = 0;

    bool operator==(const Subgroup&) const = default;
};

// Level index selected by `p`; throws UnknownFeature / UnknownValue.
size_t predicate_level(const Dataset& dataset, const Predicate& p);
std::string predicate_value_label(const Dataset& dataset, const Predicate& p);

// Canonical id: "sex=Male&occupation=Sales" in predicate order.
std::string subgroup_key(const Dataset& dataset, const std::vector<Predicate>& predicates);

// Validates the predicates and materializes the membership count. Zero-size
// subgroups are allowed here. An empty `id` selects the canonical key.
Subgroup make_subgroup(const Dataset& dataset, std::vector<Predicate> predicates, std::string id = {});

// Predicate on the feature's level with the given label ("Male", "40", "?").
Predicate predicate_for_level(const Dataset& dataset, const std::string& feature, const std::string& level);

struct FeatureSelection {
    std::string feature;
    // Level labels to include, in output order; empty means every level.
    std::vector<std::string> values;
};

inline constexpr size_t kDefaultProductCap = 1000;

// Cartesian product of the selected levels, one subgroup per non-empty
// combination. Ordered by feature order, then value order.
std::vector<Subgroup> generate_subgroups(const Dataset& dataset, const std::vector<FeatureSelection>& selections,
                                         size_t product_cap = kDefaultProductCap);

RowMask membership_mask(const Dataset& dataset, const Subgroup& subgroup);
RowMask mask_all(const Dataset& dataset);
size_t popcount(const RowMask& mask);

}  // namespace faircompass
