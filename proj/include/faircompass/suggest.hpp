#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "faircompass/dataset.hpp"
#include "faircompass/metrics.hpp"
#include "faircompass/subgroup.hpp"

namespace faircompass {

// One-hot categorical levels followed by min-max scaled numeric values, in
// feature order. Constant numeric columns and missing numeric cells encode as 0.
struct InstanceVector {
    size_t row_index = 0;
    std::vector<double> values;
};

struct Encoding {
    std::vector<std::string> column_names;  // "sex=Male", "hours-per-week"
    std::vector<InstanceVector> rows;
};

Encoding encode_instances(const Dataset& dataset);

struct KMeansResult {
    std::vector<size_t> assignment;
    std::vector<std::vector<double>> centroids;
    // Within-cluster sum of squares after seeding and after every Lloyd step;
    // non-increasing.
    std::vector<double> inertia_history;
    size_t iterations = 0;
    bool converged = false;

    double inertia() const { return inertia_history.empty() ? 0.0 : inertia_history.back(); }
};

// Lloyd's algorithm with k-means++ seeding driven by std::mt19937_64(seed).
// An emptied cluster keeps its previous centroid.
KMeansResult kmeans(const std::vector<std::vector<double>>& points, size_t k, std::uint64_t seed,
                    size_t max_iter = 100);

struct ClusterDescription {
    Subgroup subgroup;
    std::vector<double> dominance;  // per predicate, fraction of cluster rows holding that value
};

inline constexpr double kDefaultDominanceThreshold = 0.8;
inline constexpr size_t kDefaultClusters = 10;
inline constexpr std::uint64_t kDefaultSeed = 42;

// Emits a predicate for every categorical feature whose most frequent value
// within the cluster reaches the threshold.
std::optional<ClusterDescription> describe_cluster(const Dataset& dataset, const std::vector<size_t>& member_rows,
                                                   double dominance_threshold = kDefaultDominanceThreshold);

struct SuggestedSubgroup {
    Subgroup subgroup;
    size_t source_cluster = 0;
    std::vector<double> dominance;
    double notability = 0.0;  // |rate(subgroup) - rate(dataset)|; 0 when undefined
    Rate rate;
};

struct SuggestOptions {
    RateKind ranking_rate = RateKind::accuracy;
    size_t k = kDefaultClusters;
    std::uint64_t seed = kDefaultSeed;
    double dominance_threshold = kDefaultDominanceThreshold;
    size_t max_iter = 100;
};

// Cluster, describe, deduplicate by predicate set, then rank by descending
// notability with ties broken by size (descending) and id.
std::vector<SuggestedSubgroup> suggest_subgroups(const Dataset& dataset, const SuggestOptions& options = {});

struct SimilarSubgroup {
    Subgroup subgroup;
    std::optional<double> distance;  // nullopt for empty groups, which sort last
};

// Euclidean distance between mean encoded vectors, ascending. Candidates
// sharing the target's id are skipped.
std::vector<SimilarSubgroup> similar_subgroups(const Subgroup& target, const std::vector<Subgroup>& candidates,
                                               const Dataset& dataset);

}  // namespace faircompass
