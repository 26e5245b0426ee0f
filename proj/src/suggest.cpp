#include "faircompass/suggest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "faircompass/error.hpp"

namespace faircompass {

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// Nearest centroid per point (lowest index wins ties); returns the inertia.
double assign(const std::vector<std::vector<double>>& points, const std::vector<std::vector<double>>& centroids,
              std::vector<size_t>& assignment) {
    double inertia = 0.0;
    for (size_t i = 0; i < points.size(); ++i) {
        size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t c = 0; c < centroids.size(); ++c) {
            const double d = squared_distance(points[i], centroids[c]);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        assignment[i] = best;
        inertia += best_d;
    }
    return inertia;
}

std::vector<double> mean_vector(const Encoding& enc, const RowMask& mask) {
    const size_t dims = enc.column_names.size();
    std::vector<double> mean(dims, 0.0);
    size_t n = 0;
    for (const auto& row : enc.rows) {
        if (!mask[row.row_index]) continue;
        for (size_t d = 0; d < dims; ++d) mean[d] += row.values[d];
        ++n;
    }
    if (n == 0) return {};
    for (double& v : mean) v /= static_cast<double>(n);
    return mean;
}

}  // namespace

Encoding encode_instances(const Dataset& dataset) {
    if (dataset.row_count() == 0) throw Error(ErrorCode::EmptyDataset, "cannot encode an empty dataset");
    Encoding enc;
    struct Block {
        size_t feature;
        size_t offset;
        bool numeric;
        double lo = 0.0;
        double range = 0.0;
    };
    std::vector<Block> blocks;
    for (size_t f = 0; f < dataset.feature_count(); ++f) {
        const auto& spec = dataset.feature(f);
        Block b{f, enc.column_names.size(), spec.kind == FeatureKind::numeric};
        if (b.numeric) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (double v : dataset.numeric_values(f)) {
                if (std::isnan(v)) continue;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            b.lo = lo;
            b.range = hi > lo ? hi - lo : 0.0;
            enc.column_names.push_back(spec.name);
        } else {
            for (const auto& c : spec.categories) enc.column_names.push_back(spec.name + "=" + c);
        }
        blocks.push_back(b);
    }
    const size_t dims = enc.column_names.size();
    enc.rows.resize(dataset.row_count());
    for (size_t r = 0; r < dataset.row_count(); ++r) {
        enc.rows[r].row_index = r;
        enc.rows[r].values.assign(dims, 0.0);
    }
    for (const auto& b : blocks) {
        if (b.numeric) {
            const auto values = dataset.numeric_values(b.feature);
            for (size_t r = 0; r < values.size(); ++r) {
                if (!std::isnan(values[r]) && b.range > 0.0) {
                    enc.rows[r].values[b.offset] = (values[r] - b.lo) / b.range;
                }
            }
        } else {
            const auto codes = dataset.codes(b.feature);
            for (size_t r = 0; r < codes.size(); ++r) {
                enc.rows[r].values[b.offset + static_cast<size_t>(codes[r])] = 1.0;
            }
        }
    }
    return enc;
}

KMeansResult kmeans(const std::vector<std::vector<double>>& points, size_t k, std::uint64_t seed, size_t max_iter) {
    const size_t n = points.size();
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
    if (k > n) {
        throw Error(ErrorCode::KTooLarge, "k=" + std::to_string(k) + " exceeds " + std::to_string(n) + " points");
    }
    if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be at least 1");

    std::mt19937_64 rng(seed);
    KMeansResult out;
    std::vector<bool> chosen(n, false);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    size_t first = std::uniform_int_distribution<size_t>(0, n - 1)(rng);
    out.centroids.push_back(points[first]);
    chosen[first] = true;
    while (out.centroids.size() < k) {
        double total = 0.0;
        for (size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(points[i], out.centroids.back()));
            total += chosen[i] ? 0.0 : d2[i];
        }
        size_t pick = n;
        if (total > 0.0) {
            double target = std::uniform_real_distribution<double>(0.0, total)(rng);
            for (size_t i = 0; i < n; ++i) {
                if (chosen[i] || d2[i] == 0.0) continue;
                pick = i;
                target -= d2[i];
                if (target < 0.0) break;
            }
        } else {
            // every remaining point coincides with a centroid
            std::vector<size_t> rest;
            for (size_t i = 0; i < n; ++i) {
                if (!chosen[i]) rest.push_back(i);
            }
            pick = rest[std::uniform_int_distribution<size_t>(0, rest.size() - 1)(rng)];
        }
        chosen[pick] = true;
        out.centroids.push_back(points[pick]);
    }

    out.assignment.assign(n, 0);
    out.inertia_history.push_back(assign(points, out.centroids, out.assignment));
    const size_t dims = points.empty() ? 0 : points.front().size();
    std::vector<size_t> previous;
    for (size_t iter = 0; iter < max_iter; ++iter) {
        std::vector<std::vector<double>> sums(k, std::vector<double>(dims, 0.0));
        std::vector<size_t> counts(k, 0);
        for (size_t i = 0; i < n; ++i) {
            auto& s = sums[out.assignment[i]];
            for (size_t d = 0; d < dims; ++d) s[d] += points[i][d];
            ++counts[out.assignment[i]];
        }
        for (size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            for (size_t d = 0; d < dims; ++d) out.centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
        }
        previous = out.assignment;
        out.inertia_history.push_back(assign(points, out.centroids, out.assignment));
        out.iterations = iter + 1;
        if (out.assignment == previous) {
            out.converged = true;
            break;
        }
    }
    return out;
}

std::optional<ClusterDescription> describe_cluster(const Dataset& dataset, const std::vector<size_t>& member_rows,
                                                   double dominance_threshold) {
    if (member_rows.empty()) return std::nullopt;
    std::vector<Predicate> predicates;
    std::vector<double> dominance;
    for (size_t f = 0; f < dataset.feature_count(); ++f) {
        const auto& spec = dataset.feature(f);
        if (spec.kind != FeatureKind::categorical) continue;
        std::vector<size_t> counts(spec.categories.size(), 0);
        const auto codes = dataset.codes(f);
        for (size_t r : member_rows) ++counts[static_cast<size_t>(codes[r])];
        const auto best = std::max_element(counts.begin(), counts.end());
        const double share = static_cast<double>(*best) / static_cast<double>(member_rows.size());
        if (share >= dominance_threshold) {
            predicates.push_back(
                Predicate::equals(spec.name, spec.categories[static_cast<size_t>(best - counts.begin())]));
            dominance.push_back(share);
        }
    }
    if (predicates.empty()) return std::nullopt;
    return ClusterDescription{make_subgroup(dataset, std::move(predicates)), std::move(dominance)};
}

std::vector<SuggestedSubgroup> suggest_subgroups(const Dataset& dataset, const SuggestOptions& options) {
    const Encoding enc = encode_instances(dataset);
    std::vector<std::vector<double>> points;
    points.reserve(enc.rows.size());
    for (const auto& row : enc.rows) points.push_back(row.values);
    const size_t k = std::min(options.k, points.size());
    const auto clusters = kmeans(points, k, options.seed, options.max_iter);

    std::vector<std::vector<size_t>> members(k);
    for (size_t i = 0; i < clusters.assignment.size(); ++i) members[clusters.assignment[i]].push_back(i);

    const Rate overall = rate_of(metrics(confusion(dataset, mask_all(dataset))), options.ranking_rate);
    std::map<std::string, SuggestedSubgroup> unique;
    for (size_t c = 0; c < k; ++c) {
        auto desc = describe_cluster(dataset, members[c], options.dominance_threshold);
        if (!desc || desc->subgroup.size == 0) continue;
        SuggestedSubgroup s;
        s.source_cluster = c;
        s.dominance = std::move(desc->dominance);
        s.subgroup = std::move(desc->subgroup);
        s.rate = rate_of(metrics(confusion(dataset, membership_mask(dataset, s.subgroup))), options.ranking_rate);
        s.notability = (s.rate && overall) ? std::abs(*s.rate - *overall) : 0.0;
        auto it = unique.find(s.subgroup.id);
        if (it == unique.end()) {
            unique.emplace(s.subgroup.id, std::move(s));
        } else if (s.notability > it->second.notability) {
            it->second = std::move(s);
        }
    }
    std::vector<SuggestedSubgroup> out;
    out.reserve(unique.size());
    for (auto& [id, s] : unique) out.push_back(std::move(s));
    std::sort(out.begin(), out.end(), [](const SuggestedSubgroup& a, const SuggestedSubgroup& b) {
        if (a.notability != b.notability) return a.notability > b.notability;
        if (a.subgroup.size != b.subgroup.size) return a.subgroup.size > b.subgroup.size;
        return a.subgroup.id < b.subgroup.id;
    });
    return out;
}

std::vector<SimilarSubgroup> similar_subgroups(const Subgroup& target, const std::vector<Subgroup>& candidates,
                                               const Dataset& dataset) {
    for (const auto& g : candidates) membership_mask(dataset, g);  // StaleSubgroup check up front
    const auto target_mask = membership_mask(dataset, target);
    if (candidates.empty()) return {};
    const Encoding enc = encode_instances(dataset);
    const auto centre = mean_vector(enc, target_mask);

    std::vector<SimilarSubgroup> out;
    for (const auto& g : candidates) {
        if (g.id == target.id) continue;
        SimilarSubgroup s{g, std::nullopt};
        const auto mean = mean_vector(enc, membership_mask(dataset, g));
        if (!mean.empty() && !centre.empty()) s.distance = std::sqrt(squared_distance(mean, centre));
        out.push_back(std::move(s));
    }
    std::stable_sort(out.begin(), out.end(), [](const SimilarSubgroup& a, const SimilarSubgroup& b) {
        if (a.distance.has_value() != b.distance.has_value()) return a.distance.has_value();
        return a.distance && *a.distance < *b.distance;
    });
    return out;
}

}  // namespace faircompass
