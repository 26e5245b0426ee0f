#pragma once

// Randomized comparison of the metric engine against the row-scan oracle.

#include <cmath>
#include <sstream>

#include "faircompass/metrics.hpp"
#include "faircompass/subgroup.hpp"
#include "oracle.hpp"

namespace oracle {

struct SuiteResult {
    size_t datasets = 0;
    size_t comparisons = 0;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

inline constexpr double kTolerance = 1e-12;

class Checker {
public:
    explicit Checker(SuiteResult& r, size_t dataset) : r_(r), dataset_(dataset) {}

    void same(const Rate& engine, const Rate& expected, const std::string& what) {
        ++r_.comparisons;
        if (engine.has_value() != expected.has_value() ||
            (engine && std::fabs(*engine - *expected) > kTolerance)) {
            fail(what, engine ? std::to_string(*engine) : "undefined", expected ? std::to_string(*expected) : "undefined");
        }
    }
    void same(double engine, double expected, const std::string& what) { same(Rate(engine), Rate(expected), what); }
    void same(bool engine, bool expected, const std::string& what) {
        ++r_.comparisons;
        if (engine != expected) fail(what, engine ? "true" : "false", expected ? "true" : "false");
    }
    void same(size_t engine, size_t expected, const std::string& what) {
        ++r_.comparisons;
        if (engine != expected) fail(what, std::to_string(engine), std::to_string(expected));
    }

private:
    void fail(const std::string& what, const std::string& got, const std::string& want) {
        if (r_.failures.size() < 20) {
            r_.failures.push_back("dataset " + std::to_string(dataset_) + ": " + what + " engine=" + got +
                                  " oracle=" + want);
        }
    }
    SuiteResult& r_;
    size_t dataset_;
};

inline const char* rate_name(faircompass::RateKind k) {
    using faircompass::RateKind;
    switch (k) {
        case RateKind::positive_rate: return "positive_rate";
        case RateKind::negative_rate: return "negative_rate";
        case RateKind::tpr: return "recall";
        case RateKind::fpr: return "fpr";
        case RateKind::fnr: return "fnr";
        case RateKind::precision: return "precision";
        case RateKind::accuracy: return "accuracy";
    }
    return "";
}

inline SuiteResult run_suite(size_t datasets, std::uint64_t seed) {
    namespace fc = faircompass;
    SuiteResult result;
    std::mt19937_64 rng(seed);
    for (size_t d = 0; d < datasets; ++d) {
        Checker check(result, d);
        const auto t = fctest::random_table(rng, 200, 4);
        const auto ds = fctest::csv(t.to_csv());
        ++result.datasets;
        const size_t nf = t.feature_names.size();

        // random subgroups: one or two predicates drawn from observed values
        std::vector<Conjunction> conj;
        std::vector<fc::Subgroup> groups;
        const size_t ng = t.label.empty() ? 0 : std::uniform_int_distribution<size_t>(2, 6)(rng);
        for (size_t g = 0; g < ng; ++g) {
            Conjunction c;
            std::vector<fc::Predicate> preds;
            const size_t row = std::uniform_int_distribution<size_t>(0, t.label.size() - 1)(rng);
            const size_t f1 = std::uniform_int_distribution<size_t>(0, nf - 1)(rng);
            c.push_back({f1, t.values[row][f1]});
            if (nf > 1 && std::bernoulli_distribution(0.5)(rng)) {
                size_t f2 = std::uniform_int_distribution<size_t>(0, nf - 2)(rng);
                if (f2 >= f1) ++f2;
                // sometimes a value from another row, which may leave the conjunction empty
                const size_t row2 = std::uniform_int_distribution<size_t>(0, t.label.size() - 1)(rng);
                c.push_back({f2, t.values[row2][f2]});
            }
            for (const auto& [f, v] : c) preds.push_back(fc::Predicate::equals(t.feature_names[f], v));
            conj.push_back(c);
            groups.push_back(fc::make_subgroup(ds, preds));
        }

        const auto whole = fc::metrics(fc::confusion(ds, fc::mask_all(ds)));
        const auto whole_oracle = rates(count(t, {}));
        std::vector<fc::MetricVector> engine_vectors;
        for (size_t g = 0; g < groups.size(); ++g) {
            const auto k = count(t, conj[g]);
            const auto c = fc::confusion(ds, fc::membership_mask(ds, groups[g]));
            check.same(c.tp, static_cast<size_t>(k.tp), "tp");
            check.same(c.fp, static_cast<size_t>(k.fp), "fp");
            check.same(c.tn, static_cast<size_t>(k.tn), "tn");
            check.same(c.fn, static_cast<size_t>(k.fn), "fn");
            const auto m = fc::metrics(c);
            engine_vectors.push_back(m);
            const auto o = rates(k);
            check.same(m.accuracy, o.at("accuracy"), "accuracy");
            check.same(m.precision, o.at("precision"), "precision");
            check.same(m.recall, o.at("recall"), "recall");
            check.same(m.tnr, o.at("tnr"), "tnr");
            check.same(m.fpr, o.at("fpr"), "fpr");
            check.same(m.fnr, o.at("fnr"), "fnr");
            check.same(m.positive_rate, o.at("positive_rate"), "positive_rate");
            check.same(m.negative_rate, o.at("negative_rate"), "negative_rate");
            check.same(m.base_rate, o.at("base_rate"), "base_rate");

            for (fc::RateKind kind : fc::kAllRateKinds) {
                const Rate sub = o.at(rate_name(kind));
                const Rate all = whole_oracle.at(rate_name(kind));
                if (!sub || !all) continue;
                check.same(fc::metric_deviation(m, whole, kind), *sub - *all, "metric_deviation");
            }
        }

        const double threshold = std::uniform_real_distribution<double>(0.0, 0.3)(rng);
        if (groups.size() >= 2) {
            for (int fav : {0, 1}) {
                std::vector<Rate> rs;
                for (const auto& c : conj) rs.push_back(rates(count(t, c)).at(fav ? "positive_rate" : "negative_rate"));
                const auto expected = parity(rs, threshold);
                if (expected.defined < 2) continue;
                const auto p = fc::demographic_parity(ds, groups, fav, threshold);
                check.same(p.max_abs_difference, expected.max_abs_difference, "dp.max_abs_difference");
                check.same(p.min_ratio, expected.min_ratio, "dp.min_ratio");
                check.same(p.satisfied, expected.satisfied, "dp.satisfied");
            }
            for (fc::RateKind kind : fc::kAllRateKinds) {
                std::vector<Rate> rs;
                for (const auto& c : conj) rs.push_back(rates(count(t, c)).at(rate_name(kind)));
                const auto expected = parity(rs, threshold);
                if (expected.defined < 2) continue;
                const auto p = fc::parity_by_rate(ds, groups, kind, threshold);
                check.same(p.max_abs_difference, expected.max_abs_difference, "pbr.max_abs_difference");
                check.same(p.min_ratio, expected.min_ratio, "pbr.min_ratio");
                check.same(p.satisfied, expected.satisfied, "pbr.satisfied");
                for (size_t g = 0; g < groups.size(); ++g) check.same(p.per_group[g].rate, rs[g], "pbr.rate");
            }
        }

        if (nf >= 2 && !t.label.empty()) {
            const size_t sens = std::uniform_int_distribution<size_t>(0, nf - 1)(rng);
            std::vector<size_t> legit;
            for (size_t f = 0; f < nf; ++f) {
                if (f != sens && (legit.empty() || std::bernoulli_distribution(0.5)(rng))) legit.push_back(f);
            }
            std::vector<std::string> legit_names;
            for (size_t f : legit) legit_names.push_back(t.feature_names[f]);
            const size_t min_size = std::uniform_int_distribution<size_t>(1, 12)(rng);
            const int fav = std::bernoulli_distribution(0.5)(rng) ? 1 : 0;
            const auto expected = stratified(t, sens, legit, fav, threshold, min_size);
            try {
                const auto r = fc::conditional_statistical_parity(ds, t.feature_names[sens], legit_names, fav,
                                                                  threshold, min_size);
                check.same(r.strata.size(), expected.size(), "csp.strata");
                bool all = true;
                for (const auto& s : r.strata) {
                    auto it = expected.find(s.display_name);
                    if (it == expected.end()) {
                        check.same(false, true, "csp.stratum " + s.display_name);
                        continue;
                    }
                    check.same(s.assessment.max_abs_difference, it->second.parity.max_abs_difference, "csp.max_diff");
                    check.same(s.assessment.satisfied, it->second.parity.satisfied, "csp.satisfied");
                    for (const auto& g : s.assessment.per_group) {
                        const auto label = g.display_name.substr(s.display_name.size() + 2);
                        check.same(g.rate, it->second.group_rates.at(label), "csp.group_rate");
                    }
                    all = all && it->second.parity.satisfied;
                }
                check.same(r.satisfied, all, "csp.all");
            } catch (const fc::Error& e) {
                check.same(e.code() == fc::ErrorCode::NoQualifyingStrata && expected.empty(), true,
                           std::string("csp error ") + e.what());
            }
        }
    }
    return result;
}

}  // namespace oracle
