#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "faircompass/metrics.hpp"
#include "support.hpp"

using namespace faircompass;
using fctest::code_of;
using fctest::csv;

namespace {

struct Block {
    std::string group;
    int y;
    int yhat;
    int count;
};

std::string build(const std::vector<Block>& blocks, const std::string& header = "g,label,prediction") {
    std::string out = header + "\n";
    for (const auto& b : blocks) {
        for (int i = 0; i < b.count; ++i) {
            out += b.group + "," + std::to_string(b.y) + "," + std::to_string(b.yhat) + "\n";
        }
    }
    return out;
}


std::vector<Subgroup> groups_of(const Dataset& ds) { return generate_subgroups(ds, {{"g", {}}}); }

}  // namespace

TEST_CASE("confusion on the hand fixture") {
    const auto ds = csv("g,label,prediction\na,1,1\na,1,0\na,0,0\na,0,1\n");
    const auto c = confusion(ds, mask_all(ds));
    CHECK(c == ConfusionCounts{1, 1, 1, 1});
    CHECK(confusion(ds, RowMask(4, false)) == ConfusionCounts{});
    const auto perfect = csv("g,label,prediction\na,1,1\na,0,0\n");
    const auto pc = confusion(perfect, mask_all(perfect));
    CHECK(pc.fp == 0);
    CHECK(pc.fn == 0);
    CHECK(metrics(pc).accuracy == 1.0);
    CHECK(code_of([&] { confusion(ds, RowMask(3, true)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("metrics formulas") {
    const auto m = metrics({1, 1, 1, 1});
    CHECK(m.size == 4);
    CHECK(m.accuracy == 0.5);
    CHECK(m.precision == 0.5);
    CHECK(m.recall == 0.5);
    CHECK(m.fpr == 0.5);

    const auto empty = metrics({});
    CHECK(empty.size == 0);
    for (RateKind k : kAllRateKinds) CHECK_FALSE(rate_of(empty, k).has_value());
    CHECK_FALSE(empty.base_rate.has_value());
    CHECK_FALSE(empty.tnr.has_value());

    const auto single = metrics({3, 0, 0, 0});
    CHECK(single.precision == 1.0);
    CHECK(single.recall == 1.0);
    CHECK_FALSE(single.fpr.has_value());
    CHECK_FALSE(single.tnr.has_value());
}

TEST_CASE("rate_for_class") {
    MetricVector v;
    v.size = 10;
    v.positive_rate = 0.3;
    v.negative_rate = 0.7;
    CHECK(rate_for_class(v, 0) == 0.7);
    CHECK(rate_for_class(v, 1) == 0.3);
    CHECK(code_of([] { rate_for_class(metrics({}), 1); }) == ErrorCode::UndefinedRate);
    CHECK(code_of([&] { rate_for_class(v, 2); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("demographic parity examples") {
    SUBCASE("equal rates") {
        const auto ds = csv(build({{"a", 1, 1, 5}, {"a", 0, 0, 5}, {"b", 1, 1, 5}, {"b", 0, 0, 5}}));
        const auto p = demographic_parity(ds, groups_of(ds), 1, 0.1);
        CHECK(p.max_abs_difference == 0.0);
        CHECK(p.satisfied);
        CHECK(p.rate_kind == RateKind::positive_rate);
    }
    SUBCASE("0.9 vs 0.56 in the favourable class") {
        const auto ds = csv(build({{"a", 0, 0, 45}, {"a", 1, 1, 5}, {"b", 0, 0, 28}, {"b", 1, 1, 22}}));
        const auto p = demographic_parity(ds, groups_of(ds), 0, 0.1);
        CHECK(p.rate_kind == RateKind::negative_rate);
        CHECK(p.max_abs_difference == doctest::Approx(0.34).epsilon(1e-12));
        CHECK_FALSE(p.satisfied);
        CHECK(p.min_ratio.value() == doctest::Approx(0.56 / 0.9));
    }
    SUBCASE("three groups") {
        const auto ds = csv(build({{"a", 1, 1, 2},
                                   {"a", 0, 0, 8},
                                   {"b", 1, 1, 5},
                                   {"b", 0, 0, 5},
                                   {"c", 1, 1, 9},
                                   {"c", 0, 0, 1}}));
        const auto p = demographic_parity(ds, groups_of(ds), 1, 0.1);
        CHECK(p.max_abs_difference == doctest::Approx(0.7));
    }
    SUBCASE("one group duplicated") {
        const auto ds = csv(build({{"a", 1, 1, 3}, {"a", 0, 0, 2}}));
        auto g = groups_of(ds);
        g.push_back(g[0]);
        const auto p = demographic_parity(ds, g, 1, 0.1);
        CHECK(p.satisfied);
        CHECK(p.max_abs_difference == 0.0);
    }
    SUBCASE("too few groups") {
        const auto ds = csv(build({{"a", 1, 1, 3}, {"b", 0, 0, 2}}));
        auto g = groups_of(ds);
        CHECK(code_of([&] { demographic_parity(ds, {g[0]}, 1); }) == ErrorCode::TooFewGroups);
    }
}

TEST_CASE("undefined rates are listed but not compared") {
    // group b has no positives so its tpr is undefined
    const auto ds = csv(build({{"a", 1, 1, 3}, {"a", 1, 0, 1}, {"b", 0, 0, 4}, {"c", 1, 1, 1}, {"c", 1, 0, 1}}));
    const auto p = parity_by_rate(ds, groups_of(ds), RateKind::tpr, 0.1);
    REQUIRE(p.per_group.size() == 3);
    CHECK_FALSE(p.per_group[1].rate.has_value());
    CHECK(p.max_abs_difference == doctest::Approx(0.25));
    const auto b = make_subgroup(ds, {Predicate::equals("g", "b")});
    CHECK(code_of([&] { parity_by_rate(ds, {b, b}, RateKind::tpr); }) == ErrorCode::UndefinedRate);
}

TEST_CASE("parity_by_rate examples") {
    SUBCASE("fnr 0.40 vs 0.15") {
        const auto ds = csv(build({{"m", 1, 0, 8}, {"m", 1, 1, 12}, {"m", 0, 0, 10}, {"f", 1, 0, 3}, {"f", 1, 1, 17},
                                   {"f", 0, 0, 10}}));
        const auto p = parity_by_rate(ds, groups_of(ds), RateKind::fnr, 0.1);
        CHECK(p.max_abs_difference == doctest::Approx(0.25));
        CHECK_FALSE(p.satisfied);
    }
    SUBCASE("identical counts give zero for every rate") {
        const auto ds = csv(build({{"a", 1, 1, 3}, {"a", 0, 1, 2}, {"a", 1, 0, 1}, {"a", 0, 0, 4},
                                   {"b", 1, 1, 3}, {"b", 0, 1, 2}, {"b", 1, 0, 1}, {"b", 0, 0, 4}}));
        for (RateKind k : kAllRateKinds) {
            const auto p = parity_by_rate(ds, groups_of(ds), k, 0.0);
            CHECK(p.max_abs_difference == 0.0);
            CHECK(p.satisfied);
        }
    }
    SUBCASE("needs two groups") {
        const auto ds = csv(build({{"a", 1, 1, 3}}));
        CHECK(code_of([&] { parity_by_rate(ds, groups_of(ds), RateKind::fpr); }) == ErrorCode::TooFewGroups);
    }
}

TEST_CASE("conditional statistical parity") {
    // stratum x: a 0.8 vs b 0.5 ; stratum y: a 0.5 vs b 0.45 ; stratum z: only group a
    const std::string text = build({{"x,a", 1, 1, 16}, {"x,a", 0, 0, 4},  {"x,b", 1, 1, 10}, {"x,b", 0, 0, 10},
                                    {"y,a", 1, 1, 10}, {"y,a", 0, 0, 10}, {"y,b", 1, 1, 9},  {"y,b", 0, 0, 11},
                                    {"z,a", 1, 1, 30}, {"w,a", 1, 1, 5},  {"w,b", 0, 0, 5}},
                                   "occ,sex,label,prediction");
    const auto ds = csv(text);
    const auto r = conditional_statistical_parity(ds, "sex", {"occ"}, 1, 0.1, 20);
    REQUIRE(r.strata.size() == 2);
    CHECK(r.strata[0].display_name == "x");
    CHECK(r.strata[0].assessment.max_abs_difference == doctest::Approx(0.3));
    CHECK_FALSE(r.strata[0].assessment.satisfied);
    CHECK(r.strata[1].assessment.max_abs_difference == doctest::Approx(0.05));
    CHECK(r.strata[1].assessment.satisfied);
    CHECK_FALSE(r.satisfied);
    // z has one sensitive group, w is below the minimum size
    REQUIRE(r.excluded.size() == 2);
    CHECK_FALSE(r.warnings.empty());

    CHECK(code_of([&] { conditional_statistical_parity(ds, "sex", {"sex"}, 1); }) == ErrorCode::OverlappingAttributes);
    CHECK(code_of([&] { conditional_statistical_parity(ds, "sex", {"occ"}, 1, 0.1, 1000); }) ==
          ErrorCode::NoQualifyingStrata);
    CHECK(code_of([&] { conditional_statistical_parity(ds, "sex", {}, 1); }) == ErrorCode::MissingInput);
    CHECK(code_of([&] { conditional_statistical_parity(ds, "sex", {"nope"}, 1); }) == ErrorCode::UnknownFeature);
}

TEST_CASE("metric_deviation") {
    MetricVector sub, all;
    sub.fnr = 0.2;
    all.fnr = 0.3;
    CHECK(metric_deviation(sub, all, RateKind::fnr) == doctest::Approx(-0.1));
    CHECK(code_of([&] { metric_deviation(sub, all, RateKind::fpr); }) == ErrorCode::UndefinedRate);
    const auto ds = csv(build({{"a", 1, 1, 3}, {"a", 0, 1, 2}, {"a", 1, 0, 1}}));
    const auto whole = metrics(confusion(ds, mask_all(ds)));
    for (RateKind k : {RateKind::accuracy, RateKind::positive_rate, RateKind::fnr}) {
        CHECK(metric_deviation(whole, whole, k) == 0.0);
    }
}

TEST_CASE("invariants on random tables") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto t = fctest::random_table(rng);
        const auto ds = csv(t.to_csv());
        const auto groups = generate_subgroups(ds, {{"f0", {}}});

        // decomposition over a partition
        ConfusionCounts sum;
        for (const auto& g : groups) sum += confusion(ds, membership_mask(ds, g));
        CHECK(sum == confusion(ds, mask_all(ds)));

        // complement identities
        for (const auto& g : groups) {
            const auto m = metrics(confusion(ds, membership_mask(ds, g)));
            if (m.fpr && m.tnr) CHECK(*m.fpr + *m.tnr == doctest::Approx(1.0).epsilon(1e-15));
            if (m.fnr && m.recall) CHECK(*m.fnr + *m.recall == doctest::Approx(1.0).epsilon(1e-15));
            if (m.size > 0) CHECK(*m.positive_rate + *m.negative_rate == doctest::Approx(1.0).epsilon(1e-15));
        }
        if (groups.size() < 2) continue;

        // order invariance and class symmetry
        auto shuffled = groups;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto a = demographic_parity(ds, groups, 1, 0.1);
        const auto b = demographic_parity(ds, shuffled, 1, 0.1);
        CHECK(a.max_abs_difference == b.max_abs_difference);
        CHECK(a.satisfied == b.satisfied);
        const auto c = demographic_parity(ds, groups, 0, 0.1);
        CHECK(std::fabs(a.max_abs_difference - c.max_abs_difference) <= 1e-12);
    }
}
