#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "faircompass/suggest.hpp"
#include "planted.hpp"
#include "support.hpp"

using namespace faircompass;
using fctest::code_of;
using fctest::csv;
using fctest::exhaustive_best;
using fctest::planted_fixture;

namespace {

std::vector<std::vector<double>> points_of(const Encoding& e) {
    std::vector<std::vector<double>> out;
    for (const auto& r : e.rows) out.push_back(r.values);
    return out;
}

}  // namespace

TEST_CASE("one-hot encoding") {
    const auto e = encode_instances(csv("c,label,prediction\nx,1,1\ny,0,0\nz,1,0\nx,0,1\n"));
    CHECK(e.column_names == std::vector<std::string>{"c=x", "c=y", "c=z"});
    for (const auto& r : e.rows) {
        CHECK(r.values.size() == 3);
        double sum = 0;
        for (double v : r.values) sum += v;
        CHECK(sum == 1.0);
    }
    CHECK(code_of([] { encode_instances(csv("c,label,prediction\n")); }) == ErrorCode::EmptyDataset);
}

TEST_CASE("mixed encoding by hand") {
    IngestConfig c;
    c.numeric_columns = {"n", "k"};
    const auto e = encode_instances(
        csv("s,n,k,label,prediction\nM,10,5,1,1\nF,20,5,0,0\nM,30,5,1,0\nF,10,5,0,1\nM,?,5,1,1\n", c));
    CHECK(e.column_names == std::vector<std::string>{"s=M", "s=F", "n", "k"});
    CHECK(e.rows[0].values == std::vector<double>{1, 0, 0.0, 0});
    CHECK(e.rows[1].values == std::vector<double>{0, 1, 0.5, 0});
    CHECK(e.rows[2].values == std::vector<double>{1, 0, 1.0, 0});
    CHECK(e.rows[3].values == std::vector<double>{0, 1, 0.0, 0});
    CHECK(e.rows[4].values == std::vector<double>{1, 0, 0.0, 0});  // missing and constant encode as 0
}

TEST_CASE("kmeans basics") {
    const std::vector<std::vector<double>> pts{{0, 0}, {2, 0}, {0, 4}, {2, 4}};
    SUBCASE("k = 1 gives the mean") {
        const auto r = kmeans(pts, 1, 1);
        CHECK(r.centroids[0] == std::vector<double>{1, 2});
        CHECK(r.converged);
    }
    SUBCASE("k = n gives zero inertia") {
        const auto r = kmeans(pts, 4, 9);
        CHECK(r.inertia() == 0.0);
        std::set<size_t> labels(r.assignment.begin(), r.assignment.end());
        CHECK(labels.size() == 4);
    }
    SUBCASE("errors") {
        CHECK(code_of([&] { kmeans(pts, 5, 1); }) == ErrorCode::KTooLarge);
        CHECK(code_of([&] { kmeans(pts, 0, 1); }) == ErrorCode::InvalidArgument);
        CHECK(code_of([&] { kmeans(pts, 2, 1, 0); }) == ErrorCode::InvalidArgument);
    }
}

TEST_CASE("kmeans recovers planted blobs") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.0, 0.3);
    std::vector<std::vector<double>> pts;
    std::vector<int> truth;
    for (int i = 0; i < 60; ++i) {
        const int blob = i % 2;
        pts.push_back({blob * 10.0 + noise(rng), blob * 10.0 + noise(rng)});
        truth.push_back(blob);
    }
    const auto r = kmeans(pts, 2, 42);
    size_t direct = 0;
    size_t swapped = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        direct += static_cast<int>(r.assignment[i]) == truth[i];
        swapped += static_cast<int>(r.assignment[i]) != truth[i];
    }
    CHECK(std::max(direct, swapped) == pts.size());
}

TEST_CASE("kmeans inertia is non-increasing and seeded") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        std::uniform_real_distribution<double> u(0, 1);
        std::vector<std::vector<double>> pts(80, std::vector<double>(3));
        for (auto& p : pts) {
            for (auto& v : p) v = u(rng);
        }
        const size_t k = 1 + trial % 8;
        const auto a = kmeans(pts, k, trial);
        for (size_t i = 1; i < a.inertia_history.size(); ++i) {
            CHECK(a.inertia_history[i] <= a.inertia_history[i - 1] + 1e-12);
        }
        const auto b = kmeans(pts, k, trial);
        CHECK(a.assignment == b.assignment);
        CHECK(a.centroids == b.centroids);
    }
}

TEST_CASE("describe_cluster") {
    std::string text = "sex,occ,label,prediction\n";
    for (int i = 0; i < 20; ++i) {
        text += std::string(i < 18 ? "M" : "F") + "," + (i < 17 ? "Sales" : (i % 2 ? "Tech" : "Admin")) + ",1,1\n";
    }
    text += "F,Tech,0,0\nF,Admin,0,0\n";
    const auto ds = csv(text);
    std::vector<size_t> members(20);
    std::iota(members.begin(), members.end(), 0);
    const auto d = describe_cluster(ds, members, 0.8);
    REQUIRE(d.has_value());
    CHECK(d->subgroup.display_name == "M, Sales");
    CHECK(d->dominance == std::vector<double>{0.9, 0.85});
    CHECK_FALSE(describe_cluster(ds, members, 0.95).has_value());

    const auto uniform = csv("a,b,label,prediction\nx,p,1,1\ny,q,1,1\nx,q,0,0\ny,p,0,0\n");
    CHECK_FALSE(describe_cluster(uniform, {0, 1, 2, 3}, 0.8).has_value());
    const auto all_f = csv("sex,label,prediction\nF,1,1\nF,0,0\nM,1,1\n");
    CHECK(describe_cluster(all_f, {0, 1}, 0.8)->subgroup.display_name == "F");
}

TEST_CASE("planted bias is recovered") {
    const auto ds = csv(planted_fixture(true));
    const auto s = suggest_subgroups(ds, {RateKind::accuracy, 10, 42, 0.8, 100});
    REQUIRE_FALSE(s.empty());
    const double best = exhaustive_best(ds, RateKind::accuracy);
    CHECK(best == doctest::Approx(0.8333333 - 0.4));
    CHECK(std::fabs(s[0].notability - best) <= 0.05);
    bool has_planted = true;
    for (const auto& p : {Predicate::equals("sex", "F"), Predicate::equals("occ", "B")}) {
        has_planted = has_planted &&
                      std::find(s[0].subgroup.predicates.begin(), s[0].subgroup.predicates.end(), p) !=
                          s[0].subgroup.predicates.end();
    }
    CHECK(has_planted);
    for (const auto& g : s) {
        CHECK(g.subgroup.size > 0);
        for (double d : g.dominance) CHECK(d >= 0.8);
    }
    // deterministic
    const auto again = suggest_subgroups(ds, {RateKind::accuracy, 10, 42, 0.8, 100});
    REQUIRE(again.size() == s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        CHECK(again[i].subgroup == s[i].subgroup);
        CHECK(again[i].notability == s[i].notability);
    }
}

TEST_CASE("uniform performance ranks by size") {
    const auto ds = csv(planted_fixture(false));
    const auto s = suggest_subgroups(ds, {RateKind::accuracy, 4, 1, 0.8, 100});
    REQUIRE_FALSE(s.empty());
    for (size_t i = 0; i < s.size(); ++i) {
        CHECK(s[i].notability <= 1e-12);
        if (i > 0) CHECK(s[i - 1].subgroup.size >= s[i].subgroup.size);
    }
}

TEST_CASE("similar subgroups") {
    const auto ds = csv(
        "sex,occ,label,prediction\nM,A,1,1\nM,A,0,0\nM,B,1,0\nF,A,0,1\nF,B,1,1\nF,B,0,0\nM,B,1,1\nF,A,1,1\nM,A,0,0\n"
        "F,B,0,1\n");
    const auto target = make_subgroup(ds, {Predicate::equals("sex", "M"), Predicate::equals("occ", "A")});
    const auto twin = make_subgroup(ds, target.predicates, "twin");
    const auto sibling = make_subgroup(ds, {Predicate::equals("sex", "M"), Predicate::equals("occ", "B")});
    const auto disjoint = make_subgroup(ds, {Predicate::equals("sex", "F"), Predicate::equals("occ", "B")});
    const auto r = similar_subgroups(target, {disjoint, sibling, target, twin}, ds);
    REQUIRE(r.size() == 3);
    CHECK(r[0].subgroup.id == "twin");
    CHECK(r[0].distance.value() == 0.0);
    CHECK(r[1].subgroup.id == sibling.id);
    CHECK(r[2].subgroup.id == disjoint.id);
    CHECK(r[1].distance.value() == doctest::Approx(std::sqrt(2.0)));
    CHECK(similar_subgroups(target, {}, ds).empty());

    const auto other = csv("sex,occ,label,prediction\nM,A,1,1\n");
    const auto stale = make_subgroup(other, {Predicate::equals("sex", "M")});
    CHECK(code_of([&] { similar_subgroups(target, {stale}, ds); }) == ErrorCode::StaleSubgroup);
}
