#include <doctest.h>

#include <cmath>
#include <numeric>

#include "faircompass/dataset.hpp"
#include "support.hpp"

using namespace faircompass;
using fctest::code_of;
using fctest::csv;

namespace {


const char* kSix =
    "sex,age,label,prediction\n"
    "M,30,1,1\n"
    "M,40,1,0\n"
    "M,50,0,0\n"
    "F,20,0,1\n"
    "F,?,1,1\n"
    "?,60,0,0\n";

}  // namespace

TEST_CASE("load_dataset basic shape") {
    IngestConfig c;
    c.numeric_columns = {"age"};
    const auto ds = csv(kSix, c);
    CHECK(ds.row_count() == 6);
    CHECK(ds.feature_names() == std::vector<std::string>{"sex", "age"});
    CHECK(ds.feature("sex").kind == FeatureKind::categorical);
    CHECK(ds.feature("sex").categories == std::vector<std::string>{"M", "F", "?"});
    CHECK(ds.feature("age").kind == FeatureKind::numeric);
    CHECK(std::vector<int>(ds.labels().begin(), ds.labels().end()) == std::vector<int>{1, 1, 0, 0, 1, 0});
    CHECK(std::vector<int>(ds.predictions().begin(), ds.predictions().end()) == std::vector<int>{1, 0, 0, 1, 1, 0});
    CHECK(std::isnan(ds.numeric_values(ds.feature_index("age"))[4]));
    CHECK(ds.missing_level(ds.feature_index("age")).has_value());
    CHECK(ds.id().rfind("ds-", 0) == 0);
}

TEST_CASE("feature_distribution on the six-row fixture") {
    const auto h = feature_distribution(csv(kSix), "sex");
    REQUIRE(h.bins.size() == 3);
    CHECK(h.bins[0] == HistogramBin{"M", 3});
    CHECK(h.bins[1] == HistogramBin{"F", 2});
    CHECK(h.bins[2] == HistogramBin{"?", 1});
    CHECK(h.total == 6);
}

TEST_CASE("degenerate distribution") {
    const auto h = feature_distribution(csv("sex,label,prediction\nM,1,1\nM,0,0\nM,1,0\n"), "sex");
    REQUIRE(h.bins.size() == 1);
    CHECK(h.bins[0] == HistogramBin{"M", 3});
}

TEST_CASE("empty body gives zero rows and empty histograms") {
    const auto ds = csv("sex,label,prediction\n");
    CHECK(ds.row_count() == 0);
    const auto h = feature_distribution(ds, "sex");
    CHECK(h.bins.empty());
    CHECK(h.total == 0);
}

TEST_CASE("ingest errors name row and column") {
    SUBCASE("non-binary label at row 3") {
        try {
            csv("x,label,prediction\na,1,1\nb,0,0\nc,2,1\nd,1,0\n");
            FAIL("no error");
        } catch (const IngestError& e) {
            CHECK(e.code() == ErrorCode::NonBinaryLabel);
            CHECK(e.row() == 3);
            CHECK(e.column() == "label");
        }
    }
    SUBCASE("ragged row") {
        try {
            csv("x,label,prediction\na,1,1\nb,0\n");
            FAIL("no error");
        } catch (const IngestError& e) {
            CHECK(e.code() == ErrorCode::RaggedRow);
            CHECK(e.row() == 2);
        }
    }
    SUBCASE("missing column") {
        try {
            csv("x,label\na,1\n");
            FAIL("no error");
        } catch (const IngestError& e) {
            CHECK(e.code() == ErrorCode::MissingColumn);
            CHECK(e.column() == "prediction");
        }
    }
    SUBCASE("empty file") { CHECK(code_of([] { csv(""); }) == ErrorCode::MissingColumn); }
    SUBCASE("unparseable numeric") {
        IngestConfig c;
        c.numeric_columns = {"age"};
        try {
            csv("age,label,prediction\n3,1,1\nold,0,0\n", c);
            FAIL("no error");
        } catch (const IngestError& e) {
            CHECK(e.code() == ErrorCode::UnparseableNumeric);
            CHECK(e.row() == 2);
            CHECK(e.column() == "age");
        }
    }
    SUBCASE("duplicate column") {
        CHECK(code_of([] { csv("x,x,label,prediction\n1,2,1,1\n"); }) == ErrorCode::DuplicateColumn);
    }
}

TEST_CASE("class aliases map label tokens") {
    IngestConfig c;
    c.label_column = "income";
    c.class_aliases = {{"<=50K", 1}, {">50K", 0}};
    const auto ds = csv("sex,income,prediction\nM,<=50K,>50K\nF,>50K,1\n", c);
    CHECK(ds.labels()[0] == 1);
    CHECK(ds.labels()[1] == 0);
    CHECK(ds.predictions()[0] == 0);
    CHECK(code_of([&] { csv("sex,income,prediction\nM,>60K,1\n", c); }) == ErrorCode::NonBinaryLabel);
}

TEST_CASE("bin_numeric equal width and explicit edges") {
    std::string text = "v,label,prediction\n";
    for (int v = 0; v <= 100; ++v) text += std::to_string(v) + ",1,1\n";
    IngestConfig c;
    c.numeric_columns = {"v"};
    const auto ds = csv(text, c);
    CHECK(bin_numeric(ds, "v", EqualWidth{4}).bin_edges == std::vector<double>{0, 25, 50, 75, 100});
    CHECK(bin_numeric(ds, "v", EqualWidth{1}).bin_edges == std::vector<double>{0, 100});
    // idempotent
    CHECK(bin_numeric(ds, "v", EqualWidth{4}) == bin_numeric(ds, "v", EqualWidth{4}));

    const auto spec = bin_numeric(ds, "v", ExplicitEdges{{0, 40, 41, 100}});
    const auto binned = ds.with_binning(spec);
    CHECK(binned.id() != ds.id());
    const auto h = feature_distribution(binned, "v");
    REQUIRE(h.bins.size() == 3);
    CHECK(h.bins[0] == HistogramBin{"[0, 40)", 40});
    CHECK(h.bins[1] == HistogramBin{"40", 1});
    CHECK(h.bins[2] == HistogramBin{"[41, 100]", 60});

    CHECK(code_of([&] { bin_numeric(ds, "v", ExplicitEdges{{10, 50, 100}}); }) == ErrorCode::InvalidEdges);
    CHECK(code_of([&] { bin_numeric(ds, "v", ExplicitEdges{{0, 50, 50, 100}}); }) == ErrorCode::InvalidEdges);
    CHECK(code_of([&] { bin_numeric(ds, "v", EqualWidth{0}); }) == ErrorCode::InvalidEdges);
    CHECK(code_of([&] { bin_numeric(csv(kSix), "sex", EqualWidth{2}); }) == ErrorCode::NotNumeric);
    CHECK(code_of([&] { feature_distribution(ds, "nope"); }) == ErrorCode::UnknownFeature);
}

TEST_CASE("explicit edges on a ten-row hours fixture") {
    IngestConfig c;
    c.numeric_columns = {"hours"};
    const auto ds = csv("hours,label,prediction\n30,1,1\n35,1,1\n40,1,1\n40,0,0\n41,1,1\n45,0,0\n50,0,1\n55,1,1\n"
                        "59,1,0\n59.5,0,0\n",
                        c);
    const auto spec = bin_numeric(ds, "hours", ExplicitEdges{{30, 40, 50, 60}});
    const auto h = feature_distribution(ds.with_binning(spec), "hours");
    REQUIRE(h.bins.size() == 3);
    CHECK(h.bins[0].count == 2);
    CHECK(h.bins[1].count == 4);
    CHECK(h.bins[2].count == 4);
    const auto outside = csv("hours,label,prediction\n30,1,1\n61,1,1\n", c);
    CHECK(code_of([&] { bin_numeric(outside, "hours", ExplicitEdges{{30, 40, 50, 60}}); }) == ErrorCode::InvalidEdges);
}

TEST_CASE("point_bin_edges isolates integer points") {
    IngestConfig c;
    c.numeric_columns = {"h"};
    const auto ds = csv("h,label,prediction\n10,1,1\n40,1,1\n45,0,0\n50,1,0\n99,0,1\n", c);
    const std::vector<double> pts{40, 45, 50};
    const auto edges = point_bin_edges(ds, "h", pts);
    CHECK(edges == std::vector<double>{10, 40, 41, 45, 46, 50, 51, 99});
    const auto binned = ds.with_binning(bin_numeric(ds, "h", ExplicitEdges{edges}));
    CHECK(binned.levels(0) == std::vector<std::string>{"[10, 40)", "40", "[41, 45)", "45", "[46, 50)", "50",
                                                        "[51, 99]"});
}

TEST_CASE("numeric missing values get their own level") {
    IngestConfig c;
    c.numeric_columns = {"age"};
    const auto ds = csv(kSix, c);
    const auto h = feature_distribution(ds, "age");
    CHECK(h.bins.back().label == "?");
    CHECK(h.bins.back().count == 1);
    size_t total = 0;
    for (const auto& b : h.bins) total += b.count;
    CHECK(total == 6);
}

TEST_CASE("determinism and csv round trip") {
    IngestConfig c;
    c.numeric_columns = {"age"};
    const auto a = csv(kSix, c);
    const auto b = csv(kSix, c);
    CHECK(a.id() == b.id());
    CHECK(feature_distribution(a, "age") == feature_distribution(b, "age"));

    const auto back = csv(a.to_csv(), c);
    CHECK(back.row_count() == a.row_count());
    CHECK(std::equal(a.labels().begin(), a.labels().end(), back.labels().begin()));
    CHECK(std::equal(a.predictions().begin(), a.predictions().end(), back.predictions().begin()));
    for (size_t f = 0; f < a.feature_count(); ++f) {
        CHECK(a.feature(f).name == back.feature(f).name);
        CHECK(a.levels(f) == back.levels(f));
        CHECK(std::equal(a.codes(f).begin(), a.codes(f).end(), back.codes(f).begin()));
    }
}

TEST_CASE("histogram conservation on random tables") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const auto t = fctest::random_table(rng);
        const auto ds = csv(t.to_csv());
        for (const auto& name : ds.feature_names()) {
            const auto h = feature_distribution(ds, name);
            size_t sum = 0;
            for (const auto& b : h.bins) sum += b.count;
            CHECK(sum == ds.row_count());
            CHECK(h.total == ds.row_count());
        }
    }
}

TEST_CASE("Adult fixture facts") {
    const auto& ds = fctest::adult();
    CHECK(ds.row_count() == 32561);
    CHECK(ds.feature_count() == 14);
    const auto sex = feature_distribution(ds, "sex");
    CHECK(sex.bins[0].label == "Male");
    CHECK(std::fabs(static_cast<double>(sex.bins[0].count) / 32561.0 - 0.6692) <= 0.001);
    const auto hours = ds.with_binning(
        bin_numeric(ds, "hours-per-week", ExplicitEdges{point_bin_edges(ds, "hours-per-week", std::vector<double>{40})}));
    for (const auto& b : feature_distribution(hours, "hours-per-week").bins) {
        if (b.label == "40") CHECK(std::fabs(static_cast<double>(b.count) / 32561.0 - 0.467) <= 0.01);
    }
}
