#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "naed/rng.hpp"
#include "naed/signal.hpp"

using namespace naed;
using naed::testing::makeSeries;

TEST_CASE("midpoint of a linear segment") {
    const auto ts = makeSeries("a", {0.0, 1.0}, {0.0, 2.0});
    CHECK(interpolate(ts, 0.5)[0] == doctest::Approx(1.0));
}

TEST_CASE("nodes reproduce exactly and ends clamp") {
    const auto ts = makeSeries("a", {0.0, 1.0, 2.5}, {0.0, 2.0, -1.0});
    CHECK(interpolate(ts, 0.0)[0] == 0.0);
    CHECK(interpolate(ts, 1.0)[0] == 2.0);
    CHECK(interpolate(ts, 2.5)[0] == -1.0);
    CHECK(interpolate(ts, -1.0)[0] == 0.0);   // left clamp
    CHECK(interpolate(ts, 99.0)[0] == -1.0);  // right clamp
}

TEST_CASE("piecewise linearity") {
    Rng rng(5);
    std::vector<double> times{0.0, 0.4, 1.1, 2.0, 3.7};
    std::vector<double> vals(times.size());
    for (auto& v : vals) v = rng.uniform(-4.0, 4.0);
    const auto ts = makeSeries("a", times, vals);
    for (int trial = 0; trial < 200; ++trial) {
        const auto j = static_cast<std::size_t>(rng.integer(0, 3));
        const double lam = rng.uniform01();
        const double t = times[j] + lam * (times[j + 1] - times[j]);
        const double expected = (1.0 - lam) * vals[j] + lam * vals[j + 1];
        const double got = interpolate(ts, t)[0];
        CHECK(std::abs(got - expected) <= 1e-14 * std::max(1.0, std::abs(expected)));
        // monotone bound
        CHECK(got <= std::max(vals[j], vals[j + 1]) + 1e-14);
        CHECK(got >= std::min(vals[j], vals[j + 1]) - 1e-14);
    }
}

TEST_CASE("series validation") {
    auto bad = makeSeries("a", {0.0, 1.0}, {0.0, 1.0});
    bad.times = {0.5, 1.0};  // must start at zero
    CHECK_THROWS_AS(bad.validate(), SchemaError);

    auto nonmono = makeSeries("a", {0.0, 1.0, 1.0}, {0.0, 1.0, 2.0});
    CHECK_THROWS_AS(nonmono.validate(), SchemaError);

    auto badLabel = makeSeries("a", {0.0, 1.0}, {0.0, 1.0});
    badLabel.label.resize(2);
    badLabel.label << 0.5, 0.5;
    CHECK_THROWS_AS(badLabel.validate(), SchemaError);
}

TEST_CASE("dataset validation catches duplicates and dim mismatches") {
    Dataset data;
    data.inputDim = 1;
    data.numClasses = 2;
    data.series.push_back(makeSeries("a", {0.0, 1.0}, {0.0, 1.0}, 0));
    data.series.push_back(makeSeries("a", {0.0, 1.0}, {0.0, 1.0}, 1));
    CHECK_THROWS_AS(data.validate(), SchemaError);

    data.series[1].id = "b";
    CHECK_NOTHROW(data.validate());
    CHECK(data.classCounts() == std::vector<int>{1, 1});
}

TEST_CASE("non-finite query time is rejected") {
    const auto ts = makeSeries("a", {0.0, 1.0}, {0.0, 2.0});
    CHECK_THROWS_AS(interpolate(ts, std::numeric_limits<double>::quiet_NaN()), NonFiniteInput);
}
