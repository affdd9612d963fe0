#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "naed/dictionary.hpp"
#include "naed/rng.hpp"

using namespace naed;

TEST_CASE("dimension formulas") {
    CHECK(DictionarySpec::fourier(2, 1, 10.0).dimension() == 9);
    CHECK(DictionarySpec::polynomial(2, 2).dimension() == 6);
    CHECK(DictionarySpec::polynomial(1, 0).dimension() == 1);
    CHECK(DictionarySpec::fourier(3, 1, 10.0).dimension() == 27);
    // closed forms across a range
    CHECK(DictionarySpec::polynomial(3, 4).dimension() == 35);  // C(7,3)
    CHECK(DictionarySpec::fourier(2, 2, 5.0).dimension() == 25);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(DictionarySpec::polynomial(0, 1), ConfigError);
    CHECK_THROWS_AS(DictionarySpec::fourier(2, 0, 10.0), ConfigError);
    CHECK_THROWS_AS(DictionarySpec::fourier(2, 1, 0.0), ConfigError);
    CHECK_THROWS_AS(DictionarySpec::fourier(2, 1, -3.0), ConfigError);
}

TEST_CASE("polynomial evaluation at the origin") {
    const auto spec = DictionarySpec::polynomial(2, 1);
    Eigen::VectorXd h(2);
    h << 0.0, 0.0;
    const auto eval = evaluate(spec, h);
    REQUIRE(eval.values.size() == 3);
    CHECK(eval.values[0] == 1.0);
    CHECK(eval.values[1] == 0.0);
    CHECK(eval.values[2] == 0.0);
    CHECK(eval.jacobian.row(0).isZero(0.0));
    CHECK(eval.jacobian(1, 0) == 1.0);
    CHECK(eval.jacobian(1, 1) == 0.0);
    CHECK(eval.jacobian(2, 0) == 0.0);
    CHECK(eval.jacobian(2, 1) == 1.0);
}

TEST_CASE("fourier evaluation at zero") {
    const auto spec = DictionarySpec::fourier(1, 1, 10.0);
    Eigen::VectorXd h(1);
    h << 0.0;
    const auto eval = evaluate(spec, h);
    REQUIRE(eval.values.size() == 3);
    CHECK(eval.values[0] == 1.0);                       // constant
    CHECK(eval.values[1] == doctest::Approx(1.0));      // cos 0
    CHECK(eval.values[2] == doctest::Approx(0.0));      // sin 0
    CHECK(eval.jacobian(0, 0) == 0.0);
    CHECK(eval.jacobian(1, 0) == doctest::Approx(0.0));
    CHECK(eval.jacobian(2, 0) == doctest::Approx(2.0 * std::numbers::pi / 10.0));
}

TEST_CASE("quadratic basis with taylor coefficients") {
    const auto spec = DictionarySpec::polynomial(2, 2);
    Eigen::VectorXd h(2);
    h << 1.0, 2.0;
    const auto eval = evaluate(spec, h);
    // order: 1, h1, h2, h1^2/2, h1 h2, h2^2/2
    REQUIRE(eval.values.size() == 6);
    CHECK(eval.values[0] == doctest::Approx(1.0));
    CHECK(eval.values[1] == doctest::Approx(1.0));
    CHECK(eval.values[2] == doctest::Approx(2.0));
    CHECK(eval.values[3] == doctest::Approx(0.5));
    CHECK(eval.values[4] == doctest::Approx(2.0));
    CHECK(eval.values[5] == doctest::Approx(2.0));
}

TEST_CASE("constant entry and zero jacobian row") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 1 + trial % 3;
        const auto spec = trial % 2 == 0
                              ? DictionarySpec::polynomial(m, 1 + trial % 4)
                              : DictionarySpec::fourier(m, 1 + trial % 3, 5.0 + trial);
        Eigen::VectorXd h(m);
        for (int i = 0; i < m; ++i) h[i] = rng.uniform(-3.0, 3.0);
        const auto eval = evaluate(spec, h);
        CHECK(eval.values[0] == 1.0);
        CHECK(eval.jacobian.row(0).isZero(0.0));
    }
}

TEST_CASE("non-finite input is rejected") {
    const auto spec = DictionarySpec::polynomial(2, 2);
    Eigen::VectorXd h(2);
    h << 1.0, std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(evaluate(spec, h), NonFiniteInput);
    h << std::numeric_limits<double>::infinity(), 0.0;
    CHECK_THROWS_AS(evaluate(spec, h), NonFiniteInput);
}

TEST_CASE("jacobian matches central finite differences") {
    Rng rng(42);
    const double step = 1e-6;
    for (int trial = 0; trial < 40; ++trial) {
        const int m = 1 + trial % 3;
        const auto spec = trial % 2 == 0
                              ? DictionarySpec::polynomial(m, 1 + trial % 3)
                              : DictionarySpec::fourier(m, 1 + trial % 2, 4.0 + trial % 5);
        Eigen::VectorXd h(m);
        for (int i = 0; i < m; ++i) h[i] = rng.uniform(-2.0, 2.0);
        const auto eval = evaluate(spec, h);
        for (int i = 0; i < m; ++i) {
            Eigen::VectorXd hp = h, hm = h;
            hp[i] += step;
            hm[i] -= step;
            const Eigen::VectorXd numeric =
                (evaluate(spec, hp).values - evaluate(spec, hm).values) / (2.0 * step);
            for (int j = 0; j < spec.dimension(); ++j) {
                const double scale =
                    std::max({1.0, std::abs(numeric[j]), std::abs(eval.jacobian(j, i))});
                CHECK(std::abs(numeric[j] - eval.jacobian(j, i)) / scale < 1e-6);
            }
        }
    }
}

TEST_CASE("basis order is deterministic") {
    const auto a = DictionarySpec::fourier(2, 2, 10.0);
    const auto b = DictionarySpec::fourier(2, 2, 10.0);
    Eigen::VectorXd h(2);
    h << 0.3, -1.2;
    CHECK(evaluate(a, h).values == evaluate(b, h).values);

    const auto pa = DictionarySpec::polynomial(3, 3);
    const auto pb = DictionarySpec::polynomial(3, 3);
    CHECK(pa.exponents() == pb.exponents());
}

TEST_CASE("fourier periodicity in every coordinate") {
    const double L = 7.5;
    const auto spec = DictionarySpec::fourier(2, 2, L);
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd h(2);
        h << rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0);
        const auto base = evaluate(spec, h).values;
        for (int i = 0; i < 2; ++i) {
            Eigen::VectorXd shifted = h;
            shifted[i] += L;
            const auto moved = evaluate(spec, shifted).values;
            for (int j = 0; j < spec.dimension(); ++j) {
                CHECK(std::abs(moved[j] - base[j]) < 1e-12);
            }
        }
    }
}

TEST_CASE("lipschitz estimates") {
    CHECK(lipschitzEstimate(DictionarySpec::fourier(1, 1, 10.0), 1.0) ==
          doctest::Approx(2.0 * std::numbers::pi / 10.0));
    CHECK(lipschitzEstimate(DictionarySpec::polynomial(1, 1), 5.0) == doctest::Approx(1.0));
    CHECK(lipschitzEstimate(DictionarySpec::polynomial(1, 2), 2.0) == doctest::Approx(2.0));
}

TEST_CASE("lipschitz bound is never violated on samples") {
    Rng rng(11);
    const struct {
        DictionarySpec spec;
        double radius;
    } cases[] = {
        {DictionarySpec::polynomial(2, 3), 2.5},
        {DictionarySpec::polynomial(3, 2), 1.5},
        {DictionarySpec::fourier(2, 2, 6.0), 4.0},
        {DictionarySpec::fourier(1, 3, 9.0), 8.0},
    };
    for (const auto& c : cases) {
        const double bound = lipschitzEstimate(c.spec, c.radius);
        const int m = c.spec.hiddenDim();
        for (int trial = 0; trial < 10000; ++trial) {
            Eigen::VectorXd h1(m), h2(m);
            do {
                for (int i = 0; i < m; ++i) h1[i] = rng.uniform(-c.radius, c.radius);
            } while (h1.norm() > c.radius);
            do {
                for (int i = 0; i < m; ++i) h2[i] = rng.uniform(-c.radius, c.radius);
            } while (h2.norm() > c.radius);
            const double lhs = (evaluate(c.spec, h1).values - evaluate(c.spec, h2).values)
                                   .lpNorm<Eigen::Infinity>();
            CHECK(lhs <= bound * (h1 - h2).norm() + 1e-12);
        }
    }
}
