#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "naed/integrator.hpp"
#include "naed/model.hpp"

using namespace naed;
using namespace naed::testing;

namespace {

// Poly(2,1) parameters realizing dh/dt = M h + Bvec x(t); basis (1, h1, h2)
Parameters companionParams(const Eigen::Matrix2d& M, const Eigen::Vector2d& Bvec) {
    const auto spec = DictionarySpec::polynomial(2, 1);
    Parameters p = zeroParameters(spec, 1, 2);
    p.beta.block(0, 1, 2, 2) = M;
    p.B = Bvec;
    return p;
}

}  // namespace

TEST_CASE("fine grid subdivides every sample interval") {
    const auto grid = FineGrid::fromSampleTimes({0.0, 1.0, 3.0}, 2);
    REQUIRE(grid.nodes() == 5);
    CHECK(grid.times == std::vector<double>{0.0, 0.5, 1.0, 2.0, 3.0});
    CHECK_THROWS_AS(FineGrid::fromSampleTimes({0.0, 1.0}, 0), ConfigError);
}

TEST_CASE("zero vector field stays at zero") {
    const auto spec = DictionarySpec::polynomial(2, 1);
    const Parameters p = zeroParameters(spec, 1, 2);
    const auto ts = makeSeries("a", linspace(0, 10, 101), std::vector<double>(101, 1.0));
    const auto traj = solveForward(p, spec, ts, 2);
    CHECK(traj.states.isZero(0.0));
}

TEST_CASE("pure quadrature of a constant forcing") {
    const auto spec = DictionarySpec::polynomial(1, 1);
    Parameters p = zeroParameters(spec, 1, 2);
    p.B(0, 0) = 1.0;
    const double c = 0.7;
    const auto ts = makeSeries("a", linspace(0, 10, 101), std::vector<double>(101, c));
    const auto traj = solveForward(p, spec, ts, 1);
    CHECK(std::abs(traj.finalState()[0] - c * 10.0) < 1e-12 * c * 10.0);
}

TEST_CASE("forced oscillator matches the closed form at s=4") {
    // x(t) = sin t sampled densely; reference is the true particular +
    // homogeneous solution for sinusoidal forcing
    const double T = 10.0, gamma = 0.2, w2 = 1.0;
    const int samples = 16001;
    const auto times = linspace(0, T, samples);
    std::vector<double> vals(samples);
    for (int j = 0; j < samples; ++j) vals[j] = std::sin(times[j]);
    const auto ts = makeSeries("osc", times, vals);

    const auto spec = DictionarySpec::polynomial(2, 1);
    const Parameters p = companionParams(oscillatorCompanion(gamma, w2), {0.0, 1.0});
    const auto traj = solveForward(p, spec, ts, 4);

    // closed form: u'' + gamma u' + w2 u = sin t, zero initial data
    const double a = 1.0;
    const double denom = (w2 - a * a) * (w2 - a * a) + gamma * gamma * a * a;
    const double cs = (w2 - a * a) / denom, cc = -gamma * a / denom;
    const double om0 = std::sqrt(w2 - 0.25 * gamma * gamma);
    const double c1 = -cc, c2 = (-cs * a + 0.5 * gamma * c1) / om0;
    const double uT = cs * std::sin(a * T) + cc * std::cos(a * T) +
                      std::exp(-0.5 * gamma * T) * (c1 * std::cos(om0 * T) + c2 * std::sin(om0 * T));
    const double duT = cs * a * std::cos(a * T) - cc * a * std::sin(a * T) +
                       std::exp(-0.5 * gamma * T) *
                           ((-0.5 * gamma) * (c1 * std::cos(om0 * T) + c2 * std::sin(om0 * T)) +
                            om0 * (-c1 * std::sin(om0 * T) + c2 * std::cos(om0 * T)));
    CHECK(std::abs(traj.finalState()[0] - uT) < 1e-6);
    CHECK(std::abs(traj.finalState()[1] - duT) < 1e-6);
}

TEST_CASE("rk4 order four against the piecewise-linear-forced exact solution") {
    // the forcing is exactly the piecewise-linear interpolant, so the only
    // error is the integrator's; doubling substeps must shrink it ~16x
    const double T = 10.0;
    const int samples = 101;
    const auto times = linspace(0, T, samples);
    std::vector<double> vals(samples);
    for (int j = 0; j < samples; ++j) vals[j] = std::sin(times[j]);
    const auto ts = makeSeries("osc", times, vals);

    const Eigen::Matrix2d M = oscillatorCompanion();
    const Eigen::Vector2d Bvec(0.0, 1.0);
    const auto spec = DictionarySpec::polynomial(2, 1);
    const Parameters p = companionParams(M, Bvec);

    const Eigen::Vector2d exact = piecewiseLinearForcedExact(M, Bvec, times, vals);

    std::vector<double> errs;
    for (int s : {1, 2, 4, 8}) {
        const auto traj = solveForward(p, spec, ts, s);
        errs.push_back((traj.finalState() - exact).norm());
    }
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        CHECK(errs[i] / errs[i + 1] >= 15.0);
    }
}

TEST_CASE("blow-up guard triggers with the escape time") {
    // dh/dt = h^2/... : quadratic self-reinforcement escapes in finite time
    const auto spec = DictionarySpec::polynomial(1, 2);  // basis (1, h, h^2/2)
    Parameters p = zeroParameters(spec, 1, 2);
    p.beta(0, 0) = 1.0;  // constant push away from zero
    p.beta(0, 2) = 8.0;  // + 4 h^2
    const auto ts = makeSeries("a", linspace(0, 10, 101), std::vector<double>(101, 0.0));
    CHECK_THROWS_AS(solveForward(p, spec, ts, 4), BlowUp);
    try {
        solveForward(p, spec, ts, 4);
    } catch (const BlowUp& e) {
        CHECK(e.time > 0.0);
        CHECK(e.time <= 10.0);
    }
}

TEST_CASE("determinism of the forward solve") {
    const auto spec = DictionarySpec::fourier(2, 2, 10.0);
    const Parameters p = initialize(spec, 1, 2, 99);
    std::vector<double> vals(101);
    for (int j = 0; j < 101; ++j) vals[j] = std::sin(0.37 * j);
    const auto ts = makeSeries("a", linspace(0, 10, 101), vals);
    const auto t1 = solveForward(p, spec, ts, 3);
    const auto t2 = solveForward(p, spec, ts, 3);
    CHECK(t1.states == t2.states);
}

TEST_CASE("zero-beta adjoint is constant and substep independent") {
    const auto spec = DictionarySpec::polynomial(2, 1);
    const Parameters p = zeroParameters(spec, 1, 2);
    const auto ts = makeSeries("a", linspace(0, 5, 51), std::vector<double>(51, 0.3));
    Eigen::VectorXd terminal(2);
    terminal << 0.25, -1.5;
    for (int s : {1, 2, 4}) {
        const auto fwd = solveForward(p, spec, ts, s);
        const auto adj = solveAdjoint(p, spec, fwd, terminal);
        for (int j = 0; j < adj.grid.nodes(); ++j) {
            CHECK(adj.states(0, j) == 0.25);
            CHECK(adj.states(1, j) == -1.5);
        }
    }
}

TEST_CASE("linear-dictionary adjoint matches the matrix exponential") {
    // with a linear basis D_h Xi is constant, so lambda(t) = e^{G^T (T-t)} l_T
    const double T = 2.0;
    const Eigen::Matrix2d M = oscillatorCompanion(0.4, 2.0);
    const auto spec = DictionarySpec::polynomial(2, 1);
    const Parameters p = companionParams(M, {0.0, 1.0});

    std::vector<double> vals(101);
    for (int j = 0; j < 101; ++j) vals[j] = std::cos(1.7 * j * T / 100.0);
    const auto ts = makeSeries("a", linspace(0, T, 101), vals);

    Eigen::VectorXd terminal(2);
    terminal << 0.8, -0.35;
    const auto fwd = solveForward(p, spec, ts, 4);
    const auto adj = solveAdjoint(p, spec, fwd, terminal);

    const Eigen::Matrix2d Gt = M.transpose();
    const Eigen::Vector2d atZero = expm2ComplexPair(Gt, T) * terminal;
    CHECK((adj.states.col(0) - atZero).norm() < 1e-8);
}

TEST_CASE("scalar adjoint is an exponential") {
    // m=1 linear basis: beta D_h Xi = a constant, lambda(0) = e^{a T} l_T
    const double a = 0.6, T = 3.0;
    const auto spec = DictionarySpec::polynomial(1, 1);
    Parameters p = zeroParameters(spec, 1, 2);
    p.beta(0, 1) = a;
    const auto ts = makeSeries("a", linspace(0, T, 301), std::vector<double>(301, 0.0));
    Eigen::VectorXd terminal(1);
    terminal << 2.0;
    const auto fwd = solveForward(p, spec, ts, 2);
    const auto adj = solveAdjoint(p, spec, fwd, terminal);
    CHECK(adj.states(0, 0) == doctest::Approx(std::exp(a * T) * 2.0).epsilon(1e-8));
}

TEST_CASE("trapezoid quadrature") {
    const auto grid = FineGrid::fromSampleTimes(linspace(0, 10, 11), 1);
    SUBCASE("constant") {
        CHECK(quadrature(grid, std::vector<double>(11, 1.0)) == doctest::Approx(10.0));
    }
    SUBCASE("linear is exact") {
        std::vector<double> f(11);
        for (int j = 0; j < 11; ++j) f[j] = grid.times[j];
        CHECK(quadrature(grid, f) == doctest::Approx(50.0).epsilon(1e-14));
    }
    SUBCASE("quadratic error bound") {
        const auto fine = FineGrid::fromSampleTimes({0.0, 1.0}, 100);
        std::vector<double> f(fine.nodes());
        for (int j = 0; j < fine.nodes(); ++j) f[j] = fine.times[j] * fine.times[j];
        CHECK(std::abs(quadrature(fine, f) - 1.0 / 3.0) < 2e-5);
    }
    SUBCASE("vector-valued form") {
        Eigen::MatrixXd vals(2, 11);
        vals.row(0).setConstant(1.0);
        for (int j = 0; j < 11; ++j) vals(1, j) = grid.times[j];
        const Eigen::VectorXd integral = quadrature(grid, vals);
        CHECK(integral[0] == doctest::Approx(10.0));
        CHECK(integral[1] == doctest::Approx(50.0));
    }
}
