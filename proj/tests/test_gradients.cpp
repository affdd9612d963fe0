#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "naed/gradients.hpp"
#include "naed/integrator.hpp"
#include "naed/rng.hpp"

using namespace naed;
using namespace naed::testing;

namespace {

std::vector<TimeSeries> randomBatch(Rng& rng, int n, int classes, int count, int samples,
                                    double T) {
    std::vector<TimeSeries> batch;
    const auto times = linspace(0, T, samples);
    for (int i = 0; i < count; ++i) {
        TimeSeries ts;
        ts.id = "s" + std::to_string(i);
        ts.times = times;
        ts.values.resize(n, samples);
        for (int r = 0; r < n; ++r) {
            const double a = rng.uniform(-1.5, 1.5);
            const double w = rng.uniform(0.3, 2.0);
            for (int j = 0; j < samples; ++j) ts.values(r, j) = a * std::sin(w * times[j]);
        }
        ts.label = oneHot(static_cast<int>(rng.integer(0, classes - 1)), classes);
        batch.push_back(std::move(ts));
    }
    return batch;
}

Parameters smallRandom(const DictionarySpec& spec, int n, int classes, std::uint64_t seed) {
    // scaled-down draw keeps every configuration well clear of blow-up
    Parameters p = initialize(spec, n, classes, seed);
    p.beta *= 0.3;
    p.B *= 0.5;
    return p;
}

}  // namespace

TEST_CASE("central differences are exact on a quadratic") {
    // the oracle's stencil: (J(t+e) - J(t-e)) / 2e with e = 1e-5 max(1,|t|)
    const auto J = [](double theta) { return theta * theta; };
    const double theta = 3.0;
    const double e = 1e-5 * std::max(1.0, std::abs(theta));
    const double deriv = (J(theta + e) - J(theta - e)) / (2.0 * e);
    CHECK(std::abs(deriv - 6.0) < 1e-9);
}

TEST_CASE("frozen dynamics: closed-form gradient blocks") {
    // beta = 0, B = 0 freezes h at zero, so lambda stays at its terminal
    // value and the beta integral collapses to lambda(T) Xi(0)^T T
    const auto spec = DictionarySpec::polynomial(2, 1);
    Parameters p = zeroParameters(spec, 1, 2);
    Rng rng(3);
    for (Eigen::Index i = 0; i < p.A.size(); ++i) p.A(i / 2, i % 2) = rng.uniform(-1, 1);
    p.b << 0.3, -0.1;

    const double T = 4.0;
    auto batch = randomBatch(rng, 1, 2, 3, 41, T);
    const auto result = adjointGradients(p, spec, batch, 2);

    const int N = static_cast<int>(batch.size());
    Eigen::VectorXd xi0(3);
    xi0 << 1.0, 0.0, 0.0;
    Eigen::MatrixXd expectedBeta = Eigen::MatrixXd::Zero(2, 3);
    Eigen::MatrixXd expectedA = Eigen::MatrixXd::Zero(2, 2);
    Eigen::VectorXd expectedb = Eigen::VectorXd::Zero(2);
    for (const auto& ts : batch) {
        const Eigen::VectorXd yhat = softmax(p.b);  // h(T) = 0
        const Eigen::VectorXd residual = ts.label - yhat;
        const Eigen::VectorXd lamT = -(p.A.transpose() * residual) / N;
        expectedBeta += lamT * xi0.transpose() * T;
        expectedb += -residual / N;
        // dA = -(1/N) residual h(T)^T = 0 since h(T) = 0
    }
    CHECK((result.grads.dBeta - expectedBeta).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((result.grads.dA - expectedA).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((result.grads.db - expectedb).cwiseAbs().maxCoeff() < 1e-12);

    // and the oracle agrees on the readout blocks to high accuracy
    const Gradients fd = finiteDifferenceOracle(p, spec, batch, 2);
    CHECK((result.grads.dA - fd.dA).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((result.grads.db - fd.db).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("balanced residuals cancel in db") {
    const auto spec = DictionarySpec::polynomial(1, 1);
    const Parameters p = zeroParameters(spec, 1, 2);  // zero logits
    const auto times = linspace(0, 2, 21);
    std::vector<TimeSeries> batch{makeSeries("a", times, std::vector<double>(21, 0.0), 0),
                                  makeSeries("b", times, std::vector<double>(21, 0.0), 1)};
    const auto result = adjointGradients(p, spec, batch, 1);
    CHECK(result.grads.db.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("adjoint gradients match the finite-difference oracle") {
    Rng rng(2024);
    const auto spec = DictionarySpec::polynomial(2, 1);
    const Parameters p = smallRandom(spec, 1, 2, 7);
    auto batch = randomBatch(rng, 1, 2, 3, 26, 2.5);

    const auto adj = adjointGradients(p, spec, batch, 8);
    const Gradients fd = finiteDifferenceOracle(p, spec, batch, 8);
    const auto cmp = compareGradients(adj.grads, fd);
    CHECK(cmp.maxRelOverall() < 1e-3);
}

TEST_CASE("oracle agreement improves as substeps double") {
    Rng rng(77);
    const auto spec = DictionarySpec::fourier(2, 1, 10.0);
    const Parameters p = smallRandom(spec, 1, 2, 21);
    auto batch = randomBatch(rng, 1, 2, 2, 21, 2.0);

    std::vector<double> errs;
    for (int s : {2, 4, 8, 16}) {
        const auto adj = adjointGradients(p, spec, batch, s);
        const Gradients fd = finiteDifferenceOracle(p, spec, batch, s);
        errs.push_back(compareGradients(adj.grads, fd).maxRelOverall());
    }
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        CHECK(errs[i + 1] < errs[i]);  // monotone improvement
    }
}

TEST_CASE("gradients are linear in the batch") {
    Rng rng(31);
    const auto spec = DictionarySpec::polynomial(2, 1);
    const Parameters p = smallRandom(spec, 1, 2, 3);
    auto batchA = randomBatch(rng, 1, 2, 2, 21, 2.0);
    auto batchB = randomBatch(rng, 1, 2, 3, 21, 2.0);
    for (auto& ts : batchB) ts.id += "-b";

    std::vector<TimeSeries> unionBatch = batchA;
    unionBatch.insert(unionBatch.end(), batchB.begin(), batchB.end());

    const auto ga = adjointGradients(p, spec, batchA, 4);
    const auto gb = adjointGradients(p, spec, batchB, 4);
    const auto gu = adjointGradients(p, spec, unionBatch, 4);

    const double wa = 2.0 / 5.0, wb = 3.0 / 5.0;
    CHECK((gu.grads.dBeta - (wa * ga.grads.dBeta + wb * gb.grads.dBeta)).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK((gu.grads.dB - (wa * ga.grads.dB + wb * gb.grads.dB)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((gu.grads.dA - (wa * ga.grads.dA + wb * gb.grads.dA)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((gu.grads.db - (wa * ga.grads.db + wb * gb.grads.db)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(gu.loss == doctest::Approx(wa * ga.loss + wb * gb.loss).epsilon(1e-12));
}

TEST_CASE("readout blocks do not depend on substeps when dynamics are frozen") {
    Rng rng(5);
    const auto spec = DictionarySpec::polynomial(2, 1);
    Parameters p = zeroParameters(spec, 1, 2);
    p.A << 0.4, -0.2, 0.1, 0.9;
    p.b << 0.0, 0.25;
    auto batch = randomBatch(rng, 1, 2, 3, 31, 3.0);
    const auto g1 = adjointGradients(p, spec, batch, 1);
    const auto g8 = adjointGradients(p, spec, batch, 8);
    CHECK((g1.grads.dA - g8.grads.dA).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((g1.grads.db - g8.grads.db).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("parallel evaluation is bit-identical to serial") {
    Rng rng(8);
    const auto spec = DictionarySpec::fourier(2, 1, 10.0);
    const Parameters p = smallRandom(spec, 2, 3, 4);
    auto batch = randomBatch(rng, 2, 3, 12, 21, 2.0);

    const auto serial = adjointGradients(p, spec, batch, 2, /*threads=*/1);
    const auto parallel = adjointGradients(p, spec, batch, 2, /*threads=*/4);
    CHECK(serial.loss == parallel.loss);
    CHECK(serial.grads.dBeta == parallel.grads.dBeta);
    CHECK(serial.grads.dB == parallel.grads.dB);
    CHECK(serial.grads.dA == parallel.grads.dA);
    CHECK(serial.grads.db == parallel.grads.db);
}
