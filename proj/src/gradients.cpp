#include "naed/gradients.hpp"

#include <algorithm>
#include <cmath>

#include "naed/integrator.hpp"
#include "naed/parallel.hpp"

namespace naed {

Gradients Gradients::zero(const Parameters& like) {
    Gradients g;
    g.dBeta = Eigen::MatrixXd::Zero(like.beta.rows(), like.beta.cols());
    g.dB = Eigen::MatrixXd::Zero(like.B.rows(), like.B.cols());
    g.dA = Eigen::MatrixXd::Zero(like.A.rows(), like.A.cols());
    g.db = Eigen::VectorXd::Zero(like.b.size());
    return g;
}

bool Gradients::allFinite() const {
    return dBeta.allFinite() && dB.allFinite() && dA.allFinite() && db.allFinite();
}

Gradients& Gradients::operator+=(const Gradients& other) {
    dBeta += other.dBeta;
    dB += other.dB;
    dA += other.dA;
    db += other.db;
    return *this;
}

Gradients& Gradients::operator*=(double s) {
    dBeta *= s;
    dB *= s;
    dA *= s;
    db *= s;
    return *this;
}

double Gradients::maxAbs() const {
    double v = dBeta.size() ? dBeta.cwiseAbs().maxCoeff() : 0.0;
    if (dB.size()) v = std::max(v, dB.cwiseAbs().maxCoeff());
    if (dA.size()) v = std::max(v, dA.cwiseAbs().maxCoeff());
    if (db.size()) v = std::max(v, db.cwiseAbs().maxCoeff());
    return v;
}

namespace {

struct SampleContribution {
    double loss = 0.0;
    Gradients grads;
};

// Forward solve, adjoint solve, quadratures for one sample. The 1/N of the
// batch mean is already inside the adjoint terminal condition, so the
// integral blocks sum across samples without further scaling.
void sampleGradients(const Parameters& params, const DictionarySpec& spec,
                     const TimeSeries& ts, int substeps, int batchSize,
                     SampleContribution& out) {
    const int m = spec.hiddenDim();
    const int d = spec.dimension();

    const Trajectory forward = solveForward(params, spec, ts, substeps);
    const Eigen::VectorXd hT = forward.finalState();
    const Eigen::VectorXd probs = softmax(params.A * hT + params.b);
    const Eigen::VectorXd residual = ts.label - probs;  // y - yhat
    const double invN = 1.0 / static_cast<double>(batchSize);

    out.loss = -ts.label.dot(logSoftmax(params.A * hT + params.b));

    out.grads.dA.noalias() = -invN * residual * hT.transpose();
    out.grads.db = -invN * residual;

    const Eigen::VectorXd terminal = -invN * (params.A.transpose() * residual);
    const Trajectory adjoint = solveAdjoint(params, spec, forward, terminal);

    // trapezoid accumulation of lambda Xi^T and lambda x^T over the grid;
    // the grid is sample-aligned, so x at node j comes from closed-form
    // interpolation weights rather than a search
    DictionaryEvaluator dict(spec);
    Eigen::VectorXd xi(d);
    Eigen::VectorXd x(ts.inputDim());
    Eigen::VectorXd h(m), lam(m);

    auto& dBeta = out.grads.dBeta;
    auto& dB = out.grads.dB;
    const int nodes = forward.grid.nodes();
    const int intervals = static_cast<int>(ts.times.size()) - 1;
    for (int j = 0; j < nodes; ++j) {
        double w = 0.0;
        if (j > 0) w += 0.5 * (forward.grid.times[j] - forward.grid.times[j - 1]);
        if (j + 1 < nodes) w += 0.5 * (forward.grid.times[j + 1] - forward.grid.times[j]);
        h = forward.states.col(j);
        lam = adjoint.states.col(j);
        dict.values(h, xi);
        const int interval = std::min(j / substeps, intervals - 1);
        const double frac = static_cast<double>(j - interval * substeps) / substeps;
        x = (1.0 - frac) * ts.values.col(interval) + frac * ts.values.col(interval + 1);
        dBeta.noalias() += (w)*lam * xi.transpose();
        dB.noalias() += (w)*lam * x.transpose();
    }
}

}  // namespace

BatchGradients adjointGradients(const Parameters& params, const DictionarySpec& spec,
                                const std::vector<TimeSeries>& batch, int substeps,
                                int threads) {
    if (batch.empty()) throw ConfigError("adjointGradients: empty batch");
    for (const auto& ts : batch) {
        if (!ts.labeled()) {
            throw ConfigError("adjointGradients: unlabeled sample '" + ts.id + "'");
        }
    }
    const int n = static_cast<int>(batch.size());
    std::vector<SampleContribution> parts(n);
    for (auto& p : parts) p.grads = Gradients::zero(params);

    parallelFor(
        n,
        [&](int i) {
            try {
                sampleGradients(params, spec, batch[i], substeps, n, parts[i]);
            } catch (const BlowUp& e) {
                throw BlowUp(e.time, batch[i].id);  // attach the sample
            }
        },
        threads);

    BatchGradients result;
    result.grads = Gradients::zero(params);
    for (int i = 0; i < n; ++i) {  // fixed order: deterministic reduction
        result.loss += parts[i].loss;
        result.grads += parts[i].grads;
    }
    result.loss /= n;
    if (!result.grads.allFinite()) {
        throw NonFiniteGradient("adjointGradients: non-finite accumulated gradient");
    }
    return result;
}

namespace {

double lossForOracle(const Parameters& params, const DictionarySpec& spec,
                     const std::vector<TimeSeries>& batch, int substeps) {
    return loss(params, spec, batch, substeps);
}

}  // namespace

Gradients finiteDifferenceOracle(const Parameters& params, const DictionarySpec& spec,
                                 const std::vector<TimeSeries>& batch, int substeps,
                                 double eps, int threads) {
    if (!(eps > 0.0)) throw ConfigError("finiteDifferenceOracle: eps must be positive");

    // flatten view: block id 0..3, then row-major coordinates inside a block
    const int sizes[4] = {static_cast<int>(params.beta.size()), static_cast<int>(params.B.size()),
                          static_cast<int>(params.A.size()), static_cast<int>(params.b.size())};
    const int total = sizes[0] + sizes[1] + sizes[2] + sizes[3];

    std::vector<double> derivs(total, 0.0);

    // one mutable parameter copy per evaluation keeps workers independent
    parallelFor(
        total,
        [&](int flat) {
            Parameters local = params;
            double* coord = nullptr;
            int rest = flat;
            for (int blockId = 0; blockId < 4; ++blockId) {
                if (rest < sizes[blockId]) {
                    Eigen::MatrixXd* mats[4] = {&local.beta, &local.B, &local.A, nullptr};
                    if (blockId == 3) {
                        coord = &local.b[rest];
                    } else {
                        Eigen::MatrixXd& mat = *mats[blockId];
                        const int cols = static_cast<int>(mat.cols());
                        coord = &mat(rest / cols, rest % cols);  // row-major walk
                    }
                    break;
                }
                rest -= sizes[blockId];
            }
            const double original = *coord;
            const double step = eps * std::max(1.0, std::abs(original));
            *coord = original + step;
            const double up = lossForOracle(local, spec, batch, substeps);
            *coord = original - step;
            const double down = lossForOracle(local, spec, batch, substeps);
            *coord = original;
            derivs[flat] = (up - down) / (2.0 * step);
        },
        threads, /*chunk=*/4);

    Gradients g = Gradients::zero(params);
    int flat = 0;
    auto unpack = [&](Eigen::MatrixXd& mat) {
        const int cols = static_cast<int>(mat.cols());
        for (int i = 0; i < mat.rows(); ++i) {
            for (int j = 0; j < cols; ++j) mat(i, j) = derivs[flat++];
        }
    };
    unpack(g.dBeta);
    unpack(g.dB);
    unpack(g.dA);
    for (int j = 0; j < g.db.size(); ++j) g.db[j] = derivs[flat++];
    return g;
}

double GradientComparison::maxRelOverall() const {
    return std::max(std::max(maxRelBeta, maxRelB), std::max(maxRelA, maxRelb));
}

namespace {

double blockRelError(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double floor) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            const double scale =
                std::max(floor, std::max(std::abs(a(i, j)), std::abs(b(i, j))));
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / scale);
        }
    }
    return worst;
}

}  // namespace

GradientComparison compareGradients(const Gradients& a, const Gradients& b, double floor) {
    if (floor <= 0.0) {
        // judge tiny entries on absolute terms relative to the gradient's
        // own scale, large entries on relative terms
        floor = std::max(1e-12, 1e-3 * std::max(a.maxAbs(), b.maxAbs()));
    }
    GradientComparison c;
    c.maxRelBeta = blockRelError(a.dBeta, b.dBeta, floor);
    c.maxRelB = blockRelError(a.dB, b.dB, floor);
    c.maxRelA = blockRelError(a.dA, b.dA, floor);
    c.maxRelb = blockRelError(a.db, b.db, floor);
    return c;
}

}  // namespace naed
