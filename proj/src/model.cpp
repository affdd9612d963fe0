#include "naed/model.hpp"

#include <cmath>

#include "naed/integrator.hpp"
#include "naed/rng.hpp"

namespace naed {

Parameters zeroParameters(const DictionarySpec& spec, int inputDim, int numClasses) {
    Parameters p;
    p.beta = Eigen::MatrixXd::Zero(spec.hiddenDim(), spec.dimension());
    p.B = Eigen::MatrixXd::Zero(spec.hiddenDim(), inputDim);
    p.A = Eigen::MatrixXd::Zero(numClasses, spec.hiddenDim());
    p.b = Eigen::VectorXd::Zero(numClasses);
    return p;
}

Parameters initialize(const DictionarySpec& spec, int inputDim, int numClasses,
                      std::uint64_t seed) {
    const bool nonlinearPoly =
        spec.kind() == DictionaryKind::Polynomial && spec.maxDegree() >= 2;
    const double dynScale = nonlinearPoly ? 0.1 : 1.0;

    Rng rng(seed);
    Parameters p = zeroParameters(spec, inputDim, numClasses);
    auto fill = [&rng](Eigen::MatrixXd& mat, double lo, double hi) {
        for (Eigen::Index i = 0; i < mat.rows(); ++i) {
            for (Eigen::Index j = 0; j < mat.cols(); ++j) mat(i, j) = rng.uniform(lo, hi);
        }
    };
    fill(p.beta, -dynScale, dynScale);
    fill(p.B, -dynScale, dynScale);
    fill(p.A, -1.0, 1.0);
    for (Eigen::Index j = 0; j < p.b.size(); ++j) p.b[j] = rng.uniform(0.0, 1.0);
    return p;
}

std::int64_t paramCount(const DictionarySpec& spec, int inputDim, int numClasses) {
    const std::int64_t d = spec.dimension();
    const std::int64_t m = spec.hiddenDim();
    return d * m + static_cast<std::int64_t>(inputDim) * m +
           m * numClasses + numClasses;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
    const double maxLogit = logits.maxCoeff();
    Eigen::VectorXd e = (logits.array() - maxLogit).exp();
    return e / e.sum();
}

Eigen::VectorXd logSoftmax(const Eigen::VectorXd& logits) {
    const double maxLogit = logits.maxCoeff();
    const Eigen::ArrayXd shifted = logits.array() - maxLogit;
    const double logSumExp = std::log(shifted.exp().sum());
    return (shifted - logSumExp).matrix();
}

int argmax(const Eigen::VectorXd& v) {
    int best = 0;
    for (int j = 1; j < v.size(); ++j) {
        if (v[j] > v[best]) best = j;
    }
    return best;
}

Prediction predict(const Parameters& params, const DictionarySpec& spec,
                   const TimeSeries& ts, int substeps) {
    const Trajectory traj = solveForward(params, spec, ts, substeps);
    Prediction pred;
    pred.hiddenFinal = traj.finalState();
    pred.probabilities = softmax(params.A * pred.hiddenFinal + params.b);
    return pred;
}

double loss(const Parameters& params, const DictionarySpec& spec,
            const std::vector<TimeSeries>& batch, int substeps) {
    if (batch.empty()) throw ConfigError("loss: empty batch");
    double total = 0.0;
    for (const auto& ts : batch) {
        if (!ts.labeled()) throw ConfigError("loss: unlabeled sample '" + ts.id + "'");
        const Trajectory traj = solveForward(params, spec, ts, substeps);
        const Eigen::VectorXd logProbs =
            logSoftmax(params.A * traj.finalState() + params.b);
        total -= ts.label.dot(logProbs);
    }
    return total / static_cast<double>(batch.size());
}

}  // namespace naed
