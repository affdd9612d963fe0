#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "naed/dictionary.hpp"
#include "naed/signal.hpp"

namespace naed {

// The trainable set: hidden dynamics dh/dt = beta * Xi(h) + B * x(t),
// readout yhat = softmax(A h(T) + b).
struct Parameters {
    Eigen::MatrixXd beta;  // m x d
    Eigen::MatrixXd B;     // m x n
    Eigen::MatrixXd A;     // |Y| x m
    Eigen::VectorXd b;     // |Y|

    int hiddenDim() const { return static_cast<int>(beta.rows()); }
    int dictDim() const { return static_cast<int>(beta.cols()); }
    int inputDim() const { return static_cast<int>(B.cols()); }
    int numClasses() const { return static_cast<int>(A.rows()); }

    bool allFinite() const {
        return beta.allFinite() && B.allFinite() && A.allFinite() && b.allFinite();
    }
};

struct Prediction {
    Eigen::VectorXd probabilities;  // |Y|, sums to 1
    Eigen::VectorXd hiddenFinal;    // h(T)
};

// Small random parameters, following the blow-up discussion: uniform [-1,1]
// for dictionaries whose entries have Lipschitz constant ~1 (linear
// polynomial, Fourier), uniform [-0.1,0.1] for beta and B when the
// dictionary contains nonlinear polynomials. b starts in [0,1].
Parameters initialize(const DictionarySpec& spec, int inputDim, int numClasses,
                      std::uint64_t seed);

Parameters zeroParameters(const DictionarySpec& spec, int inputDim, int numClasses);

// d*m + n*m + m*|Y| + |Y|
std::int64_t paramCount(const DictionarySpec& spec, int inputDim, int numClasses);

// Numerically stable softmax (max subtraction).
Eigen::VectorXd softmax(const Eigen::VectorXd& logits);
// log softmax, for the loss.
Eigen::VectorXd logSoftmax(const Eigen::VectorXd& logits);

int argmax(const Eigen::VectorXd& v);  // ties resolve to the lowest index

// Forward solve + readout. Throws BlowUp if the hidden state escapes.
Prediction predict(const Parameters& params, const DictionarySpec& spec,
                   const TimeSeries& ts, int substeps);

// Mean cross-entropy over the batch; all members must be labeled.
double loss(const Parameters& params, const DictionarySpec& spec,
            const std::vector<TimeSeries>& batch, int substeps);

}  // namespace naed
