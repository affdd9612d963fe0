#pragma once

#include <Eigen/Core>
#include <vector>

#include "naed/dictionary.hpp"
#include "naed/model.hpp"
#include "naed/signal.hpp"

namespace naed {

// Partial derivatives of the batch cross-entropy, shaped like Parameters.
struct Gradients {
    Eigen::MatrixXd dBeta;  // m x d
    Eigen::MatrixXd dB;     // m x n
    Eigen::MatrixXd dA;     // |Y| x m
    Eigen::VectorXd db;     // |Y|

    static Gradients zero(const Parameters& like);
    bool allFinite() const;
    Gradients& operator+=(const Gradients& other);
    Gradients& operator*=(double s);
    double maxAbs() const;
};

// Adjoint-method gradients of the mean cross-entropy over the batch:
// per sample, a forward solve, a backward adjoint solve from
// l(T) = -(1/N) A^T (y - yhat), then trapezoid quadrature of
// l(t) Xi(h(t))^T and l(t) x(t)^T over the fine grid. The readout blocks
// come directly from the residuals (no integration needed).
//
// Per-sample work may run in parallel; accumulation happens in batch order
// so results are bit-identical regardless of the worker count.
struct BatchGradients {
    double loss = 0.0;
    Gradients grads;
};

BatchGradients adjointGradients(const Parameters& params, const DictionarySpec& spec,
                                const std::vector<TimeSeries>& batch, int substeps,
                                int threads = 0);

// Independent verification oracle: central differences of the discretized
// loss, coordinate by coordinate, with per-coordinate step
// eps * max(1, |theta|). Shares nothing with the adjoint path except the
// forward solver that defines the loss itself.
Gradients finiteDifferenceOracle(const Parameters& params, const DictionarySpec& spec,
                                 const std::vector<TimeSeries>& batch, int substeps,
                                 double eps = 1e-5, int threads = 0);

// Largest relative mismatch per block, using max(|a|,|b|,floor) scaling.
// floor <= 0 picks 1e-3 times the gradients' own magnitude, so near-zero
// entries are judged on an absolute scale.
struct GradientComparison {
    double maxRelBeta = 0.0;
    double maxRelB = 0.0;
    double maxRelA = 0.0;
    double maxRelb = 0.0;
    double maxRelOverall() const;
};

GradientComparison compareGradients(const Gradients& a, const Gradients& b,
                                    double floor = -1.0);

}  // namespace naed
