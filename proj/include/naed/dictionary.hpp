#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "naed/errors.hpp"

namespace naed {

enum class DictionaryKind { Polynomial, Fourier };

// Declarative description of the candidate-function basis.
//
// Polynomial(maxDegree k): all monomials of the hidden state up to total
// degree k, each scaled by the inverse factorial of its exponent tuple
// (Taylor normalization). Dimension C(k+m, m).
//
// Fourier(maxMultiplier K, period L): tensor products over coordinates of
// the per-coordinate factor set {1, cos(2*pi*k h/L), sin(2*pi*k h/L)},
// k = 1..K. Dimension (2K+1)^m.
//
// Basis order is part of the checkpoint contract:
//   Polynomial: graded by total degree, then within a degree by exponent
//   tuple with the first coordinate's exponent decreasing first
//   (m=2, k=2: 1, h1, h2, h1^2/2, h1 h2, h2^2/2).
//   Fourier: per-coordinate factor order (1, cos k=1, sin k=1, cos k=2, ...)
//   with the last coordinate varying fastest.
// Both orders put the constant function at index 0.
class DictionarySpec {
public:
    static DictionarySpec polynomial(int hiddenDim, int maxDegree);
    static DictionarySpec fourier(int hiddenDim, int maxMultiplier, double period);

    DictionaryKind kind() const { return kind_; }
    int hiddenDim() const { return m_; }
    int dimension() const { return d_; }

    // Polynomial only
    int maxDegree() const { return k_; }
    // Fourier only
    int maxMultiplier() const { return K_; }
    double period() const { return L_; }

    // Exponent tuples in basis order (polynomial kind), one row per entry.
    const std::vector<std::vector<int>>& exponents() const { return exponents_; }

    bool operator==(const DictionarySpec& other) const {
        return kind_ == other.kind_ && m_ == other.m_ && k_ == other.k_ &&
               K_ == other.K_ && L_ == other.L_;
    }

private:
    DictionarySpec() = default;

    DictionaryKind kind_ = DictionaryKind::Polynomial;
    int m_ = 0;
    int d_ = 0;
    int k_ = 0;       // polynomial max degree
    int K_ = 0;       // fourier max multiplier
    double L_ = 0.0;  // fourier period

    std::vector<std::vector<int>> exponents_;     // polynomial basis
    std::vector<double> taylorCoef_;              // 1/alpha!
    std::vector<std::vector<int>> factorIndex_;   // fourier basis, per-coordinate factor ids

    friend class DictionaryEvaluator;
};

struct DictionaryEval {
    Eigen::VectorXd values;    // Xi(h), length d
    Eigen::MatrixXd jacobian;  // D_h Xi(h), d x m
};

// Workspace-carrying evaluator for use in solver inner loops; one instance
// per thread, no allocation after construction.
class DictionaryEvaluator {
public:
    explicit DictionaryEvaluator(const DictionarySpec& spec);

    const DictionarySpec& spec() const { return spec_; }

    // values must have length d. Throws NonFiniteInput on NaN/inf h.
    void values(const Eigen::VectorXd& h, Eigen::VectorXd& out);
    // jacobian must be d x m.
    void valuesAndJacobian(const Eigen::VectorXd& h, Eigen::VectorXd& values,
                           Eigen::MatrixXd& jacobian);

private:
    void checkFinite(const Eigen::VectorXd& h) const;
    void fourierFactors(const Eigen::VectorXd& h, bool withDerivatives);

    DictionarySpec spec_;
    // fourier factor tables, (2K+1) per coordinate
    Eigen::MatrixXd fac_;   // factor values, m x (2K+1)
    Eigen::MatrixXd dfac_;  // factor derivatives, m x (2K+1)
};

// One-shot convenience form of the evaluator.
DictionaryEval evaluate(const DictionarySpec& spec, const Eigen::VectorXd& h);

// An upper bound on the per-entry Lipschitz constant of the basis.
// Fourier: global bound m * 2*pi*K / L. Polynomial: local bound on the ball
// ||h|| <= domainRadius from the analytic gradients of the monomials.
double lipschitzEstimate(const DictionarySpec& spec, double domainRadius);

}  // namespace naed
