#include "naed/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace naed {

namespace {

// C(n, r) over small arguments; dictionary dimensions stay well inside int64.
std::int64_t binomial(std::int64_t n, std::int64_t r) {
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    std::int64_t result = 1;
    for (std::int64_t i = 1; i <= r; ++i) {
        result = result * (n - r + i) / i;
    }
    return result;
}

void enumerateExponents(int degree, int m, std::vector<int>& current,
                        std::vector<std::vector<int>>& out) {
    if (m == 1) {
        current.push_back(degree);
        out.push_back(current);
        current.pop_back();
        return;
    }
    for (int a = degree; a >= 0; --a) {
        current.push_back(a);
        enumerateExponents(degree - a, m - 1, current, out);
        current.pop_back();
    }
}

double inverseFactorialProduct(const std::vector<int>& alpha) {
    double c = 1.0;
    for (int a : alpha) {
        for (int i = 2; i <= a; ++i) c /= i;
    }
    return c;
}

}  // namespace

DictionarySpec DictionarySpec::polynomial(int hiddenDim, int maxDegree) {
    if (hiddenDim < 1) throw ConfigError("polynomial dictionary: hiddenDim must be positive");
    if (maxDegree < 0) throw ConfigError("polynomial dictionary: maxDegree must be >= 0");
    DictionarySpec s;
    s.kind_ = DictionaryKind::Polynomial;
    s.m_ = hiddenDim;
    s.k_ = maxDegree;
    std::vector<int> scratch;
    for (int degree = 0; degree <= maxDegree; ++degree) {
        enumerateExponents(degree, hiddenDim, scratch, s.exponents_);
    }
    s.d_ = static_cast<int>(s.exponents_.size());
    // sanity: the graded enumeration must match the closed-form count
    if (s.d_ != binomial(maxDegree + hiddenDim, hiddenDim)) {
        throw Error("polynomial basis enumeration does not match C(k+m, m)");
    }
    s.taylorCoef_.reserve(s.exponents_.size());
    for (const auto& alpha : s.exponents_) {
        s.taylorCoef_.push_back(inverseFactorialProduct(alpha));
    }
    return s;
}

DictionarySpec DictionarySpec::fourier(int hiddenDim, int maxMultiplier, double period) {
    if (hiddenDim < 1) throw ConfigError("fourier dictionary: hiddenDim must be positive");
    if (maxMultiplier < 1) throw ConfigError("fourier dictionary: maxMultiplier must be positive");
    if (!(period > 0.0)) throw ConfigError("fourier dictionary: period must be positive");
    DictionarySpec s;
    s.kind_ = DictionaryKind::Fourier;
    s.m_ = hiddenDim;
    s.K_ = maxMultiplier;
    s.L_ = period;
    const int perCoord = 2 * maxMultiplier + 1;
    std::int64_t d = 1;
    for (int i = 0; i < hiddenDim; ++i) d *= perCoord;
    s.d_ = static_cast<int>(d);
    s.factorIndex_.assign(s.d_, std::vector<int>(hiddenDim, 0));
    // last coordinate varies fastest
    for (int idx = 0; idx < s.d_; ++idx) {
        int rest = idx;
        for (int coord = hiddenDim - 1; coord >= 0; --coord) {
            s.factorIndex_[idx][coord] = rest % perCoord;
            rest /= perCoord;
        }
    }
    return s;
}

DictionaryEvaluator::DictionaryEvaluator(const DictionarySpec& spec) : spec_(spec) {
    if (spec_.kind() == DictionaryKind::Fourier) {
        fac_.resize(spec_.hiddenDim(), 2 * spec_.maxMultiplier() + 1);
        dfac_.resize(spec_.hiddenDim(), 2 * spec_.maxMultiplier() + 1);
    }
}

void DictionaryEvaluator::checkFinite(const Eigen::VectorXd& h) const {
    if (!h.allFinite()) {
        throw NonFiniteInput("dictionary evaluated at non-finite hidden state");
    }
}

void DictionaryEvaluator::fourierFactors(const Eigen::VectorXd& h, bool withDerivatives) {
    const double w = 2.0 * std::numbers::pi / spec_.period();
    const int K = spec_.maxMultiplier();
    for (int i = 0; i < spec_.hiddenDim(); ++i) {
        fac_(i, 0) = 1.0;
        if (withDerivatives) dfac_(i, 0) = 0.0;
        const double c1 = std::cos(w * h[i]);
        const double s1 = std::sin(w * h[i]);
        double ck = c1, sk = s1;
        for (int k = 1; k <= K; ++k) {
            if (k > 1) {
                // angle-addition recurrence on (cos k, sin k)
                const double cNext = ck * c1 - sk * s1;
                const double sNext = sk * c1 + ck * s1;
                ck = cNext;
                sk = sNext;
            }
            fac_(i, 2 * k - 1) = ck;
            fac_(i, 2 * k) = sk;
            if (withDerivatives) {
                dfac_(i, 2 * k - 1) = -w * k * sk;
                dfac_(i, 2 * k) = w * k * ck;
            }
        }
    }
}

void DictionaryEvaluator::values(const Eigen::VectorXd& h, Eigen::VectorXd& out) {
    checkFinite(h);
    const int d = spec_.dimension();
    const int m = spec_.hiddenDim();
    if (spec_.kind() == DictionaryKind::Polynomial) {
        for (int j = 0; j < d; ++j) {
            const auto& alpha = spec_.exponents_[j];
            double v = spec_.taylorCoef_[j];
            for (int i = 0; i < m; ++i) {
                for (int p = 0; p < alpha[i]; ++p) v *= h[i];
            }
            out[j] = v;
        }
    } else {
        fourierFactors(h, /*withDerivatives=*/false);
        for (int j = 0; j < d; ++j) {
            const auto& f = spec_.factorIndex_[j];
            double v = 1.0;
            for (int i = 0; i < m; ++i) v *= fac_(i, f[i]);
            out[j] = v;
        }
    }
}

void DictionaryEvaluator::valuesAndJacobian(const Eigen::VectorXd& h, Eigen::VectorXd& values,
                                            Eigen::MatrixXd& jacobian) {
    checkFinite(h);
    const int d = spec_.dimension();
    const int m = spec_.hiddenDim();
    if (spec_.kind() == DictionaryKind::Polynomial) {
        for (int j = 0; j < d; ++j) {
            const auto& alpha = spec_.exponents_[j];
            double v = spec_.taylorCoef_[j];
            for (int i = 0; i < m; ++i) {
                for (int p = 0; p < alpha[i]; ++p) v *= h[i];
            }
            values[j] = v;
            for (int i = 0; i < m; ++i) {
                if (alpha[i] == 0) {
                    jacobian(j, i) = 0.0;
                    continue;
                }
                double g = spec_.taylorCoef_[j] * alpha[i];
                for (int l = 0; l < m; ++l) {
                    const int p = alpha[l] - (l == i ? 1 : 0);
                    for (int q = 0; q < p; ++q) g *= h[l];
                }
                jacobian(j, i) = g;
            }
        }
    } else {
        fourierFactors(h, /*withDerivatives=*/true);
        for (int j = 0; j < d; ++j) {
            const auto& f = spec_.factorIndex_[j];
            double v = 1.0;
            for (int i = 0; i < m; ++i) v *= fac_(i, f[i]);
            values[j] = v;
            for (int i = 0; i < m; ++i) {
                double g = dfac_(i, f[i]);
                if (g != 0.0) {
                    for (int l = 0; l < m; ++l) {
                        if (l != i) g *= fac_(l, f[l]);
                    }
                }
                jacobian(j, i) = g;
            }
        }
    }
}

DictionaryEval evaluate(const DictionarySpec& spec, const Eigen::VectorXd& h) {
    if (h.size() != spec.hiddenDim()) {
        throw ConfigError("evaluate: hidden state length does not match dictionary");
    }
    DictionaryEval out;
    out.values.resize(spec.dimension());
    out.jacobian.resize(spec.dimension(), spec.hiddenDim());
    DictionaryEvaluator eval(spec);
    eval.valuesAndJacobian(h, out.values, out.jacobian);
    return out;
}

double lipschitzEstimate(const DictionarySpec& spec, double domainRadius) {
    if (spec.kind() == DictionaryKind::Fourier) {
        return spec.hiddenDim() * 2.0 * std::numbers::pi * spec.maxMultiplier() / spec.period();
    }
    // Per monomial h^alpha / alpha!: |d_i| <= alpha_i R^(|alpha|-1) / alpha!,
    // so ||grad||_2 <= (R^(|alpha|-1)/alpha!) * ||alpha||_2 on the ball.
    const double R = domainRadius;
    double best = 0.0;
    for (const auto& alpha : spec.exponents()) {
        int total = 0;
        double norm2 = 0.0;
        double invFact = 1.0;
        for (int a : alpha) {
            total += a;
            norm2 += static_cast<double>(a) * a;
            for (int i = 2; i <= a; ++i) invFact /= i;
        }
        if (total == 0) continue;
        const double bound = std::pow(R, total - 1) * invFact * std::sqrt(norm2);
        best = std::max(best, bound);
    }
    return best;
}

}  // namespace naed
