#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "naed/signal.hpp"

namespace naed::testing {

// Exact matrix exponential of a 2x2 matrix with a complex-conjugate
// eigenvalue pair alpha +- i*omega:
//   exp(M t) = e^{alpha t} [ cos(omega t) I + sin(omega t)/omega (M - alpha I) ]
inline Eigen::Matrix2d expm2ComplexPair(const Eigen::Matrix2d& M, double t) {
    const double alpha = 0.5 * M.trace();
    const double disc = M.determinant() - alpha * alpha;  // omega^2
    const double omega = std::sqrt(disc);
    return std::exp(alpha * t) *
           (std::cos(omega * t) * Eigen::Matrix2d::Identity() +
            std::sin(omega * t) / omega * (M - alpha * Eigen::Matrix2d::Identity()));
}

// Exact solution at the final time of dh/dt = M h + Bvec * x(t), h(0) = 0,
// where x is the piecewise-linear interpolant of (times, values). Each
// interval is an affine-forced linear ODE solved in closed form, so this is
// an independent oracle for the RK4 path (exact up to rounding).
inline Eigen::Vector2d piecewiseLinearForcedExact(const Eigen::Matrix2d& M,
                                                  const Eigen::Vector2d& Bvec,
                                                  const std::vector<double>& times,
                                                  const std::vector<double>& values) {
    const Eigen::Matrix2d Minv = M.inverse();
    Eigen::Vector2d h = Eigen::Vector2d::Zero();
    for (std::size_t j = 0; j + 1 < times.size(); ++j) {
        const double dt = times[j + 1] - times[j];
        const Eigen::Vector2d c = Bvec * values[j];
        const Eigen::Vector2d d = Bvec * (values[j + 1] - values[j]) / dt;
        // particular solution p + q (t - t_j) with q = -M^{-1} d, p = M^{-1}(q - c)
        const Eigen::Vector2d q = -Minv * d;
        const Eigen::Vector2d p = Minv * (q - c);
        h = expm2ComplexPair(M, dt) * (h - p) + p + q * dt;
    }
    return h;
}

// Damped-oscillator companion matrix, eigenvalues -gamma/2 +- i sqrt(w2 - gamma^2/4).
inline Eigen::Matrix2d oscillatorCompanion(double gamma = 0.2, double w2 = 1.0) {
    Eigen::Matrix2d M;
    M << 0.0, 1.0, -w2, -gamma;
    return M;
}

inline naed::TimeSeries makeSeries(const std::string& id, const std::vector<double>& times,
                                   const std::vector<double>& scalarValues, int label = -1,
                                   int numClasses = 2) {
    naed::TimeSeries ts;
    ts.id = id;
    ts.times = times;
    ts.values.resize(1, static_cast<Eigen::Index>(scalarValues.size()));
    for (std::size_t j = 0; j < scalarValues.size(); ++j) {
        ts.values(0, static_cast<Eigen::Index>(j)) = scalarValues[j];
    }
    if (label >= 0) ts.label = naed::oneHot(label, numClasses);
    return ts;
}

inline std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> t(count);
    for (int j = 0; j < count; ++j) t[j] = lo + (hi - lo) * j / (count - 1);
    return t;
}

}  // namespace naed::testing
