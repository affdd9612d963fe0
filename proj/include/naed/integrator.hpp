#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "naed/dictionary.hpp"
#include "naed/model.hpp"
#include "naed/signal.hpp"

namespace naed {

// Default guard on ||h||_inf; crossing it raises BlowUp. The dictionary is
// only locally Lipschitz for nonlinear polynomials, so finite-time escape
// is a real failure mode rather than a numerical accident.
inline constexpr double kDefaultBlowUpGuard = 1e6;

// Integration grid: every sample interval [t_j, t_{j+1}] subdivided into
// `substeps` equal pieces. Steps align with the sample grid so the
// piecewise-linear forcing is smooth inside every RK4 step.
struct FineGrid {
    std::vector<double> times;

    static FineGrid fromSampleTimes(const std::vector<double>& sampleTimes, int substeps);
    int nodes() const { return static_cast<int>(times.size()); }
};

struct Trajectory {
    FineGrid grid;
    Eigen::MatrixXd states;  // m x grid.nodes()

    Eigen::VectorXd finalState() const { return states.col(states.cols() - 1); }
    // Linear interpolation of the stored states (used for adjoint stages).
    void stateAt(double t, Eigen::VectorXd& out) const;
};

// Time-varying forcing term evaluated into a preallocated vector.
using ForcingFn = std::function<void(double t, Eigen::VectorXd& out)>;

// Classic RK4 for dh/dt = beta*Xi(h) + B*x(t), h(0) = 0, on the fine grid
// built from ts.times. Stage forcing values come from linear interpolation
// of the sampled signal.
Trajectory solveForward(const Parameters& params, const DictionarySpec& spec,
                        const TimeSeries& ts, int substeps,
                        double blowUpGuard = kDefaultBlowUpGuard);

// Same dynamics under an arbitrary forcing; grid supplied by the caller.
// Used by the stability checker to realize perturbed signals exactly.
Trajectory solveForwardForced(const Parameters& params, const DictionarySpec& spec,
                              const FineGrid& grid, const ForcingFn& forcing,
                              double blowUpGuard = kDefaultBlowUpGuard);

// Backward RK4 for dl/dt = -[beta D_h Xi(h)]^T l from l(T) = terminal down
// to t = 0, on the forward trajectory's grid. Hidden states at stage
// midpoints are linear interpolations of the stored forward nodes.
Trajectory solveAdjoint(const Parameters& params, const DictionarySpec& spec,
                        const Trajectory& forward, const Eigen::VectorXd& terminal,
                        double blowUpGuard = kDefaultBlowUpGuard);

// Composite trapezoid over a (possibly nonuniform) grid. gridValues holds
// one column per node.
Eigen::VectorXd quadrature(const FineGrid& grid, const Eigen::MatrixXd& gridValues);
double quadrature(const FineGrid& grid, const std::vector<double>& gridValues);

}  // namespace naed
