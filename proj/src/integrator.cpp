#include "naed/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace naed {

FineGrid FineGrid::fromSampleTimes(const std::vector<double>& sampleTimes, int substeps) {
    if (substeps < 1) throw ConfigError("substeps must be >= 1");
    if (sampleTimes.size() < 2) throw ConfigError("grid needs at least two sample times");
    FineGrid g;
    g.times.reserve((sampleTimes.size() - 1) * substeps + 1);
    for (std::size_t j = 0; j + 1 < sampleTimes.size(); ++j) {
        const double t0 = sampleTimes[j];
        const double dt = (sampleTimes[j + 1] - t0) / substeps;
        for (int s = 0; s < substeps; ++s) g.times.push_back(t0 + s * dt);
    }
    g.times.push_back(sampleTimes.back());
    return g;
}

void Trajectory::stateAt(double t, Eigen::VectorXd& out) const {
    const auto& times = grid.times;
    if (t <= times.front()) {
        out = states.col(0);
        return;
    }
    if (t >= times.back()) {
        out = states.col(states.cols() - 1);
        return;
    }
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const auto j = static_cast<Eigen::Index>(it - times.begin()) - 1;
    const double w = (t - times[j]) / (times[j + 1] - times[j]);
    out = (1.0 - w) * states.col(j) + w * states.col(j + 1);
}

namespace {

// RK4 over grid nodes with a right-hand side rhs(t, state, out).
// Fills states column by column starting from states.col(0).
// All stage vectors are preallocated; rhs sees plain VectorXd references.
template <typename Rhs>
void integrateGrid(const FineGrid& grid, Eigen::MatrixXd& states, double guard, Rhs&& rhs) {
    const int m = static_cast<int>(states.rows());
    Eigen::VectorXd h(m), k1(m), k2(m), k3(m), k4(m), stage(m);
    for (int j = 0; j + 1 < grid.nodes(); ++j) {
        const double t0 = grid.times[j];
        const double dt = grid.times[j + 1] - t0;
        const double tm = t0 + 0.5 * dt;
        const double t1 = grid.times[j + 1];
        h = states.col(j);

        rhs(t0, h, k1);
        stage = h + (0.5 * dt) * k1;
        rhs(tm, stage, k2);
        stage = h + (0.5 * dt) * k2;
        rhs(tm, stage, k3);
        stage = h + dt * k3;
        rhs(t1, stage, k4);
        states.col(j + 1) = h + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double norm = states.col(j + 1).template lpNorm<Eigen::Infinity>();
        if (!(norm <= guard)) throw BlowUp(t1);
    }
}

}  // namespace

Trajectory solveForwardForced(const Parameters& params, const DictionarySpec& spec,
                              const FineGrid& grid, const ForcingFn& forcing,
                              double blowUpGuard) {
    const int m = spec.hiddenDim();
    Trajectory traj;
    traj.grid = grid;
    traj.states.resize(m, grid.nodes());
    traj.states.col(0).setZero();  // h(0) = 0 by construction

    DictionaryEvaluator dict(spec);
    Eigen::VectorXd xi(spec.dimension());
    Eigen::VectorXd x(params.inputDim());

    integrateGrid(traj.grid, traj.states, blowUpGuard,
                  [&](double t, const Eigen::VectorXd& h, Eigen::VectorXd& out) {
                      dict.values(h, xi);
                      forcing(t, x);
                      out.noalias() = params.beta * xi;
                      out.noalias() += params.B * x;
                  });
    return traj;
}

Trajectory solveForward(const Parameters& params, const DictionarySpec& spec,
                        const TimeSeries& ts, int substeps, double blowUpGuard) {
    // Grid-aligned fast path: stage forcing values come from closed-form
    // interpolation weights inside the current sample interval, with no
    // search and no callback indirection.
    const FineGrid grid = FineGrid::fromSampleTimes(ts.times, substeps);
    const int m = spec.hiddenDim();
    Trajectory traj;
    traj.grid = grid;
    traj.states.resize(m, grid.nodes());
    traj.states.col(0).setZero();  // h(0) = 0 by construction

    DictionaryEvaluator dict(spec);
    Eigen::VectorXd xi(spec.dimension());
    Eigen::VectorXd x0(ts.inputDim()), x1(ts.inputDim()), xm(ts.inputDim());
    Eigen::VectorXd h(m), k1(m), k2(m), k3(m), k4(m), stage(m);

    auto rhs = [&](const Eigen::VectorXd& state, const Eigen::VectorXd& x,
                   Eigen::VectorXd& out) {
        dict.values(state, xi);
        out.noalias() = params.beta * xi;
        out.noalias() += params.B * x;
    };

    int node = 0;
    const int intervals = static_cast<int>(ts.times.size()) - 1;
    for (int j = 0; j < intervals; ++j) {
        const auto left = ts.values.col(j);
        const auto right = ts.values.col(j + 1);
        for (int s = 0; s < substeps; ++s, ++node) {
            const double t0 = grid.times[node];
            const double t1 = grid.times[node + 1];
            const double dt = t1 - t0;
            const double w0 = static_cast<double>(s) / substeps;
            const double w1 = static_cast<double>(s + 1) / substeps;
            const double wm = 0.5 * (w0 + w1);
            x0 = (1.0 - w0) * left + w0 * right;
            x1 = (1.0 - w1) * left + w1 * right;
            xm = (1.0 - wm) * left + wm * right;

            h = traj.states.col(node);
            rhs(h, x0, k1);
            stage = h + (0.5 * dt) * k1;
            rhs(stage, xm, k2);
            stage = h + (0.5 * dt) * k2;
            rhs(stage, xm, k3);
            stage = h + dt * k3;
            rhs(stage, x1, k4);
            traj.states.col(node + 1) = h + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

            const double norm = traj.states.col(node + 1).lpNorm<Eigen::Infinity>();
            if (!(norm <= blowUpGuard)) throw BlowUp(t1);
        }
    }
    return traj;
}

Trajectory solveAdjoint(const Parameters& params, const DictionarySpec& spec,
                        const Trajectory& forward, const Eigen::VectorXd& terminal,
                        double blowUpGuard) {
    if (!terminal.allFinite()) throw NonFiniteInput("solveAdjoint: non-finite terminal value");
    const int m = spec.hiddenDim();
    const int nodes = forward.grid.nodes();

    Trajectory adj;
    adj.grid = forward.grid;
    adj.states.resize(m, nodes);
    adj.states.col(nodes - 1) = terminal;

    DictionaryEvaluator dict(spec);
    Eigen::VectorXd xi(spec.dimension());
    Eigen::MatrixXd jac(spec.dimension(), m);
    Eigen::VectorXd hEnd(m), hMid(m), hStart(m), lam(m), w(spec.dimension());
    Eigen::VectorXd k1(m), k2(m), k3(m), k4(m), stage(m);

    // dl/dt = -(beta J)^T l = -J^T (beta^T l); evaluated as two thin products.
    auto rhsAt = [&](const Eigen::VectorXd& hState, const Eigen::VectorXd& l,
                     Eigen::VectorXd& out) {
        dict.valuesAndJacobian(hState, xi, jac);
        w.noalias() = params.beta.transpose() * l;
        out.noalias() = -(jac.transpose() * w);
    };

    // march backward: step from node j+1 down to node j
    for (int j = nodes - 2; j >= 0; --j) {
        const double t1 = adj.grid.times[j + 1];
        const double t0 = adj.grid.times[j];
        const double dt = t1 - t0;  // positive; we step with -dt
        lam = adj.states.col(j + 1);
        hEnd = forward.states.col(j + 1);
        hStart = forward.states.col(j);
        hMid = 0.5 * (hStart + hEnd);

        rhsAt(hEnd, lam, k1);
        stage = lam - (0.5 * dt) * k1;
        rhsAt(hMid, stage, k2);
        stage = lam - (0.5 * dt) * k2;
        rhsAt(hMid, stage, k3);
        stage = lam - dt * k3;
        rhsAt(hStart, stage, k4);
        adj.states.col(j) = lam - (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double norm = adj.states.col(j).lpNorm<Eigen::Infinity>();
        if (!(norm <= blowUpGuard)) throw BlowUp(t0);
    }
    return adj;
}

Eigen::VectorXd quadrature(const FineGrid& grid, const Eigen::MatrixXd& gridValues) {
    if (gridValues.cols() != grid.nodes()) {
        throw ConfigError("quadrature: one value column per grid node required");
    }
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(gridValues.rows());
    for (int j = 0; j + 1 < grid.nodes(); ++j) {
        const double w = 0.5 * (grid.times[j + 1] - grid.times[j]);
        acc += w * (gridValues.col(j) + gridValues.col(j + 1));
    }
    return acc;
}

double quadrature(const FineGrid& grid, const std::vector<double>& gridValues) {
    if (static_cast<int>(gridValues.size()) != grid.nodes()) {
        throw ConfigError("quadrature: one value per grid node required");
    }
    double acc = 0.0;
    for (int j = 0; j + 1 < grid.nodes(); ++j) {
        acc += 0.5 * (grid.times[j + 1] - grid.times[j]) * (gridValues[j] + gridValues[j + 1]);
    }
    return acc;
}

}  // namespace naed
