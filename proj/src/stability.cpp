#include "naed/stability.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "naed/integrator.hpp"
#include "naed/parallel.hpp"
#include "naed/rng.hpp"

namespace naed {

namespace {

double spectralNorm(const Eigen::MatrixXd& mat) {
    if (mat.size() == 0) return 0.0;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat);
    return svd.singularValues()[0];
}

// exact L1 norm of the piecewise-linear function through (times, values),
// splitting intervals at sign changes
double piecewiseLinearL1(const std::vector<double>& times, const std::vector<double>& values) {
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < times.size(); ++j) {
        const double dt = times[j + 1] - times[j];
        const double a = values[j], b = values[j + 1];
        if (a * b >= 0.0) {
            total += 0.5 * dt * (std::abs(a) + std::abs(b));
        } else {
            const double tCross = dt * std::abs(a) / (std::abs(a) + std::abs(b));
            total += 0.5 * tCross * std::abs(a) + 0.5 * (dt - tCross) * std::abs(b);
        }
    }
    return total;
}

}  // namespace

std::string StabilityReport::summary() const {
    std::ostringstream out;
    out << "dictionary Lipschitz bound: " << lipschitzDict << "\n"
        << "||B|| = " << normB << ", ||beta|| = " << normBeta << "\n"
        << "classifier constant L = " << classifierL << "\n"
        << "deterministic: " << deterministicViolations << " violations in "
        << deterministicTrials << " trials (max ratio " << maxDeterministicRatio << ")\n"
        << "wiener: empirical tail " << empiricalTail << " vs bound " << tailBound << " at r = "
        << tailR << " over " << wienerTrials << " paths (max |dC| " << maxWienerDeviation
        << ")\n"
        << "deterministic bound " << (deterministicPassed() ? "holds" : "VIOLATED") << ", tail bound "
        << (wienerPassed() ? "holds" : "VIOLATED") << "\n";
    return out.str();
}

StabilityReport stabilityCheck(const Parameters& params, const DictionarySpec& spec,
                               const TimeSeries& cleanSignal, const StabilityConfig& config) {
    cleanSignal.validate();
    if (cleanSignal.inputDim() != params.inputDim()) {
        throw ConfigError("stabilityCheck: signal dimension does not match parameters");
    }

    StabilityReport report;
    const double T = cleanSignal.finalTime();
    const int n = params.inputDim();

    const Prediction clean = predict(params, spec, cleanSignal, config.substeps);

    double radius = config.polyDomainRadius;
    if (radius <= 0.0) {
        const Trajectory traj = solveForward(params, spec, cleanSignal, config.substeps);
        double maxNorm = 0.0;
        for (int j = 0; j < traj.grid.nodes(); ++j) {
            maxNorm = std::max(maxNorm, traj.states.col(j).norm());
        }
        radius = std::max(1.0, 2.0 * maxNorm);
    }

    report.lipschitzDict = lipschitzEstimate(spec, radius);
    report.normB = spectralNorm(params.B);
    report.normBeta = spectralNorm(params.beta);
    report.classifierL =
        report.normB * std::exp(report.lipschitzDict * T * report.normBeta);
    const double L = report.classifierL;

    const Rng root(config.seed);
    const std::size_t M = cleanSignal.times.size();

    // --- deterministic L1-bounded perturbations ---------------------------
    report.deterministicTrials = config.deterministicTrials;
    std::vector<double> detRatio(config.deterministicTrials, 0.0);
    parallelFor(
        config.deterministicTrials,
        [&](int trial) {
            Rng rng = root.derive(0xDE7E0000ULL + trial);
            TimeSeries perturbed = cleanSignal;
            // random piecewise-linear perturbation scaled to a random
            // fraction of the L1 budget
            std::vector<std::vector<double>> eta(n, std::vector<double>(M));
            double l1 = 0.0;
            for (int r = 0; r < n; ++r) {
                for (std::size_t j = 0; j < M; ++j) eta[r][j] = rng.gaussian();
            }
            for (int r = 0; r < n; ++r) l1 += piecewiseLinearL1(cleanSignal.times, eta[r]);
            const double target = config.perturbationL1 * rng.uniform01();
            const double scale = l1 > 0.0 ? target / l1 : 0.0;
            double etaL1 = 0.0;
            for (int r = 0; r < n; ++r) {
                for (std::size_t j = 0; j < M; ++j) {
                    eta[r][j] *= scale;
                    perturbed.values(r, static_cast<Eigen::Index>(j)) += eta[r][j];
                }
                etaL1 += piecewiseLinearL1(cleanSignal.times, eta[r]);
            }
            const Prediction p = predict(params, spec, perturbed, config.substeps);
            const double diff = (p.probabilities - clean.probabilities).norm();
            const double bound = L * etaL1;
            detRatio[trial] = bound > 0.0 ? diff / bound : (diff > 0.0 ? HUGE_VAL : 0.0);
        },
        config.threads);
    for (double ratio : detRatio) {
        report.maxDeterministicRatio = std::max(report.maxDeterministicRatio, ratio);
        if (ratio > 1.0) ++report.deterministicViolations;
    }

    // --- white-noise perturbations ----------------------------------------
    // eta dt = dW realized as the piecewise-constant rate dW_j / dt_j on the
    // sample intervals, so the integrated perturbation reproduces the path.
    report.wienerTrials = config.wienerTrials;
    report.tailR = config.tailRFactor * std::sqrt(static_cast<double>(n) * T) * L;
    report.tailBound =
        2.0 * n *
        std::exp(-report.tailR * report.tailR /
                 (2.0 * n * T * L * L));

    const FineGrid grid = FineGrid::fromSampleTimes(cleanSignal.times, config.substeps);
    std::vector<double> wienerDiff(config.wienerTrials, 0.0);
    parallelFor(
        config.wienerTrials,
        [&](int trial) {
            Rng rng = root.derive(0x71E9E0000ULL + trial);
            // Brownian increments per sample interval, per input coordinate
            std::vector<std::vector<double>> rate(n, std::vector<double>(M - 1));
            for (std::size_t j = 0; j + 1 < M; ++j) {
                const double dt = cleanSignal.times[j + 1] - cleanSignal.times[j];
                const double sd = std::sqrt(dt);
                for (int r = 0; r < n; ++r) rate[r][j] = rng.gaussian(0.0, sd) / dt;
            }
            Eigen::VectorXd base(n);
            const auto forcing = [&](double t, Eigen::VectorXd& out) {
                interpolateInto(cleanSignal, t, out);
                // locate the sample interval containing t
                const auto it = std::upper_bound(cleanSignal.times.begin(),
                                                 cleanSignal.times.end(), t);
                std::size_t j = it == cleanSignal.times.begin()
                                    ? 0
                                    : static_cast<std::size_t>(it - cleanSignal.times.begin()) - 1;
                if (j >= M - 1) j = M - 2;
                for (int r = 0; r < n; ++r) out[r] += rate[r][j];
            };
            const Trajectory traj = solveForwardForced(params, spec, grid, forcing);
            const Eigen::VectorXd probs =
                softmax(params.A * traj.finalState() + params.b);
            wienerDiff[trial] = (probs - clean.probabilities).norm();
        },
        config.threads);

    int tailCount = 0;
    for (double diff : wienerDiff) {
        report.maxWienerDeviation = std::max(report.maxWienerDeviation, diff);
        if (diff >= report.tailR) ++tailCount;
    }
    report.empiricalTail = static_cast<double>(tailCount) / config.wienerTrials;
    return report;
}

}  // namespace naed
