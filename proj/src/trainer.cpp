#include "naed/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "naed/integrator.hpp"
#include "naed/parallel.hpp"
#include "naed/rng.hpp"

namespace naed {

void TrainConfig::validate() const {
    if (!(learningRate > 0.0)) throw ConfigError("train: learningRate must be positive");
    if (maxEpochs < 1) throw ConfigError("train: maxEpochs must be >= 1");
    if (substeps < 1) throw ConfigError("train: substeps must be >= 1");
    if (patience < 1) throw ConfigError("train: patience must be >= 1");
    if (sparseLambda < 0.0) throw ConfigError("train: sparseLambda must be >= 0");
    if (batchSize < 0) throw ConfigError("train: batchSize must be >= 0 (0 = full)");
}

AdamState::AdamState(const Parameters& like)
    : m_(Gradients::zero(like)), v_(Gradients::zero(like)) {}

namespace {

template <typename Mat>
void adamUpdate(Mat& param, const Mat& grad, Mat& m, Mat& v, const TrainConfig& config,
                int t) {
    const double b1 = config.adamBeta1, b2 = config.adamBeta2;
    m = b1 * m + (1.0 - b1) * grad;
    v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
    const double mCorr = 1.0 - std::pow(b1, t);
    const double vCorr = 1.0 - std::pow(b2, t);
    param.array() -= config.learningRate * (m.array() / mCorr) /
                     ((v.array() / vCorr).sqrt() + config.adamEps);
}

}  // namespace

void AdamState::step(Parameters& params, const Gradients& grads, const TrainConfig& config) {
    ++t_;
    adamUpdate(params.beta, grads.dBeta, m_.dBeta, v_.dBeta, config, t_);
    adamUpdate(params.B, grads.dB, m_.dB, v_.dB, config, t_);
    adamUpdate(params.A, grads.dA, m_.dA, v_.dA, config, t_);
    adamUpdate(params.b, grads.db, m_.db, v_.db, config, t_);
}

void thresholdBeta(Parameters& params, double lambda) {
    if (lambda <= 0.0) return;
    for (Eigen::Index i = 0; i < params.beta.rows(); ++i) {
        for (Eigen::Index j = 0; j < params.beta.cols(); ++j) {
            if (std::abs(params.beta(i, j)) < lambda) params.beta(i, j) = 0.0;
        }
    }
}

int nonzeroBetaCount(const Parameters& params) {
    int count = 0;
    for (Eigen::Index i = 0; i < params.beta.rows(); ++i) {
        for (Eigen::Index j = 0; j < params.beta.cols(); ++j) {
            if (params.beta(i, j) != 0.0) ++count;
        }
    }
    return count;
}

double evaluateAccuracy(const Parameters& params, const DictionarySpec& spec,
                        const Dataset& split, int substeps, int threads) {
    if (split.series.empty()) throw ConfigError("evaluate: empty split");
    const int n = static_cast<int>(split.series.size());
    std::vector<int> correct(n, 0);
    parallelFor(
        n,
        [&](int i) {
            const auto& ts = split.series[i];
            try {
                const Prediction p = predict(params, spec, ts, substeps);
                correct[i] = argmax(p.probabilities) == ts.labelIndex() ? 1 : 0;
            } catch (const BlowUp&) {
                correct[i] = 0;  // blown-up samples count as misses
            }
        },
        threads);
    return std::accumulate(correct.begin(), correct.end(), 0) /
           static_cast<double>(n);
}

namespace {

std::vector<TimeSeries> gatherBatch(const Dataset& data, const std::vector<int>& order,
                                    std::size_t begin, std::size_t end) {
    std::vector<TimeSeries> batch;
    batch.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) batch.push_back(data.series[order[i]]);
    return batch;
}

}  // namespace

std::pair<Parameters, TrainReport> trainFrom(Parameters params, const Dataset& trainSplit,
                                             const Dataset& testSplit,
                                             const DictionarySpec& spec,
                                             const TrainConfig& config,
                                             const EpochObserver& observer) {
    config.validate();
    if (trainSplit.series.empty()) throw ConfigError("train: empty training split");
    const auto started = std::chrono::steady_clock::now();

    const int n = static_cast<int>(trainSplit.series.size());
    const int batchSize = config.batchSize == 0 ? n : std::min(config.batchSize, n);
    const bool fullBatch = batchSize == n;

    AdamState adam(params);
    Rng shuffleRng(config.seed ^ 0xBA7C4u);

    TrainReport report;
    Parameters best = params;
    double bestLoss = std::numeric_limits<double>::infinity();
    double prevLoss = std::numeric_limits<double>::infinity();
    int stablePatience = 0;

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 1; epoch <= config.maxEpochs; ++epoch) {
        if (!fullBatch) {
            // seeded Fisher-Yates, independent of library shuffle details
            for (int i = n - 1; i > 0; --i) {
                const auto j = static_cast<int>(shuffleRng.integer(0, i));
                std::swap(order[i], order[j]);
            }
        }

        double epochLoss = 0.0;
        int seen = 0;
        std::vector<TimeSeries> scratch;
        for (int begin = 0; begin < n; begin += batchSize) {
            const int end = std::min(n, begin + batchSize);
            // the full-batch default uses the split in place; mini-batches copy
            if (!fullBatch) scratch = gatherBatch(trainSplit, order, begin, end);
            const std::vector<TimeSeries>& batch = fullBatch ? trainSplit.series : scratch;
            BatchGradients bg;
            try {
                bg = adjointGradients(params, spec, batch, config.substeps, config.threads);
            } catch (const BlowUp& e) {
                throw BlowUpDuringTraining(epoch, e.sampleId, e.time);
            }
            adam.step(params, bg.grads, config);
            if (config.sparseLambda > 0.0) thresholdBeta(params, config.sparseLambda);
            epochLoss += bg.loss * (end - begin);
            seen += end - begin;
        }
        epochLoss /= seen;
        report.lossHistory.push_back(epochLoss);
        report.epochsRun = epoch;
        if (observer) observer(epoch, params, epochLoss);

        if (epochLoss < bestLoss) {
            bestLoss = epochLoss;
            best = params;
        }

        if (std::isfinite(prevLoss)) {
            const double rel = std::abs(epochLoss - prevLoss) /
                               std::max(1e-12, std::abs(prevLoss));
            stablePatience = rel < config.convergenceTol ? stablePatience + 1 : 0;
            if (stablePatience >= config.patience) {
                report.converged = true;
                break;
            }
        }
        prevLoss = epochLoss;
    }

    report.nonzeroBetaCount = nonzeroBetaCount(best);
    report.trainAccuracy =
        evaluateAccuracy(best, spec, trainSplit, config.substeps, config.threads);
    if (!testSplit.series.empty()) {
        report.testAccuracy =
            evaluateAccuracy(best, spec, testSplit, config.substeps, config.threads);
    }
    report.wallTimeSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return {std::move(best), std::move(report)};
}

std::pair<Parameters, TrainReport> train(const Dataset& trainSplit, const Dataset& testSplit,
                                         const DictionarySpec& spec, const TrainConfig& config,
                                         const EpochObserver& observer) {
    Parameters initial =
        initialize(spec, trainSplit.inputDim, trainSplit.numClasses, config.seed);
    return trainFrom(std::move(initial), trainSplit, testSplit, spec, config, observer);
}

std::vector<int> stratifiedFolds(const Dataset& data, int folds, std::uint64_t seed) {
    if (folds < 2) throw ConfigError("stratifiedFolds: need at least 2 folds");
    if (static_cast<int>(data.series.size()) < folds) {
        throw ConfigError("stratifiedFolds: fewer samples than folds");
    }
    std::vector<std::vector<int>> byClass(data.numClasses);
    for (int i = 0; i < static_cast<int>(data.series.size()); ++i) {
        byClass[data.series[i].labelIndex()].push_back(i);
    }
    Rng rng(seed ^ 0xF01D5u);
    std::vector<int> fold(data.series.size(), 0);
    int cursor = 0;  // continues across classes so fold sizes stay balanced
    for (auto& members : byClass) {
        for (int i = static_cast<int>(members.size()) - 1; i > 0; --i) {
            const auto j = static_cast<int>(rng.integer(0, i));
            std::swap(members[i], members[j]);
        }
        for (int idx : members) fold[idx] = (cursor++) % folds;
    }
    return fold;
}

LambdaChoice crossValidateLambda(const Dataset& data, const DictionarySpec& spec,
                                 const TrainConfig& config,
                                 const std::vector<double>& lambdaGrid, int folds) {
    if (lambdaGrid.empty()) throw ConfigError("crossValidateLambda: empty grid");
    if (static_cast<int>(data.series.size()) < folds) {
        throw ConfigError("crossValidateLambda: dataset smaller than fold count");
    }
    const std::vector<int> fold = stratifiedFolds(data, folds, config.seed);

    LambdaChoice choice;
    choice.lambdaGrid = lambdaGrid;
    choice.foldAccuracy.assign(lambdaGrid.size(), std::vector<double>(folds, 0.0));

    for (std::size_t li = 0; li < lambdaGrid.size(); ++li) {
        for (int f = 0; f < folds; ++f) {
            Dataset trainPart, heldOut;
            trainPart.inputDim = heldOut.inputDim = data.inputDim;
            trainPart.numClasses = heldOut.numClasses = data.numClasses;
            for (std::size_t i = 0; i < data.series.size(); ++i) {
                (fold[i] == f ? heldOut : trainPart).series.push_back(data.series[i]);
            }
            TrainConfig foldConfig = config;
            foldConfig.sparseLambda = lambdaGrid[li];
            auto [params, report] = train(trainPart, heldOut, spec, foldConfig);
            choice.foldAccuracy[li][f] = report.testAccuracy;
        }
    }

    choice.meanAccuracy.resize(lambdaGrid.size());
    std::size_t bestIdx = 0;
    for (std::size_t li = 0; li < lambdaGrid.size(); ++li) {
        const auto& scores = choice.foldAccuracy[li];
        choice.meanAccuracy[li] =
            std::accumulate(scores.begin(), scores.end(), 0.0) / scores.size();
    }
    for (std::size_t li = 1; li < lambdaGrid.size(); ++li) {
        const bool better = choice.meanAccuracy[li] > choice.meanAccuracy[bestIdx];
        const bool tieSmaller = choice.meanAccuracy[li] == choice.meanAccuracy[bestIdx] &&
                                lambdaGrid[li] < lambdaGrid[bestIdx];
        if (better || tieSmaller) bestIdx = li;
    }
    choice.lambda = lambdaGrid[bestIdx];
    return choice;
}

}  // namespace naed
