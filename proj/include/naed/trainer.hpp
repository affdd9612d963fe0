#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "naed/gradients.hpp"
#include "naed/model.hpp"
#include "naed/signal.hpp"

namespace naed {

struct TrainConfig {
    double learningRate = 0.01;
    int maxEpochs = 500;
    int batchSize = 0;  // 0 = full batch
    int substeps = 1;
    double adamBeta1 = 0.9;
    double adamBeta2 = 0.999;
    double adamEps = 1e-8;
    double convergenceTol = 1e-5;  // relative loss change
    int patience = 20;             // consecutive small-change epochs to stop
    double sparseLambda = 0.0;     // 0 disables the threshold step
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = resolve from NAED_THREADS / hardware

    void validate() const;
};

struct TrainReport {
    std::vector<double> lossHistory;  // one entry per epoch
    double trainAccuracy = 0.0;
    double testAccuracy = 0.0;
    int nonzeroBetaCount = 0;
    double wallTimeSeconds = 0.0;
    int epochsRun = 0;
    bool converged = false;
};

// ADAM with bias correction. Moments live across threshold steps, so a
// zeroed beta entry keeps its history and may re-enter later.
class AdamState {
public:
    explicit AdamState(const Parameters& like);

    void step(Parameters& params, const Gradients& grads, const TrainConfig& config);
    int stepCount() const { return t_; }

private:
    Gradients m_;
    Gradients v_;
    int t_ = 0;
};

// Zero every beta entry smaller than lambda in magnitude.
void thresholdBeta(Parameters& params, double lambda);

int nonzeroBetaCount(const Parameters& params);

// Called after each epoch's descent+threshold; epoch is 1-based.
using EpochObserver =
    std::function<void(int epoch, const Parameters& params, double lossValue)>;

// Full training loop: repeated {gradient step; optional threshold} until the
// relative loss change stays below convergenceTol for `patience` consecutive
// epochs, or maxEpochs. Returns the best-loss parameters seen.
// Throws BlowUpDuringTraining when a batch member escapes.
std::pair<Parameters, TrainReport> train(const Dataset& trainSplit, const Dataset& testSplit,
                                         const DictionarySpec& spec, const TrainConfig& config,
                                         const EpochObserver& observer = nullptr);

// Like train() but starting from given parameters (used by CV folds).
std::pair<Parameters, TrainReport> trainFrom(Parameters initial, const Dataset& trainSplit,
                                             const Dataset& testSplit, const DictionarySpec& spec,
                                             const TrainConfig& config,
                                             const EpochObserver& observer = nullptr);

// Fraction of samples whose predicted argmax matches the label argmax.
// A sample whose forward solve blows up counts as misclassified.
double evaluateAccuracy(const Parameters& params, const DictionarySpec& spec,
                        const Dataset& split, int substeps, int threads = 0);

struct LambdaChoice {
    double lambda = 0.0;
    // meanAccuracy[i] = mean held-out accuracy of lambdaGrid[i]
    std::vector<double> lambdaGrid;
    std::vector<double> meanAccuracy;
    std::vector<std::vector<double>> foldAccuracy;  // [lambda][fold]
};

// Stratified 5-fold cross-validation over the threshold cutoff; ties prefer
// the smaller lambda.
LambdaChoice crossValidateLambda(const Dataset& data, const DictionarySpec& spec,
                                 const TrainConfig& config,
                                 const std::vector<double>& lambdaGrid, int folds = 5);

// Stratified fold ids (0..folds-1), one per dataset sample; per-class
// round-robin over a seeded shuffle so fold sizes differ by at most one and
// class ratios are preserved within a sample.
std::vector<int> stratifiedFolds(const Dataset& data, int folds, std::uint64_t seed);

}  // namespace naed
