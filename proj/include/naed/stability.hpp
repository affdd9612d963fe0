#pragma once

#include <cstdint>
#include <string>

#include "naed/dictionary.hpp"
#include "naed/model.hpp"
#include "naed/signal.hpp"

namespace naed {

// Empirical verification of the classifier's perturbation bounds:
//   deterministic: |C(x+eta) - C(x)| <= L * ||eta||_L1
//   stochastic:    P(|C(x+eta) - C(x)| >= r) <= 2 d exp(-r^2 / (2 d T L^2))
//                  for white noise eta dt = dW
// with L = L_sigma * ||B|| * exp(Lip * T * ||beta||), L_sigma = 1, matrix
// norms spectral, and Lip the dictionary's Lipschitz bound.
struct StabilityConfig {
    int deterministicTrials = 10000;
    int wienerTrials = 10000;
    double perturbationL1 = 0.1;  // L1 budget for deterministic draws
    // tail threshold r = tailRFactor * sqrt(d T) * L
    double tailRFactor = 3.0;
    // ball radius for the polynomial (local) Lipschitz bound; <= 0 derives
    // it from the clean trajectory's range with a 2x margin
    double polyDomainRadius = -1.0;
    int substeps = 1;
    std::uint64_t seed = 1;
    int threads = 0;
};

struct StabilityReport {
    double lipschitzDict = 0.0;   // dictionary bound used
    double normB = 0.0;           // spectral norms
    double normBeta = 0.0;
    double classifierL = 0.0;     // L = ||B|| exp(Lip T ||beta||)

    int deterministicTrials = 0;
    int deterministicViolations = 0;
    double maxDeterministicRatio = 0.0;  // max |dC| / (L ||eta||_1)

    int wienerTrials = 0;
    double tailR = 0.0;
    double tailBound = 0.0;       // 2 d exp(-r^2 / (2 d T L^2))
    double empiricalTail = 0.0;   // fraction of |dC| >= r
    double maxWienerDeviation = 0.0;

    bool deterministicPassed() const { return deterministicViolations == 0; }
    bool wienerPassed() const { return empiricalTail <= tailBound; }

    std::string summary() const;
};

// Runs both checks against the given clean signal.
StabilityReport stabilityCheck(const Parameters& params, const DictionarySpec& spec,
                               const TimeSeries& cleanSignal, const StabilityConfig& config);

}  // namespace naed
