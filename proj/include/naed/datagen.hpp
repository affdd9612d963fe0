#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "naed/signal.hpp"

namespace naed {

enum class GeneratorSystem { Oscillator, VanDerPol, Lorenz, LotkaVolterra, GatedDiffusion };

enum class LvInputMode { X, XDot };

GeneratorSystem parseSystem(const std::string& name);
std::string systemName(GeneratorSystem s);

// Configuration for the synthetic dataset generators. `systemParams` lets
// callers override the per-system constants listed in the defaults below;
// unknown keys are rejected.
struct GeneratorConfig {
    GeneratorSystem system = GeneratorSystem::Oscillator;
    int totalSamples = 10000;
    double trainFraction = 0.8;
    std::uint64_t seed = 1;
    double finalTime = 10.0;       // ODE systems; gated diffusion runs on [0,1]
    double sampleRate = 10.0;      // recorded samples per unit time
    LvInputMode lvInputMode = LvInputMode::X;
    double noiseVariance = 0.0;    // iid Gaussian added to the recorded signal
    std::map<std::string, double> systemParams;

    void validate() const;
    // effective value of a per-system constant
    double param(const std::string& key, double fallback) const;
};

struct GeneratedData {
    Dataset train;
    Dataset test;
};

// Draw per-sample forcing, integrate the ground-truth system with the
// reference solver (RK4 at reference_refine times the recorded grid
// density; the diffusion generator runs its explicit scheme directly),
// label by the system's rule, and split train/test by a seeded shuffle.
GeneratedData generate(const GeneratorConfig& config);

// iid Gaussian noise on every sampled value; variance 0 returns the input
// unchanged bit for bit.
Dataset addNoise(const Dataset& data, double variance, std::uint64_t seed);

// Ground-truth helpers exposed for tests.
namespace detail {

// Closed-form solution of u'' + gamma u' + w2 u = sum_k A_k sin(a_k t),
// u(0) = u'(0) = 0, evaluated at t.
double oscillatorClosedForm(double gamma, double w2, const std::vector<double>& amp,
                            const std::vector<double>& freq, double t);

// The generator's reference path for the same problem: fixed-step RK4 with
// `steps` steps on [0, t].
double oscillatorReference(double gamma, double w2, const std::vector<double>& amp,
                           const std::vector<double>& freq, double t, int steps);

// One gated-diffusion solve; returns the survival probability S(1).
// switchTimes must be sorted; the switching function starts at 0.
// initialMass, when non-null, receives S(0) of the discrete scheme.
double gatedDiffusionSurvival(const std::vector<double>& switchTimes, double kappa,
                              double dz, double dt, double* initialMass = nullptr);

}  // namespace detail

}  // namespace naed
