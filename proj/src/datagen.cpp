#include "naed/datagen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "naed/parallel.hpp"
#include "naed/rng.hpp"

namespace naed {

GeneratorSystem parseSystem(const std::string& name) {
    if (name == "oscillator") return GeneratorSystem::Oscillator;
    if (name == "vanderpol" || name == "van_der_pol") return GeneratorSystem::VanDerPol;
    if (name == "lorenz") return GeneratorSystem::Lorenz;
    if (name == "lotka_volterra" || name == "lotkavolterra") return GeneratorSystem::LotkaVolterra;
    if (name == "gated_diffusion" || name == "diffusion") return GeneratorSystem::GatedDiffusion;
    throw ConfigError("unknown generator system '" + name + "'");
}

std::string systemName(GeneratorSystem s) {
    switch (s) {
        case GeneratorSystem::Oscillator: return "oscillator";
        case GeneratorSystem::VanDerPol: return "vanderpol";
        case GeneratorSystem::Lorenz: return "lorenz";
        case GeneratorSystem::LotkaVolterra: return "lotka_volterra";
        case GeneratorSystem::GatedDiffusion: return "gated_diffusion";
    }
    return "?";
}

namespace {

// keys accepted in GeneratorConfig::systemParams, per system
const std::map<std::string, std::set<std::string>> kKnownParams = {
    {"oscillator", {"gamma", "omega", "forcing_terms", "reference_refine"}},
    {"vanderpol", {"mu", "forcing_terms", "reference_refine"}},
    {"lorenz", {"sigma", "rho", "beta", "forcing_scale", "forcing_terms", "classic_drift",
                "reference_refine"}},
    {"lotka_volterra",
     {"alpha", "beta", "delta", "gamma", "forcing_terms", "forcing_sd", "reference_refine"}},
    {"gated_diffusion", {"kappa", "dz", "dt", "max_switches"}},
};

}  // namespace

void GeneratorConfig::validate() const {
    if (totalSamples < 1) throw ConfigError("generate: N must be positive");
    if (!(trainFraction > 0.0 && trainFraction < 1.0)) {
        throw ConfigError("generate: trainFraction must lie in (0, 1)");
    }
    if (!(finalTime > 0.0)) throw ConfigError("generate: finalTime must be positive");
    if (!(sampleRate > 0.0)) throw ConfigError("generate: sampleRate must be positive");
    if (noiseVariance < 0.0) throw ConfigError("generate: noiseVariance must be >= 0");
    const auto& known = kKnownParams.at(systemName(system));
    for (const auto& [key, value] : systemParams) {
        if (!known.count(key)) {
            throw ConfigError("generate: unknown system parameter '" + key + "' for " +
                              systemName(system));
        }
    }
}

double GeneratorConfig::param(const std::string& key, double fallback) const {
    const auto it = systemParams.find(key);
    return it == systemParams.end() ? fallback : it->second;
}

namespace {

// Random two-term sinusoid forcing shared by the ODE generators.
struct SinForcing {
    std::vector<double> amp;
    std::vector<double> freq;
    double scale = 1.0;
    bool squared = false;

    double operator()(double t) const {
        double v = 0.0;
        for (std::size_t k = 0; k < amp.size(); ++k) v += amp[k] * std::sin(freq[k] * t);
        v *= scale;
        return squared ? v * v : v;
    }

    // analytic time derivative (used for the Lotka-Volterra xdot input)
    double derivative(double t) const {
        double v = 0.0, dv = 0.0;
        for (std::size_t k = 0; k < amp.size(); ++k) {
            v += amp[k] * std::sin(freq[k] * t);
            dv += amp[k] * freq[k] * std::cos(freq[k] * t);
        }
        if (squared) return 2.0 * scale * scale * v * dv;
        return scale * dv;
    }
};

// Dense fixed-step RK4 for the small ground-truth systems.
template <int N, typename Rhs>
std::array<double, N> rk4Solve(std::array<double, N> u, double t0, double t1, int steps,
                               Rhs&& rhs) {
    const double h = (t1 - t0) / steps;
    std::array<double, N> k1, k2, k3, k4, tmp;
    for (int s = 0; s < steps; ++s) {
        const double t = t0 + s * h;
        rhs(t, u, k1);
        for (int i = 0; i < N; ++i) tmp[i] = u[i] + 0.5 * h * k1[i];
        rhs(t + 0.5 * h, tmp, k2);
        for (int i = 0; i < N; ++i) tmp[i] = u[i] + 0.5 * h * k2[i];
        rhs(t + 0.5 * h, tmp, k3);
        for (int i = 0; i < N; ++i) tmp[i] = u[i] + h * k3[i];
        rhs(t + h, tmp, k4);
        for (int i = 0; i < N; ++i) {
            u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (!std::isfinite(u[i])) {
                throw GenerationFailure("reference solve diverged at t=" + std::to_string(t + h));
            }
        }
    }
    return u;
}

struct SampleResult {
    std::vector<double> signal;  // recorded x(t) on the uniform grid
    int label = 0;
};

std::vector<double> uniformGrid(double finalTime, double sampleRate, int* countOut) {
    const int samples = static_cast<int>(std::llround(finalTime * sampleRate)) + 1;
    std::vector<double> t(samples);
    for (int j = 0; j < samples; ++j) t[j] = finalTime * j / (samples - 1);
    *countOut = samples;
    return t;
}

}  // namespace

namespace detail {

double oscillatorClosedForm(double gamma, double w2, const std::vector<double>& amp,
                            const std::vector<double>& freq, double t) {
    // superposition of particular solutions cs*sin(a t) + cc*cos(a t) plus
    // the homogeneous response cancelling each one's initial data
    const double om0 = std::sqrt(w2 - 0.25 * gamma * gamma);
    double u = 0.0;
    for (std::size_t k = 0; k < amp.size(); ++k) {
        const double a = freq[k];
        const double denom = (w2 - a * a) * (w2 - a * a) + gamma * gamma * a * a;
        if (denom == 0.0) throw GenerationFailure("oscillator closed form: resonant frequency");
        const double cs = amp[k] * (w2 - a * a) / denom;
        const double cc = -amp[k] * gamma * a / denom;
        const double c1 = -cc;
        const double c2 = (-cs * a + 0.5 * gamma * c1) / om0;
        u += cs * std::sin(a * t) + cc * std::cos(a * t) +
             std::exp(-0.5 * gamma * t) * (c1 * std::cos(om0 * t) + c2 * std::sin(om0 * t));
    }
    return u;
}

double oscillatorReference(double gamma, double w2, const std::vector<double>& amp,
                           const std::vector<double>& freq, double t, int steps) {
    SinForcing forcing;
    forcing.amp = amp;
    forcing.freq = freq;
    const auto end =
        rk4Solve<2>({0.0, 0.0}, 0.0, t, steps,
                    [&](double tt, const std::array<double, 2>& u, std::array<double, 2>& du) {
                        du[0] = u[1];
                        du[1] = forcing(tt) - gamma * u[1] - w2 * u[0];
                    });
    return end[0];
}

double gatedDiffusionSurvival(const std::vector<double>& switchTimes, double kappa,
                              double dz, double dt) {
    const int J = static_cast<int>(std::llround(1.0 / dz));
    const int steps = static_cast<int>(std::llround(1.0 / dt));
    const double c = kappa * dt / (dz * dz);
    if (!(c < 1.0)) {
        throw GenerationFailure("gated diffusion: CFL number " + std::to_string(c) +
                                " violates kappa*dt/dz^2 < 1");
    }
    const double sigma = 0.1;
    std::vector<double> u(J + 1), next(J + 1);
    for (int i = 0; i <= J; ++i) {
        const double z = i * dz;
        u[i] = std::exp(-(z - 0.5) * (z - 0.5) / (2.0 * sigma * sigma)) /
               std::sqrt(2.0 * std::numbers::pi * sigma * sigma);
    }
    auto switchValue = [&](double t) {
        // x starts at 0 and flips at each time in switchTimes
        const auto crossed =
            std::upper_bound(switchTimes.begin(), switchTimes.end(), t) - switchTimes.begin();
        return static_cast<int>(crossed % 2);
    };
    for (int n = 0; n < steps; ++n) {
        const double t = n * dt;
        const int x = switchValue(t);
        if (x == 1) u[J] = 0.0;  // absorbing end
        for (int i = 1; i < J; ++i) next[i] = u[i] + c * (u[i + 1] - 2.0 * u[i] + u[i - 1]);
        next[0] = u[0] + c * (2.0 * u[1] - 2.0 * u[0]);  // reflecting ghost
        next[J] = x == 1 ? 0.0 : u[J] + c * (2.0 * u[J - 1] - 2.0 * u[J]);
        u.swap(next);
    }
    double mass = 0.5 * (u[0] + u[J]);
    for (int i = 1; i < J; ++i) mass += u[i];
    return mass * dz;
}

}  // namespace detail

namespace {

SampleResult generateOne(const GeneratorConfig& config, Rng rng,
                         const std::vector<double>& grid) {
    SampleResult out;
    const int terms = static_cast<int>(config.param("forcing_terms", 2));
    const int refine = static_cast<int>(config.param("reference_refine", 10));
    const int refSteps = static_cast<int>(grid.size() - 1) * refine;
    const double T = config.finalTime;

    SinForcing forcing;
    forcing.amp.resize(terms);
    forcing.freq.resize(terms);

    switch (config.system) {
        case GeneratorSystem::Oscillator:
        case GeneratorSystem::VanDerPol: {
            for (int k = 0; k < terms; ++k) forcing.amp[k] = rng.gaussian();
            for (int k = 0; k < terms; ++k) forcing.freq[k] = rng.gaussian();
            double uT;
            if (config.system == GeneratorSystem::Oscillator) {
                const double gamma = config.param("gamma", 0.2);
                const double omega = config.param("omega", 1.0);
                uT = detail::oscillatorReference(gamma, omega * omega, forcing.amp,
                                                 forcing.freq, T, refSteps);
            } else {
                const double mu = config.param("mu", 0.3);
                const auto end = rk4Solve<2>(
                    {0.0, 0.0}, 0.0, T, refSteps,
                    [&](double t, const std::array<double, 2>& u, std::array<double, 2>& du) {
                        du[0] = u[1];
                        du[1] = forcing(t) + mu * (1.0 - u[0] * u[0]) * u[1] - u[0];
                    });
                uT = end[0];
            }
            out.label = uT > 0.0 ? 0 : 1;  // exact zero falls to class 1
            out.signal.resize(grid.size());
            for (std::size_t j = 0; j < grid.size(); ++j) out.signal[j] = forcing(grid[j]);
            break;
        }
        case GeneratorSystem::Lorenz: {
            for (int k = 0; k < terms; ++k) forcing.amp[k] = rng.gaussian();
            for (int k = 0; k < terms; ++k) forcing.freq[k] = rng.gaussian();
            forcing.scale = config.param("forcing_scale", 4.0);
            const double sig = config.param("sigma", 5.0);
            const double rho = config.param("rho", 10.0);
            const double bet = config.param("beta", 1.3);
            const bool classic = config.param("classic_drift", 0.0) != 0.0;
            const auto end = rk4Solve<3>(
                {1.0, 1.0, 1.0}, 0.0, T, refSteps,
                [&](double t, const std::array<double, 3>& u, std::array<double, 3>& du) {
                    du[0] = sig * (u[1] - (classic ? u[0] : u[2])) + forcing(t);
                    du[1] = u[0] * (rho - u[2]) - u[1];
                    du[2] = u[0] * u[1] - bet * u[2];
                });
            out.label = end[0] > 0.0 ? 0 : 1;
            out.signal.resize(grid.size());
            for (std::size_t j = 0; j < grid.size(); ++j) out.signal[j] = forcing(grid[j]);
            break;
        }
        case GeneratorSystem::LotkaVolterra: {
            const double sd = config.param("forcing_sd", std::sqrt(0.5));
            for (int k = 0; k < terms; ++k) forcing.amp[k] = rng.gaussian(0.0, sd);
            for (int k = 0; k < terms; ++k) forcing.freq[k] = rng.gaussian(0.0, sd);
            forcing.squared = true;
            const double alpha = config.param("alpha", 0.8);
            const double beta = config.param("beta", 0.1);
            const double delta = config.param("delta", 0.01);
            const double gamma = config.param("gamma", 1.1);
            const auto end = rk4Solve<2>(
                {5.0, 4.0}, 0.0, T, refSteps,
                [&](double t, const std::array<double, 2>& u, std::array<double, 2>& du) {
                    const double x = forcing(t);
                    du[0] = alpha * u[0] - beta * x * u[0] * u[1];
                    du[1] = delta * x * u[0] * u[1] - gamma * u[1];
                });
            out.label = end[0] >= end[1] ? 0 : 1;
            out.signal.resize(grid.size());
            for (std::size_t j = 0; j < grid.size(); ++j) {
                out.signal[j] = config.lvInputMode == LvInputMode::X ? forcing(grid[j])
                                                                    : forcing.derivative(grid[j]);
            }
            break;
        }
        case GeneratorSystem::GatedDiffusion: {
            const int maxSwitches = static_cast<int>(config.param("max_switches", 10));
            const int q = static_cast<int>(rng.integer(0, maxSwitches));
            std::vector<double> switches(q);
            for (int i = 0; i < q; ++i) switches[i] = rng.uniform01();
            std::sort(switches.begin(), switches.end());
            const double kappa = config.param("kappa", 0.165);
            const double dz = config.param("dz", 0.05);
            const double dt = config.param("dt", 0.005);
            const double survival = detail::gatedDiffusionSurvival(switches, kappa, dz, dt);
            out.label = survival < 0.5 ? 0 : 1;
            out.signal.resize(grid.size());
            for (std::size_t j = 0; j < grid.size(); ++j) {
                const auto crossed = std::upper_bound(switches.begin(), switches.end(), grid[j]) -
                                     switches.begin();
                out.signal[j] = static_cast<double>(crossed % 2);
            }
            break;
        }
    }
    return out;
}

}  // namespace

GeneratedData generate(const GeneratorConfig& config) {
    config.validate();
    const double T =
        config.system == GeneratorSystem::GatedDiffusion ? 1.0 : config.finalTime;
    const double rate = config.system == GeneratorSystem::GatedDiffusion
                            ? std::max(config.sampleRate, 100.0)
                            : config.sampleRate;
    int samples = 0;
    const std::vector<double> grid = uniformGrid(T, rate, &samples);

    const Rng root(config.seed);
    const int N = config.totalSamples;
    std::vector<SampleResult> results(N);
    parallelFor(N, [&](int i) {
        GeneratorConfig local = config;
        local.finalTime = T;
        results[i] = generateOne(local, root.derive(static_cast<std::uint64_t>(i)), grid);
    });

    // seeded shuffle decides the split; sample ids keep their draw index
    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle = root.derive(0x5B1F7ULL);
    for (int i = N - 1; i > 0; --i) {
        const auto j = static_cast<int>(shuffle.integer(0, i));
        std::swap(order[i], order[j]);
    }
    const int trainCount = static_cast<int>(std::llround(config.trainFraction * N));

    GeneratedData out;
    for (Dataset* ds : {&out.train, &out.test}) {
        ds->inputDim = 1;
        ds->numClasses = 2;
        ds->metadata["system"] = systemName(config.system);
        ds->metadata["seed"] = std::to_string(config.seed);
        ds->metadata["final_time"] = std::to_string(T);
        if (config.noiseVariance > 0.0) {
            ds->metadata["noise_variance"] = std::to_string(config.noiseVariance);
        }
    }
    out.train.metadata["split"] = "train";
    out.test.metadata["split"] = "test";

    for (int pos = 0; pos < N; ++pos) {
        const int idx = order[pos];
        TimeSeries ts;
        ts.id = systemName(config.system) + "-" + std::to_string(idx);
        ts.times = grid;
        ts.values.resize(1, samples);
        for (int j = 0; j < samples; ++j) ts.values(0, j) = results[idx].signal[j];
        ts.label = oneHot(results[idx].label, 2);
        (pos < trainCount ? out.train : out.test).series.push_back(std::move(ts));
    }

    if (config.noiseVariance > 0.0) {
        out.train = addNoise(out.train, config.noiseVariance, config.seed ^ 0x4015EULL);
        out.test = addNoise(out.test, config.noiseVariance, config.seed ^ 0x4015FULL);
    }
    return out;
}

Dataset addNoise(const Dataset& data, double variance, std::uint64_t seed) {
    if (variance < 0.0) throw ConfigError("addNoise: variance must be >= 0");
    if (variance == 0.0) return data;
    Dataset out = data;
    const double sd = std::sqrt(variance);
    const Rng root(seed);
    for (std::size_t i = 0; i < out.series.size(); ++i) {
        Rng rng = root.derive(i);
        auto& values = out.series[i].values;
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            for (Eigen::Index r = 0; r < values.rows(); ++r) {
                values(r, c) += rng.gaussian(0.0, sd);
            }
        }
    }
    return out;
}

}  // namespace naed
