#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sk/integrator.hpp"

namespace sk {

struct SamplerConfig {
    double burn_in_time = 10.0;
    double sample_gap_time = 1.0;
    int samples_per_chain = 250;
    int chains = 4;
    std::uint64_t seed = 1;

    // relaxation-time heuristic: burn 10 relaxation times, gap one
    static SamplerConfig from_relaxation_rate(double rate, int samples_per_chain, int chains,
                                              std::uint64_t seed);
    void validate() const;
};

enum class SystemKind { Wave, Heat };

// A finite set of stationary samples with enough provenance to reproduce it.
struct EmpiricalMeasure {
    SystemKind system = SystemKind::Heat;
    double mu = 0.0;  // meaningful for the wave system only
    DomainConfig dom;
    SamplerConfig sampler;
    std::string spec_hash;
    bool stationarity_warning = false;

    std::vector<PhaseState> wave_samples;
    std::vector<SpectralField> heat_samples;

    std::size_t size() const {
        return system == SystemKind::Wave ? wave_samples.size() : heat_samples.size();
    }
    const SpectralField& u_of(std::size_t i) const {
        return system == SystemKind::Wave ? wave_samples[i].u : heat_samples[i];
    }
};

std::string reaction_hash(const ReactionSpec& spec, const NoiseSpectrum& noise);

// Ergodic-average sampling from z = 0: burn-in, then one sample every
// sample_gap. Chains run on distinct streams. A first/second-half moment
// mismatch beyond 3 sigma sets the stationarity warning.
EmpiricalMeasure sample_wave_invariant(double mu, const ReactionSpec& reaction,
                                       const NoiseSpectrum& noise, const DomainConfig& dom,
                                       const SamplerConfig& sampler, double dt);

EmpiricalMeasure sample_heat_invariant(const ReactionSpec& reaction, const NoiseSpectrum& noise,
                                       const DomainConfig& dom, const SamplerConfig& sampler,
                                       double dt);

// Closed-form stationary mode variances for the linear drift b = -c u:
// Var(u_k) = lambda_k^2 / (2 (alpha_k + c)) for both systems (mass-independent),
// Var(v_k) = lambda_k^2 / (2 mu), zero cross-covariance.
struct GaussianOracle {
    std::vector<double> var_u;
    std::vector<double> var_v;  // empty for the parabolic system
};

GaussianOracle gaussian_invariant_oracle(std::optional<double> mu, const ReactionSpec& reaction,
                                         const NoiseSpectrum& noise, const DomainConfig& dom);

struct Statistic {
    double mean = 0.0;
    double se = 0.0;
};

struct MomentReport {
    Statistic u_h1_sq;        // E |u|_{H^1}^2
    Statistic v_h_sq_mu;      // E mu |v|_H^2 (zero for heat)
    Statistic u_lp;           // E |u|_{L^{lambda+1}}^{lambda+1}
    Statistic total;
};

MomentReport moment_report(const EmpiricalMeasure& m, double mu, const ReactionSpec& reaction);

struct ExpMomentEntry {
    double eta = 0.0;
    Statistic value;      // E exp(eta * [...])
    double ess = 0.0;     // effective sample size of the exponential weights
    bool stable = false;  // ess > 30
};

std::vector<ExpMomentEntry> exp_moment_report(const EmpiricalMeasure& m,
                                              std::span<const double> eta_grid, double mu,
                                              const ReactionSpec& reaction);

void save_measure(const EmpiricalMeasure& m, const std::string& path);
EmpiricalMeasure load_measure(const std::string& path);
void write_measure(std::ostream& os, const EmpiricalMeasure& m);
EmpiricalMeasure read_measure(std::istream& is);

// per-mode sample mean/variance of the u (and v) components
struct ModeStats {
    std::vector<double> mean_u, var_u, se_var_u;
    std::vector<double> mean_v, var_v, se_var_v;
};
ModeStats mode_statistics(const EmpiricalMeasure& m);

}  // namespace sk
