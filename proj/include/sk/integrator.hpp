#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sk/domain.hpp"
#include "sk/noise.hpp"
#include "sk/propagator.hpp"
#include "sk/reaction.hpp"

namespace sk {

enum class NoiseMode { ExactCovariance, CoupledIncrement };

struct SchemeConfig {
    double dt = 1e-3;
    double T = 1.0;
    int record_stride = 1;
    NoiseMode noise_mode = NoiseMode::ExactCovariance;

    void validate() const;
};

// Per-mode law of the stochastic convolution increment over one step:
// Sigma(dt) = integral_0^dt e^{sM} b b^T e^{sM^T} ds with b = (0, lambda/mu).
struct StepNoiseCov {
    double s11 = 0, s12 = 0, s22 = 0;  // covariance
    double l11 = 0, l21 = 0, l22 = 0;  // lower Cholesky factor
};

StepNoiseCov step_cov(double mu, double dt, double alpha, double lambda);
StepNoiseCov step_cov(double mu, double dt, int k, const NoiseSpectrum& noise,
                      const DomainConfig& dom);

// One exponential-Euler step of the damped wave system. The linear flow is
// exact per mode, so dt is set by the nonlinearity scale, not by mu.
class WaveStepper {
  public:
    WaveStepper(const DomainConfig& dom, double mu, const NoiseSpectrum& noise,
                const ReactionSpec& reaction, const SchemeConfig& cfg);

    double mu() const { return mu_; }
    const SchemeConfig& config() const { return cfg_; }
    const DomainConfig& dom() const { return reaction_.dom(); }

    // exact-covariance noise; consumes 2N normals from the driver
    void step(PhaseState& z, SeededDriver& drv) const;
    // coupled mode: caller supplies the N Brownian increments for this step
    void step(PhaseState& z, std::span<const double> dbeta) const;

  private:
    void drift_step(PhaseState& z) const;
    void check_state(const PhaseState& z) const;

    double mu_;
    SchemeConfig cfg_;
    ReactionTerm reaction_;
    std::vector<double> alphas_;
    std::vector<Mode2x2> exp_dt_;      // exp(dt M_k)
    std::vector<double> drift_u_, drift_v_;   // phi1 column applied to (0, 1/mu)
    std::vector<StepNoiseCov> cov_;           // exact-covariance mode
    std::vector<double> coup_u_, coup_v_;     // coupled mode: E (0, lambda/mu)
};

class HeatStepper {
  public:
    HeatStepper(const DomainConfig& dom, const NoiseSpectrum& noise, const ReactionSpec& reaction,
                const SchemeConfig& cfg);

    const SchemeConfig& config() const { return cfg_; }
    const DomainConfig& dom() const { return reaction_.dom(); }

    void step(SpectralField& u, SeededDriver& drv) const;  // N normals
    void step(SpectralField& u, std::span<const double> dbeta) const;

  private:
    void drift_step(SpectralField& u) const;
    void check_state(const SpectralField& u) const;

    SchemeConfig cfg_;
    ReactionTerm reaction_;
    std::vector<double> decay_;        // e^{-alpha dt}
    std::vector<double> drift_;        // (1 - e^{-alpha dt}) / alpha
    std::vector<double> noise_sd_;     // exact: lambda sqrt((1-e^{-2 alpha dt})/(2 alpha))
    std::vector<double> coup_;         // coupled: e^{-alpha dt} lambda
};

struct CoupledErrorStats {
    double mu = 0;
    double mean_sup = 0;   // ensemble mean of sup_t |u_mu(t) - u(t)|_H
    double se_sup = 0;     // standard error of the mean
    std::vector<double> per_trajectory;
};

// Pathwise small-mass comparison: for each mu, wave and parabolic systems are
// driven by the same increment stream per trajectory (streams differ across
// trajectories). Requires coupled_increment mode.
std::vector<CoupledErrorStats> simulate_coupled(std::span<const double> mu_list,
                                                const NoiseSpectrum& noise,
                                                const ReactionSpec& reaction,
                                                const PhaseState& init_wave,
                                                const SpectralField& init_heat,
                                                const SchemeConfig& cfg, std::uint64_t seed,
                                                int n_trajectories);

}  // namespace sk
