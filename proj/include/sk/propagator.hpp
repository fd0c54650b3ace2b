#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sk/domain.hpp"

namespace sk {

enum class DampingRegime { Underdamped, Overdamped, Critical };

struct Mode2x2 {
    double a11 = 1, a12 = 0, a21 = 0, a22 = 1;
};

// Exact flow of one damped-wave mode: d/dt (u,v) = M (u,v) with
// M = [[0,1],[-alpha/mu, -1/mu]].  E = exp(tM), phi1 = M^{-1} (exp(tM) - I).
// Branch-stable: the two-eigenvalue form is replaced by a series expansion
// near the double root, and the overdamped exponentials are combined without
// forming cosh/sinh of large arguments.
struct ModePropagator {
    Mode2x2 E;
    Mode2x2 phi1;
    DampingRegime regime = DampingRegime::Overdamped;
    double mu = 0, t = 0, alpha = 0;
};

ModePropagator wave_propagator(double mu, double t, double alpha);
ModePropagator wave_propagator(double mu, double t, int k, const DomainConfig& dom);

PhaseState apply_s_mu(double mu, double t, const PhaseState& z);
SpectralField apply_heat(double t, const SpectralField& x);

// comparison operator: (1/mu) Pi_1 S_mu(t)(0,y) - S(t) y, mode-wise
SpectralField phi_mu(double mu, double t, const SpectralField& y);

// Relative defect of the two exact energy balances of the linear group,
// maximized over an 8-point t-grid in (0,T]. Time integrals use composite
// Gauss-Legendre with n_quad nodes per panel, panels sized to the fastest
// mode rate.
double energy_residual_1(double mu, double beta, const PhaseState& z, double T, int n_quad);
double energy_residual_2(double mu, double beta, const PhaseState& z, double T, int n_quad);

// integral_0^inf s^{-rho} |Pi_1 S_mu(s) Q_mu e_k|_{H^beta}^2 ds divided by
// lambda_k^2 / alpha_k^{1-(rho+beta)}; the lambda_k^2 factor cancels.
double lemma3_ratio(double mu, double rho, double beta, int k, const DomainConfig& dom);

struct LimitProbeRow {
    double mu = 0;
    double sup_point = 0;   // sup over extremal family and t of |Pi_1 S_mu(t)(x,y) - S(t)x|_H
    double sup_conv = 0;    // same for the convolution comparison
    double y_bound = 0;     // 2 sqrt(mu) R, the velocity-data contribution bound
};

// Sup-error tables over the extremal family on {|x|_{H^beta} + sqrt(mu)|y|_H <= R}:
// single modes at the sphere radius, velocity-only data, and seeded random
// points on the constraint set.
std::vector<LimitProbeRow> semigroup_limit_probe(std::span<const double> mu_list, double R,
                                                 double beta, double T, const DomainConfig& dom,
                                                 std::uint64_t seed = 7);

}  // namespace sk
