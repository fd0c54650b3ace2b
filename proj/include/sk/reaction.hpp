#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sk/domain.hpp"
#include "sk/noise.hpp"

namespace sk {

enum class ReactionVariant { Linear, Lipschitz, Polynomial };

// Reaction term b(xi, sigma) with its sigma-derivative and the antiderivative
// normalized so that bint(xi, 0) = 0.
struct ReactionSpec {
    ReactionVariant variant = ReactionVariant::Linear;
    double lambda = 1.0;       // growth exponent, in [1,3]
    double declared_Lb = 0.0;  // declared sup of d_sigma b
    double linear_c = 0.0;     // Linear only: b = -c sigma
    double a0 = 0.0, a1 = 0.0; // Polynomial only: bounds of the coefficient a(xi)
    std::string description;

    std::function<double(double xi, double sigma)> b;
    std::function<double(double xi, double sigma)> db;
    std::function<double(double xi, double sigma)> bint;

    bool is_linear() const { return variant == ReactionVariant::Linear; }

    static ReactionSpec linear(double c);
    // b = -c sigma + A sigma / sqrt(1 + sigma^2); Lipschitz with sup slope A - c
    static ReactionSpec lipschitz_sigmoid(double A, double c = 0.0);
    // b = -a(xi) |sigma|^{lambda-1} sigma + f_amp tanh(sigma), a affine from a0 to a1
    static ReactionSpec klein_gordon(double lambda, double a0_, double a1_ = 0.0,
                                     double f_amp = 0.0, double domain_L = pi);
};

// Pseudo-spectral evaluation of the reaction on a fixed domain. Construction
// precomputes the grid transform; evaluation keeps all scratch local.
class ReactionTerm {
  public:
    ReactionTerm(ReactionSpec spec, const DomainConfig& dom);

    const ReactionSpec& spec() const { return spec_; }
    const DomainConfig& dom() const { return transform_.dom(); }

    // Galerkin projection of B(u); exact (no grid) for the Linear variant
    SpectralField eval(const SpectralField& u) const;

    // integral over the domain of bint(xi, u(xi))
    double antiderivative_integral(const SpectralField& u) const;

    // projection of d_sigma b(xi, u(xi)) * h(xi)
    SpectralField linearize_apply(const SpectralField& u, const SpectralField& h) const;

    // grid values of d_sigma b(xi, u(xi)); used to freeze the linearization
    std::vector<double> slope_on_grid(const SpectralField& u) const;

    // <B(u), u>_H via the grid (exact for Linear)
    double drift_inner(const SpectralField& u) const;

  private:
    ReactionSpec spec_;
    GridTransform transform_;
};

struct ValidationEntry {
    std::string inequality;
    double lhs = 0.0, rhs = 0.0;
    double witness_sigma = 0.0;
    bool ok = false;
};

struct ValidationReport {
    bool ok = false;
    double measured_Lb = 0.0;   // sup of d_sigma b on the probe grid (signed)
    double fitted_c1 = 0.0, fitted_c2 = 0.0;   // dissipativity constants
    double fitted_growth_c = 0.0;              // growth constant in |b| <= c(1+|sigma|^lambda)
    std::vector<ValidationEntry> entries;
};

// Checks the spectral-gap inequality (against alpha_1 or alpha_nbar) and, for
// the polynomial class, dissipativity and growth on a sigma-grid up to
// |sigma| = sigma_max.
ValidationReport validate_spec(const ReactionSpec& spec, const DomainConfig& dom,
                               const NoiseSpectrum& noise, double sigma_max = 1e3);

// sup slope measured on the probe grid; feeds relaxation-time heuristics
double measured_sup_slope(const ReactionSpec& spec, const DomainConfig& dom,
                          double sigma_max = 1e3);

}  // namespace sk
