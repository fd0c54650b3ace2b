#include "sk/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sk/noise.hpp"

namespace sk {

namespace {

// e^{sigma t} cosh(theta t) and e^{sigma t} sinh(theta t)/theta with
// sigma = -1/(2 mu), theta^2 = (1 - 4 mu alpha)/(4 mu^2).  These two numbers
// determine every entry of exp(tM).
struct Core {
    double eC;
    double eS;
};

Core prop_core(double mu, double t, double alpha) {
    if (t == 0.0) return {1.0, 0.0};
    const double w = 0.5 * t / mu;            // -sigma t
    const double disc = 1.0 - 4.0 * mu * alpha;
    const double x = disc * w * w;            // (theta t)^2, sign of disc

    if (std::abs(x) <= 1e-3) {
        // double-root neighbourhood: series in (theta t)^2
        const double c = 1.0 + x * (1.0 / 2 + x * (1.0 / 24 + x * (1.0 / 720 + x / 40320)));
        const double s = 1.0 + x * (1.0 / 6 + x * (1.0 / 120 + x * (1.0 / 5040 + x / 362880)));
        const double decay = std::exp(-w);
        return {decay * c, decay * t * s};
    }
    if (disc > 0.0) {
        // overdamped: combine e^{omega_pm t} directly, no large cosh argument;
        // omega_plus in the cancellation-free rationalized form
        const double sq = std::sqrt(disc);
        const double om_p = -2.0 * alpha / (1.0 + sq);
        const double om_m = -(1.0 + sq) / (2.0 * mu);
        const double ep = std::exp(om_p * t), em = std::exp(om_m * t);
        const double theta = sq / (2.0 * mu);
        return {0.5 * (ep + em), (ep - em) / (2.0 * theta)};
    }
    // underdamped
    const double om_d = std::sqrt(-disc) / (2.0 * mu);
    const double decay = std::exp(-w);
    return {decay * std::cos(om_d * t), decay * std::sin(om_d * t) / om_d};
}

Mode2x2 assemble(const Core& c, double mu, double alpha) {
    Mode2x2 E;
    const double half = c.eS / (2.0 * mu);
    E.a11 = c.eC + half;
    E.a12 = c.eS;
    E.a21 = -(alpha / mu) * c.eS;
    E.a22 = c.eC - half;
    return E;
}

// local rate scale of the mode flow; used to size quadrature panels
double mode_rate(double mu, double alpha) {
    const double disc = 1.0 - 4.0 * mu * alpha;
    double r = 1.0 / mu;
    if (disc < 0.0) r += std::sqrt(-disc) / (2.0 * mu);
    return r;
}

}  // namespace

ModePropagator wave_propagator(double mu, double t, double alpha) {
    if (!(mu > 0.0)) throw std::invalid_argument("wave_propagator: mu must be positive");
    if (!(t >= 0.0)) throw std::invalid_argument("wave_propagator: t must be nonnegative");
    ModePropagator p;
    p.mu = mu;
    p.t = t;
    p.alpha = alpha;
    const double disc = 1.0 - 4.0 * mu * alpha;
    p.regime = std::abs(disc) < 1e-8 ? DampingRegime::Critical
               : disc > 0.0          ? DampingRegime::Overdamped
                                     : DampingRegime::Underdamped;
    const Core c = prop_core(mu, t, alpha);
    p.E = assemble(c, mu, alpha);
    // M^{-1} = [[-1/alpha, -mu/alpha], [1, 0]]
    p.phi1.a11 = -((p.E.a11 - 1.0) + mu * p.E.a21) / alpha;
    p.phi1.a12 = -(p.E.a12 + mu * (p.E.a22 - 1.0)) / alpha;
    p.phi1.a21 = p.E.a11 - 1.0;
    p.phi1.a22 = p.E.a12;
    return p;
}

ModePropagator wave_propagator(double mu, double t, int k, const DomainConfig& dom) {
    return wave_propagator(mu, t, eigenvalue(k, dom));
}

PhaseState apply_s_mu(double mu, double t, const PhaseState& z) {
    PhaseState out = z;
    for (int k = 1; k <= z.u.dom.N; ++k) {
        const Core c = prop_core(mu, t, eigenvalue(k, z.u.dom));
        const Mode2x2 E = assemble(c, mu, eigenvalue(k, z.u.dom));
        const double uk = z.u[k - 1], vk = z.v[k - 1];
        out.u[k - 1] = E.a11 * uk + E.a12 * vk;
        out.v[k - 1] = E.a21 * uk + E.a22 * vk;
    }
    return out;
}

SpectralField apply_heat(double t, const SpectralField& x) {
    if (!(t >= 0.0)) throw std::invalid_argument("apply_heat: t must be nonnegative");
    SpectralField out = x;
    for (int k = 1; k <= x.dom.N; ++k)
        out[k - 1] *= std::exp(-eigenvalue(k, x.dom) * t);
    return out;
}

SpectralField phi_mu(double mu, double t, const SpectralField& y) {
    if (!(mu > 0.0)) throw std::invalid_argument("phi_mu: mu must be positive");
    SpectralField out = y;
    for (int k = 1; k <= y.dom.N; ++k) {
        const double alpha = eigenvalue(k, y.dom);
        const Core c = prop_core(mu, t, alpha);
        out[k - 1] = (c.eS / mu - std::exp(-alpha * t)) * y[k - 1];
    }
    return out;
}

namespace {

// cumulative integral of f over [0, t_j] for the 8-point grid t_j = j T/8,
// composite Gauss-Legendre with n_quad nodes per panel
template <class F>
std::array<double, 8> cumulative_integral(F&& f, double T, int n_quad, double rate) {
    const GaussLegendre& rule = gl_rule(n_quad);
    std::array<double, 8> out{};
    double acc = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double a = T * j / 8.0, b = T * (j + 1) / 8.0;
        const int panels = std::max(1, static_cast<int>(std::ceil((b - a) * rate * 3.0 / n_quad)));
        for (int p = 0; p < panels; ++p)
            acc += rule.integrate(f, a + (b - a) * p / panels, a + (b - a) * (p + 1) / panels);
        out[j] = acc;
    }
    return out;
}

double energy_residual(double mu, double beta, const PhaseState& z, double T, int n_quad,
                       bool second_form) {
    if (!(mu > 0.0) || !(T > 0.0)) throw std::invalid_argument("energy_residual: mu, T > 0");
    const DomainConfig& dom = z.u.dom;

    std::array<double, 8> lhs_state{};   // norm terms at t_j
    std::array<double, 8> lhs_int{};     // 2 * time integrals up to t_j
    double rhs = 0.0;

    for (int k = 1; k <= dom.N; ++k) {
        const double alpha = eigenvalue(k, dom);
        const double xk = z.u[k - 1], yk = z.v[k - 1];
        const double wb = std::pow(alpha, beta);        // alpha^beta
        const double wbm = std::pow(alpha, beta - 1.0); // alpha^{beta-1}
        const double rate = mode_rate(mu, alpha);

        if (!second_form) {
            rhs += mu * wbm * yk * yk + wb * xk * xk;
            auto integrand = [&](double s) {
                const Core c = prop_core(mu, s, alpha);
                const Mode2x2 E = assemble(c, mu, alpha);
                const double vk = E.a21 * xk + E.a22 * yk;
                return wbm * vk * vk;
            };
            auto cum = cumulative_integral(integrand, T, n_quad, rate);
            for (int j = 0; j < 8; ++j) {
                const Core c = prop_core(mu, T * (j + 1) / 8.0, alpha);
                const Mode2x2 E = assemble(c, mu, alpha);
                const double uk = E.a11 * xk + E.a12 * yk;
                const double vk = E.a21 * xk + E.a22 * yk;
                lhs_state[j] += mu * wbm * vk * vk + wb * uk * uk;
                lhs_int[j] += 2.0 * cum[j];
            }
        } else {
            const double mix0 = mu * yk + xk;
            rhs += mu * wb * xk * xk + wbm * mix0 * mix0;
            auto integrand = [&](double s) {
                const Core c = prop_core(mu, s, alpha);
                const Mode2x2 E = assemble(c, mu, alpha);
                const double uk = E.a11 * xk + E.a12 * yk;
                return wb * uk * uk;
            };
            auto cum = cumulative_integral(integrand, T, n_quad, rate);
            for (int j = 0; j < 8; ++j) {
                const Core c = prop_core(mu, T * (j + 1) / 8.0, alpha);
                const Mode2x2 E = assemble(c, mu, alpha);
                const double uk = E.a11 * xk + E.a12 * yk;
                const double vk = E.a21 * xk + E.a22 * yk;
                const double mix = mu * vk + uk;
                lhs_state[j] += mu * wb * uk * uk + wbm * mix * mix;
                lhs_int[j] += 2.0 * cum[j];
            }
        }
    }

    double worst = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double defect = std::abs(lhs_state[j] + lhs_int[j] - rhs);
        worst = std::max(worst, rhs > 0.0 ? defect / rhs : defect);
    }
    return worst;
}

}  // namespace

double energy_residual_1(double mu, double beta, const PhaseState& z, double T, int n_quad) {
    return energy_residual(mu, beta, z, T, n_quad, false);
}

double energy_residual_2(double mu, double beta, const PhaseState& z, double T, int n_quad) {
    return energy_residual(mu, beta, z, T, n_quad, true);
}

namespace {

// |Pi_1 S_mu(s)(0, e_k)|^2 = E12(s)^2 for one mode
double e12_squared(double mu, double s, double alpha) {
    const Core c = prop_core(mu, s, alpha);
    return c.eS * c.eS;
}

// panel-level upper bound for E12(s)^2 on [lo, hi]
double e12sq_envelope(double mu, double alpha, double lo, double hi) {
    const double disc = 1.0 - 4.0 * mu * alpha;
    if (disc < -1e-8) {
        const double om_d = std::sqrt(-disc) / (2.0 * mu);
        return std::exp(-lo / mu) / (om_d * om_d);
    }
    const double rate = 2.0 * alpha / (1.0 + std::sqrt(std::max(disc, 0.0)));  // |omega_plus|
    return hi * hi * std::exp(-2.0 * rate * lo);
}

}  // namespace

double lemma3_ratio(double mu, double rho, double beta, int k, const DomainConfig& dom) {
    if (!(mu > 0.0)) throw std::invalid_argument("lemma3_ratio: mu must be positive");
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("lemma3_ratio: rho must be in (0,1)");
    if (!(beta >= 0.0) || rho + beta >= 1.0)
        throw std::invalid_argument("lemma3_ratio: need beta >= 0 and rho + beta < 1");
    const double alpha = eigenvalue(k, dom);

    const double disc = 1.0 - 4.0 * mu * alpha;
    const double om_d = disc < 0.0 ? std::sqrt(-disc) / (2.0 * mu) : 0.0;
    const double rate = disc < 0.0 ? 0.5 / mu : 2.0 * alpha / (1.0 + std::sqrt(disc));
    const GaussLegendre& rule = gl16();

    double total = 0.0;

    // [0,1]: dyadic panels toward the s^{-rho} endpoint singularity,
    // subdivided to resolve oscillation
    for (int j = 0; j < 120; ++j) {
        const double hi = std::pow(0.5, j), lo = 0.5 * hi;
        const double bound = e12sq_envelope(mu, alpha, lo, hi) * std::pow(lo, -rho) * (hi - lo);
        if (bound < 1e-20 * total + 1e-300) continue;
        const int m = std::clamp(static_cast<int>(std::ceil((hi - lo) * (om_d + 2.0 * rate) / 4.0)),
                                 1, 20000);
        double c = 0.0;
        for (int i = 0; i < m; ++i)
            c += rule.integrate(
                [&](double s) { return std::pow(s, -rho) * e12_squared(mu, s, alpha); },
                lo + (hi - lo) * i / m, lo + (hi - lo) * (i + 1) / m);
        total += c;
    }

    // [1, infinity): substitute s = 1/r, integrand r^{rho-2} E12(1/r)^2;
    // panels dropped once the envelope falls below 1e-14 of the peak.  The
    // envelope decays exponentially in s, so three consecutive drops end the
    // tail; running out of panels first means the tail never resolved.
    const double peak = std::max(total, e12sq_envelope(mu, alpha, 0.0, 1.0));
    int skipped = 0;
    bool tail_resolved = false;
    for (int j = 0; j < 80; ++j) {
        const double r_hi = std::pow(0.5, j), r_lo = 0.5 * r_hi;
        const double s_lo = 1.0 / r_hi;
        const double bound =
            e12sq_envelope(mu, alpha, s_lo, s_lo) * std::pow(r_lo, rho - 2.0) * (r_hi - r_lo);
        if (bound < 1e-14 * peak) {
            if (++skipped >= 3) {
                tail_resolved = true;
                break;
            }
            continue;
        }
        skipped = 0;
        const double dphase = (om_d + 2.0 * rate) * (1.0 / r_lo - 1.0 / r_hi);
        const int m = std::clamp(static_cast<int>(std::ceil(dphase / 4.0)), 1, 200000);
        double c = 0.0;
        for (int i = 0; i < m; ++i)
            c += rule.integrate(
                [&](double r) { return std::pow(r, rho - 2.0) * e12_squared(mu, 1.0 / r, alpha); },
                r_lo + (r_hi - r_lo) * i / m, r_lo + (r_hi - r_lo) * (i + 1) / m);
        total += c;
    }
    if (!tail_resolved)
        throw std::runtime_error("lemma3_ratio: tail quadrature did not converge");

    // ratio: (alpha^beta / mu^2) * total against lambda^2 alpha^{rho+beta-1};
    // the lambda^2 cancels
    return std::pow(alpha, 1.0 - rho) * total / (mu * mu);
}

namespace {

std::vector<double> probe_time_grid(double mu, double T) {
    std::vector<double> ts;
    for (int i = 1; i <= 64; ++i) ts.push_back(T * i / 64.0);
    // mu-scaled points resolving the initial layer
    for (int i = 0; i < 32; ++i) {
        double t = mu * std::pow(10.0, -1.0 + 3.0 * i / 31.0);
        if (t < T) ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    return ts;
}

}  // namespace

std::vector<LimitProbeRow> semigroup_limit_probe(std::span<const double> mu_list, double R,
                                                 double beta, double T, const DomainConfig& dom,
                                                 std::uint64_t seed) {
    if (!(R > 0.0) || !(T > 0.0)) throw std::invalid_argument("semigroup_limit_probe: R, T > 0");
    std::vector<LimitProbeRow> rows;

    // seeded random members of the constraint set, shared across mu
    const int n_rand = 16;
    std::vector<std::vector<double>> xdir(n_rand), ydir(n_rand);
    {
        SeededDriver drv(seed, 0);
        for (int r = 0; r < n_rand; ++r) {
            xdir[r] = drv.sample_normals(dom.N);
            ydir[r] = drv.sample_normals(dom.N);
        }
    }

    for (double mu : mu_list) {
        LimitProbeRow row;
        row.mu = mu;
        row.y_bound = 2.0 * std::sqrt(mu) * R;
        const auto ts = probe_time_grid(mu, T);

        double sup_point = 0.0;
        for (int k = 1; k <= dom.N; ++k) {
            const double alpha = eigenvalue(k, dom);
            const double xk = R * std::pow(alpha, -beta / 2.0);
            const double yk = R / std::sqrt(mu);
            for (double t : ts) {
                const Core c = prop_core(mu, t, alpha);
                const double e11 = c.eC + c.eS / (2.0 * mu);
                sup_point = std::max(sup_point, std::abs((e11 - std::exp(-alpha * t)) * xk));
                sup_point = std::max(sup_point, std::abs(c.eS * yk));
            }
        }
        for (int r = 0; r < n_rand; ++r) {
            // split the budget between displacement and velocity data
            const double frac = (r + 0.5) / n_rand;
            double nx = 0.0, ny = 0.0;
            for (int k = 1; k <= dom.N; ++k) {
                nx += std::pow(eigenvalue(k, dom), beta) * xdir[r][k - 1] * xdir[r][k - 1];
                ny += ydir[r][k - 1] * ydir[r][k - 1];
            }
            const double cx = frac * R / std::sqrt(nx);
            const double cy = (1.0 - frac) * R / (std::sqrt(mu) * std::sqrt(ny));
            for (double t : ts) {
                double err2 = 0.0;
                for (int k = 1; k <= dom.N; ++k) {
                    const double alpha = eigenvalue(k, dom);
                    const Core c = prop_core(mu, t, alpha);
                    const double e11 = c.eC + c.eS / (2.0 * mu);
                    const double e = (e11 - std::exp(-alpha * t)) * cx * xdir[r][k - 1] +
                                     c.eS * cy * ydir[r][k - 1];
                    err2 += e * e;
                }
                sup_point = std::max(sup_point, std::sqrt(err2));
            }
        }
        row.sup_point = sup_point;

        // convolution comparison for constant and half-interval pulses of
        // unit L^1 budget R; the time integral of each propagator entry is
        // available in closed form through phi1
        double sup_conv = 0.0;
        auto conv_diff = [&](double alpha, double t) {
            // integral over [0,t] of (E12(r)/mu - e^{-alpha r}) dr
            const Core c = prop_core(mu, t, alpha);
            const double e22 = c.eC - c.eS / (2.0 * mu);
            const double int_e12 = -(c.eS + mu * (e22 - 1.0)) / alpha;
            return int_e12 / mu - (1.0 - std::exp(-alpha * t)) / alpha;
        };
        for (int k = 1; k <= dom.N; ++k) {
            const double alpha = eigenvalue(k, dom);
            const double amp = (R / T) * std::pow(alpha, -beta / 2.0);
            for (double t : ts) {
                sup_conv = std::max(sup_conv, std::abs(amp * conv_diff(alpha, t)));
                // pulse supported on [0, T/2] with the same L^1 mass
                const double tail = std::max(0.0, t - T / 2.0);
                sup_conv = std::max(
                    sup_conv, std::abs(2.0 * amp * (conv_diff(alpha, t) - conv_diff(alpha, tail))));
            }
        }
        row.sup_conv = sup_conv;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace sk
