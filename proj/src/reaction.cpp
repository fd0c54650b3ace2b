#include "sk/reaction.hpp"

#include <cmath>
#include <stdexcept>

namespace sk {

namespace {

// sign(sigma)*|sigma|^p, the odd power used by the polynomial class
inline double odd_pow(double sigma, double p) {
    return sigma >= 0 ? std::pow(sigma, p) : -std::pow(-sigma, p);
}

// probe values: 0 and +/- log-spaced magnitudes up to sigma_max
std::vector<double> sigma_probe_grid(double sigma_max, int per_side = 240) {
    std::vector<double> g;
    g.reserve(2 * per_side + 1);
    g.push_back(0.0);
    const double lo = -8.0, hi = std::log10(sigma_max);
    for (int i = 0; i < per_side; ++i) {
        double mag = std::pow(10.0, lo + (hi - lo) * i / (per_side - 1));
        g.push_back(mag);
        g.push_back(-mag);
    }
    return g;
}

}  // namespace

ReactionSpec ReactionSpec::linear(double c) {
    if (c < 0.0) throw std::invalid_argument("linear reaction: c must be >= 0");
    ReactionSpec s;
    s.variant = ReactionVariant::Linear;
    s.lambda = 1.0;
    s.linear_c = c;
    s.declared_Lb = -c;
    s.description = "linear c=" + std::to_string(c);
    s.b = [c](double, double sigma) { return -c * sigma; };
    s.db = [c](double, double) { return -c; };
    s.bint = [c](double, double sigma) { return -0.5 * c * sigma * sigma; };
    return s;
}

ReactionSpec ReactionSpec::lipschitz_sigmoid(double A, double c) {
    ReactionSpec s;
    s.variant = ReactionVariant::Lipschitz;
    s.lambda = 1.0;
    s.declared_Lb = A - c;
    s.description = "sigmoid A=" + std::to_string(A) + " c=" + std::to_string(c);
    s.b = [A, c](double, double sigma) { return -c * sigma + A * sigma / std::sqrt(1.0 + sigma * sigma); };
    s.db = [A, c](double, double sigma) {
        double q = 1.0 + sigma * sigma;
        return -c + A / (q * std::sqrt(q));
    };
    s.bint = [A, c](double, double sigma) {
        return -0.5 * c * sigma * sigma + A * (std::sqrt(1.0 + sigma * sigma) - 1.0);
    };
    return s;
}

ReactionSpec ReactionSpec::klein_gordon(double lambda, double a0_, double a1_, double f_amp,
                                        double domain_L) {
    if (!(lambda > 1.0 && lambda <= 3.0))
        throw std::invalid_argument("klein_gordon: lambda must be in (1,3]");
    if (!(a0_ > 0.0)) throw std::invalid_argument("klein_gordon: a0 must be positive");
    if (a1_ == 0.0) a1_ = a0_;
    if (a1_ < a0_) throw std::invalid_argument("klein_gordon: need a0 <= a1");
    ReactionSpec s;
    s.variant = ReactionVariant::Polynomial;
    s.lambda = lambda;
    s.a0 = a0_;
    s.a1 = a1_;
    s.description = "klein-gordon lambda=" + std::to_string(lambda);
    const double slope = (a1_ - a0_) / domain_L;
    auto a = [a0_, slope](double xi) { return a0_ + slope * xi; };
    s.b = [a, lambda, f_amp](double xi, double sigma) {
        return -a(xi) * odd_pow(sigma, lambda) + f_amp * std::tanh(sigma);
    };
    s.db = [a, lambda, f_amp](double xi, double sigma) {
        double t = std::tanh(sigma);
        return -a(xi) * lambda * std::pow(std::abs(sigma), lambda - 1.0) + f_amp * (1.0 - t * t);
    };
    s.bint = [a, lambda, f_amp](double xi, double sigma) {
        return -a(xi) * std::pow(std::abs(sigma), lambda + 1.0) / (lambda + 1.0) +
               f_amp * std::log(std::cosh(sigma));
    };
    s.declared_Lb = f_amp;  // sup slope: polynomial part tops out at 0
    return s;
}

ReactionTerm::ReactionTerm(ReactionSpec spec, const DomainConfig& dom)
    : spec_(std::move(spec)), transform_(dom) {
    if (!spec_.is_linear() && (!spec_.b || !spec_.db || !spec_.bint))
        throw std::invalid_argument("ReactionTerm: spec is missing scalar maps");
}

SpectralField ReactionTerm::eval(const SpectralField& u) const {
    if (spec_.is_linear()) {
        SpectralField out = u;
        out *= -spec_.linear_c;
        return out;
    }
    const DomainConfig& d = transform_.dom();
    std::vector<double> g(d.M);
    transform_.to_grid(u, g);
    for (int j = 0; j < d.M; ++j) {
        g[j] = spec_.b(d.grid_point(j), g[j]);
        if (!std::isfinite(g[j]))
            throw std::overflow_error("reaction evaluation produced a non-finite value");
    }
    SpectralField out;
    transform_.from_grid(g, out);
    return out;
}

double ReactionTerm::antiderivative_integral(const SpectralField& u) const {
    const DomainConfig& d = transform_.dom();
    std::vector<double> g(d.M);
    transform_.to_grid(u, g);
    double s = 0.0;
    for (int j = 0; j < d.M; ++j) {
        double v = spec_.is_linear() ? -0.5 * spec_.linear_c * g[j] * g[j]
                                     : spec_.bint(d.grid_point(j), g[j]);
        if (!std::isfinite(v))
            throw std::overflow_error("antiderivative evaluation produced a non-finite value");
        s += v;
    }
    return s * d.grid_h();
}

SpectralField ReactionTerm::linearize_apply(const SpectralField& u, const SpectralField& h) const {
    if (!(u.dom == h.dom)) throw std::invalid_argument("linearize_apply: domain mismatch");
    if (spec_.is_linear()) {
        SpectralField out = h;
        out *= -spec_.linear_c;
        return out;
    }
    const DomainConfig& d = transform_.dom();
    std::vector<double> gu(d.M), gh(d.M);
    transform_.to_grid(u, gu);
    transform_.to_grid(h, gh);
    for (int j = 0; j < d.M; ++j) {
        gh[j] *= spec_.db(d.grid_point(j), gu[j]);
        if (!std::isfinite(gh[j]))
            throw std::overflow_error("linearization produced a non-finite value");
    }
    SpectralField out;
    transform_.from_grid(gh, out);
    return out;
}

std::vector<double> ReactionTerm::slope_on_grid(const SpectralField& u) const {
    const DomainConfig& d = transform_.dom();
    std::vector<double> g(d.M);
    transform_.to_grid(u, g);
    for (int j = 0; j < d.M; ++j) {
        double s = spec_.is_linear() ? -spec_.linear_c : spec_.db(d.grid_point(j), g[j]);
        if (!std::isfinite(s))
            throw std::overflow_error("slope evaluation produced a non-finite value");
        g[j] = s;
    }
    return g;
}

double ReactionTerm::drift_inner(const SpectralField& u) const {
    if (spec_.is_linear()) return -spec_.linear_c * inner(u, u);
    const DomainConfig& d = transform_.dom();
    std::vector<double> g(d.M);
    transform_.to_grid(u, g);
    double s = 0.0;
    for (int j = 0; j < d.M; ++j) {
        double bv = spec_.b(d.grid_point(j), g[j]);
        if (!std::isfinite(bv))
            throw std::overflow_error("reaction evaluation produced a non-finite value");
        s += bv * g[j];
    }
    return s * d.grid_h();
}

double measured_sup_slope(const ReactionSpec& spec, const DomainConfig& dom, double sigma_max) {
    auto sigmas = sigma_probe_grid(sigma_max);
    double sup = -1e300;
    const int xi_points = 33;
    for (int i = 0; i <= xi_points; ++i) {
        double xi = dom.L * i / xi_points;
        for (double s : sigmas) sup = std::max(sup, spec.db(xi, s));
    }
    return sup;
}

ValidationReport validate_spec(const ReactionSpec& spec, const DomainConfig& dom,
                               const NoiseSpectrum& noise, double sigma_max) {
    ValidationReport rep;
    auto sigmas = sigma_probe_grid(sigma_max);
    const int xi_points = 33;

    double sup_slope = -1e300, sup_slope_sigma = 0.0;
    for (int i = 0; i <= xi_points; ++i) {
        double xi = dom.L * i / xi_points;
        for (double s : sigmas) {
            double d = spec.db(xi, s);
            if (d > sup_slope) { sup_slope = d; sup_slope_sigma = s; }
        }
    }
    rep.measured_Lb = sup_slope;

    const bool poly = spec.variant == ReactionVariant::Polynomial;
    const double gap = poly ? eigenvalue(std::min(noise.nbar, dom.N), dom) : eigenvalue(1, dom);
    const double declared = std::max(spec.declared_Lb, sup_slope);

    ValidationEntry gap_entry;
    gap_entry.inequality = poly ? "L_b < alpha_nbar" : "L_b < alpha_1";
    gap_entry.lhs = declared;
    gap_entry.rhs = gap;
    gap_entry.witness_sigma = sup_slope_sigma;
    gap_entry.ok = declared < gap;
    rep.entries.push_back(gap_entry);

    if (poly) {
        // dissipativity: b(xi,sigma) sigma <= -c1 |sigma|^{lambda+1} + c2
        double c1 = 1e300, c1_sigma = 0.0;
        for (int i = 0; i <= xi_points; ++i) {
            double xi = dom.L * i / xi_points;
            for (double s : sigmas) {
                if (std::abs(s) < 0.1 * sigma_max) continue;  // fit the tail coefficient
                double q = -spec.b(xi, s) * s / std::pow(std::abs(s), spec.lambda + 1.0);
                if (q < c1) { c1 = q; c1_sigma = s; }
            }
        }
        double c2 = 0.0, c2_sigma = 0.0;
        if (c1 > 0.0) {
            for (int i = 0; i <= xi_points; ++i) {
                double xi = dom.L * i / xi_points;
                for (double s : sigmas) {
                    double excess = spec.b(xi, s) * s + c1 * std::pow(std::abs(s), spec.lambda + 1.0);
                    if (excess > c2) { c2 = excess; c2_sigma = s; }
                }
            }
        }
        rep.fitted_c1 = c1;
        rep.fitted_c2 = c2;
        ValidationEntry diss;
        diss.inequality = "b(xi,sigma) sigma <= -c1 |sigma|^{lambda+1} + c2, c1 > 0";
        diss.lhs = c1;
        diss.rhs = 0.0;
        diss.witness_sigma = c1 > 0.0 ? c2_sigma : c1_sigma;
        diss.ok = c1 > 0.0;
        rep.entries.push_back(diss);

        // growth: |b| <= c (1 + |sigma|^lambda)
        double cg = 0.0, cg_sigma = 0.0;
        for (int i = 0; i <= xi_points; ++i) {
            double xi = dom.L * i / xi_points;
            for (double s : sigmas) {
                double q = std::abs(spec.b(xi, s)) / (1.0 + std::pow(std::abs(s), spec.lambda));
                if (q > cg) { cg = q; cg_sigma = s; }
            }
        }
        rep.fitted_growth_c = cg;
        ValidationEntry growth;
        growth.inequality = "|b| <= c (1 + |sigma|^lambda)";
        growth.lhs = cg;
        growth.rhs = cg;
        growth.witness_sigma = cg_sigma;
        growth.ok = std::isfinite(cg);
        rep.entries.push_back(growth);
    }

    rep.ok = true;
    for (const auto& e : rep.entries) rep.ok = rep.ok && e.ok;
    return rep;
}

}  // namespace sk
