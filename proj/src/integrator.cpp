#include "sk/integrator.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace sk {

namespace {

constexpr double kBlowUpThreshold = 1e12;

using cplx = std::complex<double>;

// (e^w - 1)/w, series near 0
cplx phi1c(cplx w) {
    if (std::abs(w) < 1e-4)
        return 1.0 + w * (0.5 + w * (1.0 / 6 + w * (1.0 / 24 + w / 120.0)));
    return (std::exp(w) - 1.0) / w;
}

// integral_0^dt e^{z s} ds
cplx j_int(cplx z, double dt) { return dt * phi1c(z * dt); }

}  // namespace

void SchemeConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("SchemeConfig: dt must be positive");
    if (!(T > 0.0) || dt > T) throw std::invalid_argument("SchemeConfig: need 0 < dt <= T");
    if (record_stride < 1) throw std::invalid_argument("SchemeConfig: record_stride >= 1");
}

StepNoiseCov step_cov(double mu, double dt, double alpha, double lambda) {
    if (!(mu > 0.0) || !(dt >= 0.0)) throw std::invalid_argument("step_cov: mu > 0, dt >= 0");
    StepNoiseCov out;
    if (dt == 0.0 || lambda == 0.0) return out;

    const double disc = 1.0 - 4.0 * mu * alpha;
    const double g2 = (lambda / mu) * (lambda / mu);
    const double theta_dt_sq = std::abs(disc) * (0.5 * dt / mu) * (0.5 * dt / mu);

    double i11, i12, i22;
    if (theta_dt_sq > 1e-2) {
        // eigenbasis closed form; complex pair handled by the same expressions
        const cplx sq = std::sqrt(cplx(disc, 0.0));
        const cplx om_p = (-1.0 + sq) / (2.0 * mu);
        const cplx om_m = (-1.0 - sq) / (2.0 * mu);
        const cplx four_theta2 = sq * sq / (mu * mu);  // (om_p - om_m)^2
        const cplx jpp = j_int(2.0 * om_p, dt);
        const cplx jmm = j_int(2.0 * om_m, dt);
        const cplx jpm = j_int(om_p + om_m, dt);
        i11 = ((jpp - 2.0 * jpm + jmm) / four_theta2).real();
        i12 = ((om_p * jpp + om_m * jmm - (om_p + om_m) * jpm) / four_theta2).real();
        i22 = ((om_p * om_p * jpp - 2.0 * om_p * om_m * jpm + om_m * om_m * jmm) / four_theta2)
                  .real();
    } else {
        // near the double root the eigen decomposition cancels badly; the
        // series-stable propagator entries are integrated instead
        const GaussLegendre& rule = gl64();
        auto entries = [&](double s, double& e12, double& e22) {
            const ModePropagator p = wave_propagator(mu, s, alpha);
            e12 = p.E.a12;
            e22 = p.E.a22;
        };
        i11 = rule.integrate(
            [&](double s) { double a, b; entries(s, a, b); return a * a; }, 0.0, dt);
        i12 = rule.integrate(
            [&](double s) { double a, b; entries(s, a, b); return a * b; }, 0.0, dt);
        i22 = rule.integrate(
            [&](double s) { double a, b; entries(s, a, b); return b * b; }, 0.0, dt);
    }

    out.s11 = g2 * i11;
    out.s12 = g2 * i12;
    out.s22 = g2 * i22;

    // symmetrize is implicit (single off-diagonal); floor the eigenvalues at 0
    const double tr = out.s11 + out.s22;
    const double det = out.s11 * out.s22 - out.s12 * out.s12;
    const double gap = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    const double e_min = 0.5 * tr - gap;
    if (e_min < -1e-12 * tr)
        throw std::runtime_error("step_cov: covariance has a substantially negative eigenvalue");
    if (e_min < 0.0) {
        // rank-1 projection onto the top eigenvector
        const double e_max = 0.5 * tr + gap;
        double vx = out.s12, vy = e_max - out.s11;
        double nv = std::hypot(vx, vy);
        if (nv == 0.0) { vx = 1.0; vy = 0.0; nv = 1.0; }
        vx /= nv;
        vy /= nv;
        out.s11 = e_max * vx * vx;
        out.s12 = e_max * vx * vy;
        out.s22 = e_max * vy * vy;
    }

    out.l11 = std::sqrt(std::max(0.0, out.s11));
    out.l21 = out.l11 > 0.0 ? out.s12 / out.l11 : 0.0;
    out.l22 = std::sqrt(std::max(0.0, out.s22 - out.l21 * out.l21));
    return out;
}

StepNoiseCov step_cov(double mu, double dt, int k, const NoiseSpectrum& noise,
                      const DomainConfig& dom) {
    if (noise.size() != dom.N) throw std::invalid_argument("step_cov: spectrum size mismatch");
    return step_cov(mu, dt, eigenvalue(k, dom), noise.lambda(k));
}

WaveStepper::WaveStepper(const DomainConfig& dom, double mu, const NoiseSpectrum& noise,
                         const ReactionSpec& reaction, const SchemeConfig& cfg)
    : mu_(mu), cfg_(cfg), reaction_(reaction, dom) {
    cfg_.validate();
    if (!(mu > 0.0)) throw std::invalid_argument("WaveStepper: mu must be positive");
    if (noise.size() != dom.N) throw std::invalid_argument("WaveStepper: spectrum size mismatch");
    const int N = dom.N;
    alphas_.resize(N);
    exp_dt_.resize(N);
    drift_u_.resize(N);
    drift_v_.resize(N);
    for (int k = 1; k <= N; ++k) {
        alphas_[k - 1] = eigenvalue(k, dom);
        const ModePropagator p = wave_propagator(mu, cfg_.dt, alphas_[k - 1]);
        exp_dt_[k - 1] = p.E;
        drift_u_[k - 1] = p.phi1.a12 / mu;
        drift_v_[k - 1] = p.phi1.a22 / mu;
    }
    if (cfg_.noise_mode == NoiseMode::ExactCovariance) {
        cov_.resize(N);
        for (int k = 1; k <= N; ++k)
            cov_[k - 1] = step_cov(mu, cfg_.dt, alphas_[k - 1], noise.lambda(k));
    } else {
        coup_u_.resize(N);
        coup_v_.resize(N);
        for (int k = 1; k <= N; ++k) {
            coup_u_[k - 1] = exp_dt_[k - 1].a12 * noise.lambda(k) / mu;
            coup_v_[k - 1] = exp_dt_[k - 1].a22 * noise.lambda(k) / mu;
        }
    }
}

void WaveStepper::drift_step(PhaseState& z) const {
    const SpectralField b = reaction_.eval(z.u);
    const int N = dom().N;
    for (int i = 0; i < N; ++i) {
        const Mode2x2& E = exp_dt_[i];
        const double u = z.u[i], v = z.v[i];
        z.u[i] = E.a11 * u + E.a12 * v + drift_u_[i] * b[i];
        z.v[i] = E.a21 * u + E.a22 * v + drift_v_[i] * b[i];
    }
}

void WaveStepper::check_state(const PhaseState& z) const {
    double e = 0.0;
    for (int i = 0; i < dom().N; ++i)
        e += alphas_[i] * z.u[i] * z.u[i] + z.v[i] * z.v[i];
    if (!(e < kBlowUpThreshold * kBlowUpThreshold))
        throw blow_up_error(0, "wave state left the admissible region");
}

void WaveStepper::step(PhaseState& z, SeededDriver& drv) const {
    if (cfg_.noise_mode != NoiseMode::ExactCovariance)
        throw std::invalid_argument("WaveStepper: driver-based step requires exact_covariance");
    drift_step(z);
    const int N = dom().N;
    std::vector<double> xi(2 * static_cast<std::size_t>(N));
    drv.sample_normals(std::span<double>(xi));
    for (int i = 0; i < N; ++i) {
        const StepNoiseCov& c = cov_[i];
        z.u[i] += c.l11 * xi[2 * i];
        z.v[i] += c.l21 * xi[2 * i] + c.l22 * xi[2 * i + 1];
    }
    check_state(z);
}

void WaveStepper::step(PhaseState& z, std::span<const double> dbeta) const {
    if (cfg_.noise_mode != NoiseMode::CoupledIncrement)
        throw std::invalid_argument("WaveStepper: increment-based step requires coupled_increment");
    if (dbeta.size() != static_cast<std::size_t>(dom().N))
        throw std::invalid_argument("WaveStepper: increment count mismatch");
    drift_step(z);
    for (int i = 0; i < dom().N; ++i) {
        z.u[i] += coup_u_[i] * dbeta[i];
        z.v[i] += coup_v_[i] * dbeta[i];
    }
    check_state(z);
}

HeatStepper::HeatStepper(const DomainConfig& dom, const NoiseSpectrum& noise,
                         const ReactionSpec& reaction, const SchemeConfig& cfg)
    : cfg_(cfg), reaction_(reaction, dom) {
    cfg_.validate();
    if (noise.size() != dom.N) throw std::invalid_argument("HeatStepper: spectrum size mismatch");
    const int N = dom.N;
    decay_.resize(N);
    drift_.resize(N);
    noise_sd_.resize(N);
    coup_.resize(N);
    for (int k = 1; k <= N; ++k) {
        const double a = eigenvalue(k, dom);
        decay_[k - 1] = std::exp(-a * cfg_.dt);
        drift_[k - 1] = -std::expm1(-a * cfg_.dt) / a;
        noise_sd_[k - 1] = noise.lambda(k) * std::sqrt(-std::expm1(-2.0 * a * cfg_.dt) / (2.0 * a));
        coup_[k - 1] = decay_[k - 1] * noise.lambda(k);
    }
}

void HeatStepper::drift_step(SpectralField& u) const {
    const SpectralField b = reaction_.eval(u);
    for (int i = 0; i < dom().N; ++i) u[i] = decay_[i] * u[i] + drift_[i] * b[i];
}

void HeatStepper::check_state(const SpectralField& u) const {
    double e = 0.0;
    for (int i = 0; i < dom().N; ++i) e += u[i] * u[i];
    if (!(e < kBlowUpThreshold * kBlowUpThreshold))
        throw blow_up_error(0, "parabolic state left the admissible region");
}

void HeatStepper::step(SpectralField& u, SeededDriver& drv) const {
    if (cfg_.noise_mode != NoiseMode::ExactCovariance)
        throw std::invalid_argument("HeatStepper: driver-based step requires exact_covariance");
    drift_step(u);
    std::vector<double> xi(dom().N);
    drv.sample_normals(std::span<double>(xi));
    for (int i = 0; i < dom().N; ++i) u[i] += noise_sd_[i] * xi[i];
    check_state(u);
}

void HeatStepper::step(SpectralField& u, std::span<const double> dbeta) const {
    if (cfg_.noise_mode != NoiseMode::CoupledIncrement)
        throw std::invalid_argument("HeatStepper: increment-based step requires coupled_increment");
    if (dbeta.size() != static_cast<std::size_t>(dom().N))
        throw std::invalid_argument("HeatStepper: increment count mismatch");
    drift_step(u);
    for (int i = 0; i < dom().N; ++i) u[i] += coup_[i] * dbeta[i];
    check_state(u);
}

std::vector<CoupledErrorStats> simulate_coupled(std::span<const double> mu_list,
                                                const NoiseSpectrum& noise,
                                                const ReactionSpec& reaction,
                                                const PhaseState& init_wave,
                                                const SpectralField& init_heat,
                                                const SchemeConfig& cfg, std::uint64_t seed,
                                                int n_trajectories) {
    if (cfg.noise_mode != NoiseMode::CoupledIncrement)
        throw std::invalid_argument("simulate_coupled: requires coupled_increment noise mode");
    if (!(init_wave.u.dom == init_heat.dom))
        throw std::invalid_argument("simulate_coupled: initial data on different domains");
    const DomainConfig dom = init_heat.dom;
    const std::size_t n_steps = static_cast<std::size_t>(std::llround(cfg.T / cfg.dt));
    const HeatStepper heat(dom, noise, reaction, cfg);

    std::vector<CoupledErrorStats> stats(mu_list.size());
    for (std::size_t im = 0; im < mu_list.size(); ++im) {
        stats[im].mu = mu_list[im];
        stats[im].per_trajectory.assign(n_trajectories, 0.0);
    }

    for (std::size_t im = 0; im < mu_list.size(); ++im) {
        const WaveStepper wave(dom, mu_list[im], noise, reaction, cfg);
        auto& slot = stats[im].per_trajectory;
        parallel_for(n_trajectories, [&](std::size_t m) {
            // one stream per trajectory, replayed identically for every mu
            SeededDriver drv(seed, m);
            PhaseState z = init_wave;
            SpectralField u = init_heat;
            std::vector<double> db(dom.N);
            double sup = h_norm(z.u - u);
            for (std::size_t i = 0; i < n_steps; ++i) {
                drv.sample_increments(cfg.dt, std::span<double>(db));
                try {
                    wave.step(z, db);
                    heat.step(u, db);
                } catch (const blow_up_error& e) {
                    throw blow_up_error(i, e.what());
                }
                double d = 0.0;
                for (int k = 0; k < dom.N; ++k)
                    d += (z.u[k] - u[k]) * (z.u[k] - u[k]);
                sup = std::max(sup, std::sqrt(d));
            }
            slot[m] = sup;
        });
        const MeanVar mv = mean_var(slot);
        stats[im].mean_sup = mv.mean;
        stats[im].se_sup = std::sqrt(mv.var / std::max<std::size_t>(1, mv.n));
    }
    return stats;
}

}  // namespace sk
