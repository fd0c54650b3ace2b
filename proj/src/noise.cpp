#include "sk/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace sk {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// uniform in (0,1) from 64 bits; offset keeps 0 out of the support
inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
    std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return (static_cast<double>(bits >> 11) + 0.5) * (1.0 / 9007199254740992.0);  // 2^-53
}

}  // namespace

std::array<std::uint32_t, 4> Philox4x32::block(std::array<std::uint32_t, 2> key,
                                               std::array<std::uint32_t, 4> ctr) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

void SeededDriver::sample_normals(std::span<double> out) {
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                              static_cast<std::uint32_t>(seed_ >> 32)};
    const std::size_t blocks = (out.size() + 1) / 2;
    for (std::size_t b = 0; b < blocks; ++b) {
        std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(b),
            static_cast<std::uint32_t>(step_),
            static_cast<std::uint32_t>(step_ >> 32),
            static_cast<std::uint32_t>(stream_),
        };
        auto r = Philox4x32::block(key, ctr);
        double u1 = to_unit(r[0], r[1]);
        double u2 = to_unit(r[2], r[3]);
        double rad = std::sqrt(-2.0 * std::log(u1));
        out[2 * b] = rad * std::cos(2.0 * pi * u2);
        if (2 * b + 1 < out.size()) out[2 * b + 1] = rad * std::sin(2.0 * pi * u2);
    }
    ++step_;
}

std::vector<double> SeededDriver::sample_normals(std::size_t count) {
    std::vector<double> out(count);
    sample_normals(std::span<double>(out));
    return out;
}

void SeededDriver::sample_increments(double dt, std::span<double> out) {
    if (!(dt > 0.0)) throw std::invalid_argument("sample_increments: dt must be positive");
    sample_normals(out);
    const double s = std::sqrt(dt);
    for (double& x : out) x *= s;
}

std::vector<double> SeededDriver::sample_increments(double dt, std::size_t count) {
    std::vector<double> out(count);
    sample_increments(dt, std::span<double>(out));
    return out;
}

NoiseSpectrum NoiseSpectrum::power_law(const DomainConfig& dom, double decay_s, double amp,
                                       int nbar) {
    if (nbar < 1 || nbar > dom.N) throw std::invalid_argument("power_law: nbar out of range");
    NoiseSpectrum s;
    s.lambdas.resize(dom.N);
    for (int k = 1; k <= dom.N; ++k)
        s.lambdas[k - 1] = amp * std::pow(eigenvalue(k, dom), -decay_s);
    s.nbar = nbar;
    s.c_min = s.lambdas[0];
    for (int k = 1; k <= nbar; ++k) s.c_min = std::min(s.c_min, s.lambdas[k - 1]);
    s.monotone_from = 1;
    return s;
}

double NoiseSpectrum::trace_q2() const {
    double s = 0.0;
    for (double l : lambdas) s += l * l;
    return s;
}

HypothesisQReport verify_hypothesis_q(const NoiseSpectrum& spec, const DomainConfig& dom,
                                      double delta) {
    if (spec.lambdas.empty()) throw std::invalid_argument("verify_hypothesis_q: empty spectrum");
    if (!(delta > 0.0)) throw std::invalid_argument("verify_hypothesis_q: delta must be positive");
    if (spec.size() != dom.N)
        throw std::invalid_argument("verify_hypothesis_q: spectrum/domain size mismatch");

    HypothesisQReport rep;
    std::vector<double> partial(dom.N);
    double s = 0.0;
    for (int k = 1; k <= dom.N; ++k) {
        double l = spec.lambda(k);
        s += l * l * std::pow(eigenvalue(k, dom), delta);
        partial[k - 1] = s;
    }
    rep.trace_value = s;

    // summability heuristic at truncation: growth of the partial sums over
    // the last decade of retained modes
    int tail_start = std::max(1, dom.N - dom.N / 10);
    double tail = partial[dom.N - 1] - partial[tail_start - 1];
    rep.last_decade_growth = partial[dom.N - 1] > 0 ? tail / partial[dom.N - 1] : 0.0;
    rep.summability_warning = rep.last_decade_growth > 0.01;

    rep.nondegeneracy_ok = spec.nbar >= 1 && spec.nbar <= spec.size();
    for (int k = 1; rep.nondegeneracy_ok && k <= spec.nbar; ++k)
        if (spec.lambda(k) < spec.c_min) rep.nondegeneracy_ok = false;

    for (int k = spec.monotone_from; k < spec.size(); ++k)
        if (spec.lambdas[k] > spec.lambdas[k - 1] * (1.0 + 1e-12)) rep.monotone_ok = false;

    return rep;
}

SpectralField apply_q(const NoiseSpectrum& spec, const SpectralField& x) {
    if (spec.size() != x.dom.N) throw std::invalid_argument("apply_q: size mismatch");
    SpectralField y = x;
    for (int i = 0; i < x.dom.N; ++i) y.coeffs[i] *= spec.lambdas[i];
    return y;
}

}  // namespace sk
