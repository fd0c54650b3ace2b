#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sk/domain.hpp"

namespace sk {

// Philox 4x32-10 block cipher (Salmon et al. 2011). Pure function of
// (key, counter), which is what makes every draw replayable from indices.
struct Philox4x32 {
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 2> key,
                                              std::array<std::uint32_t, 4> ctr);
};

// Reproducible Gaussian stream. The i-th draw of step s on stream t under
// seed m is a fixed function of (m, t, s, i): identical across runs and
// thread schedules, independent across streams and steps.
class SeededDriver {
  public:
    SeededDriver(std::uint64_t master_seed, std::uint64_t stream_id)
        : seed_(master_seed), stream_(stream_id), step_(0) {}

    std::uint64_t master_seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }
    std::uint64_t step() const { return step_; }
    void seek(std::uint64_t step) { step_ = step; }

    // count standard normals; advances the step counter
    std::vector<double> sample_normals(std::size_t count);
    void sample_normals(std::span<double> out);

    // Brownian increments over dt: N(0, dt) i.i.d.
    std::vector<double> sample_increments(double dt, std::size_t count);
    void sample_increments(double dt, std::span<double> out);

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t step_;
};

// Diagonal covariance square root Q: Q e_k = lambda_k e_k, plus the
// non-degeneracy data (nbar, c_min) with |Qx|_H >= c_min |P_nbar x|_H.
struct NoiseSpectrum {
    std::vector<double> lambdas;
    int nbar = 1;
    double c_min = 0.0;
    int monotone_from = 1;  // lambdas nonincreasing from this index on (1-based)

    // lambda_k = amp * alpha_k^{-decay_s}
    static NoiseSpectrum power_law(const DomainConfig& dom, double decay_s, double amp = 1.0,
                                   int nbar = 1);

    double lambda(int k) const { return lambdas.at(k - 1); }
    int size() const { return static_cast<int>(lambdas.size()); }
    double trace_q2() const;  // sum lambda_k^2 over retained modes
};

struct HypothesisQReport {
    double trace_value = 0.0;   // sum_k lambda_k^2 alpha_k^delta
    bool nondegeneracy_ok = false;
    bool summability_warning = false;
    bool monotone_ok = true;
    double last_decade_growth = 0.0;
};

HypothesisQReport verify_hypothesis_q(const NoiseSpectrum& spec, const DomainConfig& dom,
                                      double delta);

SpectralField apply_q(const NoiseSpectrum& spec, const SpectralField& x);

}  // namespace sk
