#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sk {

// Signals a diverging trajectory; carries the step at which the state left
// the admissible region.
struct blow_up_error : std::runtime_error {
    std::size_t step;
    explicit blow_up_error(std::size_t step_, const std::string& what_)
        : std::runtime_error(what_), step(step_) {}
};

struct parse_error : std::runtime_error {
    std::size_t line;
    parse_error(std::size_t line_, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

inline constexpr double pi = 3.14159265358979323846264338327950288;

// Gauss-Legendre rule on [-1,1]; nodes/weights via Newton iteration on P_n.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int n) : nodes(n), weights(n) {
        for (int i = 0; i < n; ++i) {
            double x = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }

    // integral of f over [a,b]
    template <class F>
    double integrate(F&& f, double a, double b) const {
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            s += weights[i] * f(mid + half * nodes[i]);
        return s * half;
    }
};

const GaussLegendre& gl16();
const GaussLegendre& gl64();
const GaussLegendre& gl_rule(int n);

// Pairwise (cascade) summation: deterministic and accurate regardless of
// how the values were produced.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

// Static block partition over [0,n); worker i owns a contiguous index range,
// so writes to per-index slots are race-free and results are schedule-independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Thread budget used by parallel_for. 0 = hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;   // unbiased sample variance
    std::size_t n = 0;
};

inline MeanVar mean_var(std::span<const double> v) {
    MeanVar r;
    r.n = v.size();
    if (r.n == 0) return r;
    r.mean = pairwise_sum(v) / static_cast<double>(r.n);
    if (r.n < 2) return r;
    double s = 0.0;
    for (double x : v) s += (x - r.mean) * (x - r.mean);
    r.var = s / static_cast<double>(r.n - 1);
    return r;
}

// Least-squares slope of y against x.
inline double ls_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("ls_slope: need two equal-length samples");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= x.size();
    my /= x.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

}  // namespace sk
