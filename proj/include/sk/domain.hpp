#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "sk/util.hpp"

namespace sk {

// Dirichlet interval [0,L] with N retained sine modes and an M-point interior
// collocation grid. M defaults to 4N, which keeps cubic products alias-free
// on the retained modes.
struct DomainConfig {
    double L = pi;
    int N = 32;
    int M = 128;

    DomainConfig() = default;
    DomainConfig(double L_, int N_, int M_ = 0);

    bool operator==(const DomainConfig&) const = default;

    double grid_point(int j) const { return (j + 1) * L / (M + 1); }  // j = 0..M-1
    double grid_h() const { return L / (M + 1); }
};

// eigenvalue of -Laplacian for mode k (1-based): (k*pi/L)^2
double eigenvalue(int k, const DomainConfig& dom);

// A function in H = L^2(0,L) given by its coordinates in the orthonormal
// basis e_k(xi) = sqrt(2/L) sin(k pi xi / L).
struct SpectralField {
    DomainConfig dom;
    std::vector<double> coeffs;  // size dom.N, index 0 <-> mode 1

    SpectralField() = default;
    explicit SpectralField(const DomainConfig& d) : dom(d), coeffs(d.N, 0.0) {}

    static SpectralField basis(const DomainConfig& d, int k, double scale = 1.0);

    double& operator[](std::size_t i) { return coeffs[i]; }
    double operator[](std::size_t i) const { return coeffs[i]; }
    int n_modes() const { return dom.N; }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
};

// (displacement, velocity) pair for the second-order system.
struct PhaseState {
    SpectralField u;
    SpectralField v;

    PhaseState() = default;
    explicit PhaseState(const DomainConfig& d) : u(d), v(d) {}
    PhaseState(SpectralField u_, SpectralField v_);
};

double inner(const SpectralField& x, const SpectralField& y);           // <x,y>_H
double sobolev_inner(const SpectralField& x, const SpectralField& y, double beta);
double sobolev_norm(const SpectralField& x, double beta);
inline double h_norm(const SpectralField& x) { return sobolev_norm(x, 0.0); }

// zero all modes above n; 0 <= n <= N
SpectralField project(const SpectralField& x, int n);

// Precomputed sine-transform pair on the interior collocation grid.
// from_grid(to_grid(x)) == x exactly (discrete orthogonality) whenever N <= M.
class GridTransform {
  public:
    explicit GridTransform(const DomainConfig& dom);

    const DomainConfig& dom() const { return dom_; }
    void to_grid(const SpectralField& x, std::span<double> values) const;
    void from_grid(std::span<const double> values, SpectralField& out) const;

  private:
    DomainConfig dom_;
    std::vector<double> basis_;  // M x N table of e_k(xi_j)
};

std::vector<double> to_grid(const SpectralField& x);
SpectralField from_grid(std::span<const double> values, const DomainConfig& dom);

// L^p norm by trapezoid quadrature on the collocation grid (zero endpoints).
double lp_norm(const SpectralField& x, double p);

// CSV row of coefficients with a "# L=<L> N=<N>" header line.
void write_field_csv(std::ostream& os, const SpectralField& x);
SpectralField read_field_csv(std::istream& is);

}  // namespace sk
