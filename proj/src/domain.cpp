#include "sk/domain.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sk {

namespace {

std::mutex g_rule_mutex;

}  // namespace

const GaussLegendre& gl16() {
    static const GaussLegendre rule(16);
    return rule;
}

const GaussLegendre& gl64() {
    static const GaussLegendre rule(64);
    return rule;
}

const GaussLegendre& gl_rule(int n) {
    if (n == 16) return gl16();
    if (n == 64) return gl64();
    static std::vector<std::pair<int, GaussLegendre>> cache;
    std::lock_guard lock(g_rule_mutex);
    for (const auto& [order, rule] : cache)
        if (order == n) return rule;
    cache.emplace_back(n, GaussLegendre(n));
    return cache.back().second;
}

namespace {

unsigned g_threads = 0;

}  // namespace

void set_thread_count(unsigned n) { g_threads = n; }

unsigned thread_count() {
    if (g_threads > 0) return g_threads;
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    unsigned workers = std::min<std::size_t>(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body, &err = errors[w]] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                err = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

DomainConfig::DomainConfig(double L_, int N_, int M_) : L(L_), N(N_), M(M_ == 0 ? 4 * N_ : M_) {
    if (!(L > 0.0)) throw std::invalid_argument("DomainConfig: L must be positive");
    if (N < 1) throw std::invalid_argument("DomainConfig: N must be >= 1");
    if (M < 2 * N) throw std::invalid_argument("DomainConfig: M must be >= 2N");
}

double eigenvalue(int k, const DomainConfig& dom) {
    if (k < 1 || k > dom.N) throw std::out_of_range("eigenvalue: mode index out of range");
    double w = k * pi / dom.L;
    return w * w;
}

SpectralField SpectralField::basis(const DomainConfig& d, int k, double scale) {
    if (k < 1 || k > d.N) throw std::out_of_range("basis: mode index out of range");
    SpectralField x(d);
    x.coeffs[k - 1] = scale;
    return x;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    if (!(dom == o.dom)) throw std::invalid_argument("field arithmetic: domain mismatch");
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    if (!(dom == o.dom)) throw std::invalid_argument("field arithmetic: domain mismatch");
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (double& c : coeffs) c *= s;
    return *this;
}

PhaseState::PhaseState(SpectralField u_, SpectralField v_) : u(std::move(u_)), v(std::move(v_)) {
    if (!(u.dom == v.dom)) throw std::invalid_argument("PhaseState: components on different domains");
}

double inner(const SpectralField& x, const SpectralField& y) {
    if (!(x.dom == y.dom)) throw std::invalid_argument("inner: domain mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.coeffs.size(); ++i) s += x.coeffs[i] * y.coeffs[i];
    return s;
}

double sobolev_inner(const SpectralField& x, const SpectralField& y, double beta) {
    if (!(x.dom == y.dom)) throw std::invalid_argument("sobolev_inner: domain mismatch");
    double s = 0.0;
    for (int k = 1; k <= x.dom.N; ++k)
        s += std::pow(eigenvalue(k, x.dom), beta) * x.coeffs[k - 1] * y.coeffs[k - 1];
    return s;
}

double sobolev_norm(const SpectralField& x, double beta) {
    if (beta == 0.0) return std::sqrt(inner(x, x));
    return std::sqrt(sobolev_inner(x, x, beta));
}

SpectralField project(const SpectralField& x, int n) {
    if (n < 0 || n > x.dom.N) throw std::out_of_range("project: level out of range");
    SpectralField y = x;
    for (int k = n; k < x.dom.N; ++k) y.coeffs[k] = 0.0;
    return y;
}

GridTransform::GridTransform(const DomainConfig& dom) : dom_(dom) {
    basis_.resize(static_cast<std::size_t>(dom.M) * dom.N);
    const double amp = std::sqrt(2.0 / dom.L);
    for (int j = 0; j < dom.M; ++j)
        for (int k = 1; k <= dom.N; ++k)
            basis_[static_cast<std::size_t>(j) * dom.N + (k - 1)] =
                amp * std::sin(k * pi * (j + 1) / (dom.M + 1));
}

void GridTransform::to_grid(const SpectralField& x, std::span<double> values) const {
    if (!(x.dom == dom_)) throw std::invalid_argument("to_grid: domain mismatch");
    if (values.size() != static_cast<std::size_t>(dom_.M))
        throw std::invalid_argument("to_grid: output size mismatch");
    for (int j = 0; j < dom_.M; ++j) {
        const double* row = &basis_[static_cast<std::size_t>(j) * dom_.N];
        double s = 0.0;
        for (int i = 0; i < dom_.N; ++i) s += row[i] * x.coeffs[i];
        values[j] = s;
    }
}

void GridTransform::from_grid(std::span<const double> values, SpectralField& out) const {
    if (values.size() != static_cast<std::size_t>(dom_.M))
        throw std::invalid_argument("from_grid: input size mismatch");
    out.dom = dom_;
    out.coeffs.assign(dom_.N, 0.0);
    const double h = dom_.grid_h();
    for (int j = 0; j < dom_.M; ++j) {
        const double* row = &basis_[static_cast<std::size_t>(j) * dom_.N];
        const double w = h * values[j];
        for (int i = 0; i < dom_.N; ++i) out.coeffs[i] += w * row[i];
    }
}

std::vector<double> to_grid(const SpectralField& x) {
    GridTransform t(x.dom);
    std::vector<double> values(x.dom.M);
    t.to_grid(x, values);
    return values;
}

SpectralField from_grid(std::span<const double> values, const DomainConfig& dom) {
    GridTransform t(dom);
    SpectralField out;
    t.from_grid(values, out);
    return out;
}

double lp_norm(const SpectralField& x, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    std::vector<double> g = to_grid(x);
    // trapezoid with zero Dirichlet endpoints: interior points get full weight h
    double s = 0.0;
    for (double v : g) s += std::pow(std::abs(v), p);
    return std::pow(s * x.dom.grid_h(), 1.0 / p);
}

void write_field_csv(std::ostream& os, const SpectralField& x) {
    os.precision(17);
    os << "# L=" << x.dom.L << " N=" << x.dom.N << "\n";
    for (int i = 0; i < x.dom.N; ++i) os << (i ? "," : "") << x.coeffs[i];
    os << "\n";
}

SpectralField read_field_csv(std::istream& is) {
    std::string line;
    std::size_t lineno = 0;
    double L = 0.0;
    int N = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (std::sscanf(line.c_str(), "# L=%lf N=%d", &L, &N) != 2)
                throw parse_error(lineno, "bad field header, expected '# L=<L> N=<N>'");
            continue;
        }
        if (N <= 0) throw parse_error(lineno, "coefficients before header");
        DomainConfig dom(L, N);
        SpectralField x(dom);
        std::stringstream ss(line);
        std::string tok;
        int i = 0;
        while (std::getline(ss, tok, ',')) {
            if (i >= N) throw parse_error(lineno, "too many coefficients");
            try {
                x.coeffs[i++] = std::stod(tok);
            } catch (const std::exception&) {
                throw parse_error(lineno, "bad coefficient '" + tok + "'");
            }
        }
        if (i != N) throw parse_error(lineno, "expected " + std::to_string(N) + " coefficients");
        return x;
    }
    throw parse_error(lineno, "empty field file");
}

}  // namespace sk
