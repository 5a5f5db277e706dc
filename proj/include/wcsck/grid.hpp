#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "wcsck/errors.hpp"

namespace wcsck {

// Uniform grid on [-half_width, half_width]. All fields are nodal
// std::vector<double> of size n; stencils close the boundary by constant
// extension (ghost value = edge value), which encodes the decay condition
// f' -> 0 outside the box and keeps every stencil centered.
struct grid {
    int n = 0;
    double half_width = 0.0;
    double h = 0.0;
    std::vector<double> x;

    // Nodes contaminated by the ghost closure after up to three composed
    // stencil applications (max composed half-width 4, times 3).
    static constexpr int trusted_margin = 12;

    int trusted_lo() const { return trusted_margin; }
    int trusted_hi() const { return n - 1 - trusted_margin; }
};

inline grid make_grid(int n, double half_width) {
    if (n < 2 * grid::trusted_margin + 9)
        throw grid_mismatch("grid: n too small for trusted interior");
    if (!(half_width > 0.0))
        throw grid_mismatch("grid: half_width must be positive");
    grid g;
    g.n = n;
    g.half_width = half_width;
    g.h = 2.0 * half_width / static_cast<double>(n - 1);
    g.x.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g.x[static_cast<std::size_t>(i)] = -half_width + g.h * static_cast<double>(i);
    return g;
}

inline void require_same_grid(const grid& a, const grid& b) {
    if (a.n != b.n || a.half_width != b.half_width)
        throw grid_mismatch("operands live on different grids");
}

namespace detail {
// One-sided second-order edge stencils.  No ghost extension: any extension
// rule asserts something about the data beyond the box, and for states whose
// density at the box ends is already at the truncation scale (far-translated
// potentials) a modeling error there flips the sign of psi''.  One-sided
// differences only ever amplify the honest O(h^2) truncation of the tail.
inline double d1_onesided(const std::vector<double>& f, int i, int dir, double h) {
    const std::size_t k = static_cast<std::size_t>(i);
    const std::size_t k1 = static_cast<std::size_t>(i + dir);
    const std::size_t k2 = static_cast<std::size_t>(i + 2 * dir);
    return dir * (-3.0 * f[k] + 4.0 * f[k1] - f[k2]) / (2.0 * h);
}
inline double d2_onesided(const std::vector<double>& f, int i, int dir, double h) {
    const std::size_t k = static_cast<std::size_t>(i);
    const std::size_t k1 = static_cast<std::size_t>(i + dir);
    const std::size_t k2 = static_cast<std::size_t>(i + 2 * dir);
    const std::size_t k3 = static_cast<std::size_t>(i + 3 * dir);
    return (2.0 * f[k] - 5.0 * f[k1] + 4.0 * f[k2] - f[k3]) / (h * h);
}
inline double d1_centered(const std::vector<double>& f, int i, double h) {
    return (f[static_cast<std::size_t>(i + 1)] - f[static_cast<std::size_t>(i - 1)]) / (2.0 * h);
}
inline double d2_centered(const std::vector<double>& f, int i, double h) {
    return (f[static_cast<std::size_t>(i + 1)] - 2.0 * f[static_cast<std::size_t>(i)] +
            f[static_cast<std::size_t>(i - 1)]) /
           (h * h);
}
// One-sided second-order third derivative (error ~ h^2 f^(5)).
inline double d3_onesided(const std::vector<double>& f, int i, int dir, double h) {
    const std::size_t k = static_cast<std::size_t>(i);
    const std::size_t k1 = static_cast<std::size_t>(i + dir);
    const std::size_t k2 = static_cast<std::size_t>(i + 2 * dir);
    const std::size_t k3 = static_cast<std::size_t>(i + 3 * dir);
    const std::size_t k4 = static_cast<std::size_t>(i + 4 * dir);
    return dir * (-5.0 * f[k] + 18.0 * f[k1] - 24.0 * f[k2] + 14.0 * f[k3] - 3.0 * f[k4]) /
           (2.0 * h * h * h);
}
}  // namespace detail

// Fourth-order centered first derivative; one-sided / narrow second-order
// fallback on the outermost two nodes of each end.
inline std::vector<double> d1_4th(const grid& g, const std::vector<double>& f) {
    std::vector<double> out(f.size());
    const double c = 1.0 / (12.0 * g.h);
    for (int i = 2; i < g.n - 2; ++i)
        out[static_cast<std::size_t>(i)] =
            c * (f[static_cast<std::size_t>(i - 2)] - 8.0 * f[static_cast<std::size_t>(i - 1)] +
                 8.0 * f[static_cast<std::size_t>(i + 1)] - f[static_cast<std::size_t>(i + 2)]);
    out.front() = detail::d1_onesided(f, 0, +1, g.h);
    out[1] = detail::d1_centered(f, 1, g.h);
    out[static_cast<std::size_t>(g.n - 2)] = detail::d1_centered(f, g.n - 2, g.h);
    out.back() = detail::d1_onesided(f, g.n - 1, -1, g.h);
    return out;
}

// Fourth-order centered second derivative with the same edge treatment.
inline std::vector<double> d2_4th(const grid& g, const std::vector<double>& f) {
    std::vector<double> out(f.size());
    const double c = 1.0 / (12.0 * g.h * g.h);
    for (int i = 2; i < g.n - 2; ++i)
        out[static_cast<std::size_t>(i)] =
            c * (-f[static_cast<std::size_t>(i - 2)] + 16.0 * f[static_cast<std::size_t>(i - 1)] -
                 30.0 * f[static_cast<std::size_t>(i)] + 16.0 * f[static_cast<std::size_t>(i + 1)] -
                 f[static_cast<std::size_t>(i + 2)]);
    out.front() = detail::d2_onesided(f, 0, +1, g.h);
    out[1] = detail::d2_centered(f, 1, g.h);
    out[static_cast<std::size_t>(g.n - 2)] = detail::d2_centered(f, g.n - 2, g.h);
    out.back() = detail::d2_onesided(f, g.n - 1, -1, g.h);
    return out;
}

// Second-order blocks, used where expressions are composed several layers deep
// and fourth order could not be realized anyway.
inline std::vector<double> d1_2nd(const grid& g, const std::vector<double>& f) {
    std::vector<double> out(f.size());
    for (int i = 1; i < g.n - 1; ++i)
        out[static_cast<std::size_t>(i)] = detail::d1_centered(f, i, g.h);
    out.front() = detail::d1_onesided(f, 0, +1, g.h);
    out.back() = detail::d1_onesided(f, g.n - 1, -1, g.h);
    return out;
}

inline std::vector<double> d2_2nd(const grid& g, const std::vector<double>& f) {
    std::vector<double> out(f.size());
    for (int i = 1; i < g.n - 1; ++i)
        out[static_cast<std::size_t>(i)] = detail::d2_centered(f, i, g.h);
    out.front() = detail::d2_onesided(f, 0, +1, g.h);
    out.back() = detail::d2_onesided(f, g.n - 1, -1, g.h);
    return out;
}

// Trapezoid rule. For the fields handled here every integrand has derivatives
// of size O(e^{-half_width}) at the box ends, so Euler-Maclaurin makes the
// trapezoid rule effectively spectrally accurate; no fancier rule is needed.
inline double integrate(const grid& g, const std::vector<double>& f) {
    double s = 0.5 * (f.front() + f.back());
    for (int i = 1; i + 1 < g.n; ++i) s += f[static_cast<std::size_t>(i)];
    return s * g.h;
}

// Prefix integrals carry the trapezoid's h^2/12 f' drift at every interior
// point (the endpoint-decay argument only rescues the full-interval value), so
// the Euler-Maclaurin endpoint correction is applied per prefix.
inline std::vector<double> cumulative_integral(const grid& g, const std::vector<double>& f) {
    std::vector<double> out(f.size(), 0.0);
    for (int i = 1; i < g.n; ++i)
        out[static_cast<std::size_t>(i)] =
            out[static_cast<std::size_t>(i - 1)] +
            0.5 * g.h * (f[static_cast<std::size_t>(i - 1)] + f[static_cast<std::size_t>(i)]);
    std::vector<double> df = d1_4th(g, f);
    const double c = g.h * g.h / 12.0;
    for (int i = 1; i < g.n; ++i)
        out[static_cast<std::size_t>(i)] -= c * (df[static_cast<std::size_t>(i)] - df.front());
    return out;
}

// Six-point Lagrange interpolation at an off-grid point; near the box ends the
// window is clamped and values beyond it use the constant extension implicitly
// (callers only evaluate fields that flatten there).
inline double interp6(const grid& g, const std::vector<double>& f, double xq) {
    double t = (xq + g.half_width) / g.h;
    int base = static_cast<int>(std::floor(t)) - 2;
    base = std::clamp(base, 0, g.n - 6);
    double result = 0.0;
    for (int j = 0; j < 6; ++j) {
        double lj = 1.0;
        const double xj = static_cast<double>(base + j);
        for (int k = 0; k < 6; ++k) {
            if (k == j) continue;
            const double xk = static_cast<double>(base + k);
            lj *= (t - xk) / (xj - xk);
        }
        result += lj * f[static_cast<std::size_t>(base + j)];
    }
    return result;
}

inline double max_abs(const std::vector<double>& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

// Sup norm over the trusted interior only.
inline double max_abs_trusted(const grid& g, const std::vector<double>& f) {
    double m = 0.0;
    for (int i = g.trusted_lo(); i <= g.trusted_hi(); ++i)
        m = std::max(m, std::abs(f[static_cast<std::size_t>(i)]));
    return m;
}

}  // namespace wcsck
