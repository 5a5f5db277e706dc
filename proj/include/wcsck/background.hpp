#pragma once

#include <cmath>
#include <vector>

#include "wcsck/grid.hpp"

namespace wcsck {

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Fubini-Study reference data on the log-orbit coordinate x, polytope [0,1]:
//   f0(x)   = log(1 + e^x)         (potential profile)
//   m0(x)   = e^x/(1 + e^x)        (moment profile, = f0')
//   f0''    = m0 (1 - m0)
// All profile derivatives are closed-form; only the relative potential phi is
// ever differenced numerically.
struct background {
    grid g;
    double y_min = 0.0;
    double y_max = 1.0;

    std::vector<double> f0;        // profile
    std::vector<double> m0;        // f0'
    std::vector<double> f0pp;      // f0''
    std::vector<double> f0ppp;     // f0'''
    std::vector<double> log_f0pp;  // log f0'' = -f0(x) - f0(-x), stable
    std::vector<double> r0;        // Ricci density of omega: -(log f0'')'' = 2 f0''
    std::vector<double> m_ric;     // Hamiltonian of Ric(omega): -(log f0'')' = 2 m0 - 1
    std::vector<double> lap_m0;    // Delta_omega m_omega = f0'''/f0'' = 1 - 2 m0

    // Closed-form total: 2*pi per angle times |P|.
    double area_exact() const { return two_pi * (y_max - y_min); }
    // What the trapezoid rule sees (differs by the O(e^{-L}) truncation tail).
    double area_quadrature = 0.0;
};

inline double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline background make_fs_background(grid g) {
    background bg;
    bg.g = std::move(g);
    const int n = bg.g.n;
    bg.f0.resize(n);
    bg.m0.resize(n);
    bg.f0pp.resize(n);
    bg.f0ppp.resize(n);
    bg.log_f0pp.resize(n);
    bg.r0.resize(n);
    bg.m_ric.resize(n);
    bg.lap_m0.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = bg.g.x[static_cast<std::size_t>(i)];
        const double m = sigmoid(x);
        const std::size_t k = static_cast<std::size_t>(i);
        bg.f0[k] = softplus(x);
        bg.m0[k] = m;
        bg.f0pp[k] = m * (1.0 - m);
        bg.f0ppp[k] = m * (1.0 - m) * (1.0 - 2.0 * m);
        // Numeric log of the stored density, not the closed form
        // -softplus(x)-softplus(-x): consumers difference this against
        // log(psi'') and must get an exact zero at phi = 0.
        bg.log_f0pp[k] = std::log(bg.f0pp[k]);
        bg.r0[k] = 2.0 * m * (1.0 - m);
        bg.m_ric[k] = 2.0 * m - 1.0;
        bg.lap_m0[k] = 1.0 - 2.0 * m;
    }
    bg.area_quadrature = two_pi * integrate(bg.g, bg.f0pp);
    return bg;
}

}  // namespace wcsck
