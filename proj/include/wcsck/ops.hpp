#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "wcsck/background.hpp"
#include "wcsck/errors.hpp"
#include "wcsck/grid.hpp"
#include "wcsck/state.hpp"
#include "wcsck/weights.hpp"

namespace wcsck {

// ---------------------------------------------------------------------------
// Pointwise differential operators in the invariant reduction. Conventions
// (signs, the moment normalization, the chart factor) are pinned mechanically
// by validate_reduction below and by the identity suite; see conventions().
// ---------------------------------------------------------------------------

inline std::vector<double> moment_map(const toric_state& st) { return st.m; }

inline std::vector<double> laplacian(const toric_state& st, const std::vector<double>& h) {
    std::vector<double> out = d2_4th(st.g(), h);
    for (int i = 0; i < st.g().n; ++i) out[static_cast<std::size_t>(i)] /= st.dens[static_cast<std::size_t>(i)];
    return out;
}

// J xi applied to an invariant function: -h'. The global flip switch exists
// only so the negative-control test can demonstrate that the opposite sign
// breaks the identity suite.
inline std::vector<double> jxi(const toric_state& st, const std::vector<double>& h,
                               bool flip_sign = false) {
    std::vector<double> out = d1_4th(st.g(), h);
    const double sgn = flip_sign ? 1.0 : -1.0;
    for (double& val : out) val *= sgn;
    return out;
}

// <xi,xi>_phi: the squared metric length of the generator.
inline std::vector<double> xi_pair(const toric_state& st) { return st.dens; }

// <da,db>_phi for invariant functions: a'b'/psi''.
inline std::vector<double> grad_pair(const toric_state& st, const std::vector<double>& a,
                                     const std::vector<double>& b) {
    std::vector<double> ap = d1_4th(st.g(), a);
    std::vector<double> bp = d1_4th(st.g(), b);
    std::vector<double> out(ap.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = ap[i] * bp[i] / st.dens[i];
    return out;
}

// (Delta_phi - (v'/v)(m) J xi) h  =  h''/psi'' + (v'/v)(m) h'.
inline std::vector<double> drift_laplacian(const toric_state& st, const weight& v,
                                           const std::vector<double>& h) {
    std::vector<double> hp = d1_4th(st.g(), h);
    std::vector<double> hpp = d2_4th(st.g(), h);
    std::vector<double> out(hp.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double y = st.m[i];
        out[i] = hpp[i] / st.dens[i] + (v.d1(y) / v(y)) * hp[i];
    }
    return out;
}

// F with v(m_phi) omega_phi^n = e^F omega^n.
inline std::vector<double> F_field(const toric_state& st, const weight& v) {
    std::vector<double> out(st.log_ratio.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::log(v(st.m[i])) + st.log_ratio[i];
    return out;
}

// Scalar curvature via the Ricci update Ric(omega_phi) = Ric(omega) -
// dd^c log(psi''/f0''): S = (r0 - (log psi''/f0'')'') / psi''. The background
// part r0 is closed-form; only the ratio is differenced. The stencil order
// here must match the 4th-order blocks used by the energy quadratures, or the
// discrete energy gradient and the curvature pairing drift apart at O(h^2).
inline std::vector<double> scalar_curvature(const toric_state& st) {
    std::vector<double> num = d2_4th(st.g(), st.log_ratio);
    std::vector<double> out(num.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (st.bg->r0[i] - num[i]) / st.dens[i];
    return out;
}

// S_v = v(m) S - 2 v'(m) Delta_phi(m) - v''(m) <xi,xi>_phi.
inline std::vector<double> weighted_scalar_curvature(const toric_state& st, const weight& v) {
    if (st.g().trusted_lo() >= st.g().trusted_hi())
        throw boundary_untrusted("weighted_scalar_curvature: trusted interior is empty");
    std::vector<double> s = scalar_curvature(st);
    std::vector<double> lap_m = laplacian(st, st.m);
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double y = st.m[i];
        out[i] = v(y) * s[i] - 2.0 * v.d1(y) * lap_m[i] - v.d2(y) * st.dens[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Invariant (1,1)-forms: eta = dd^c q in the reduction, carried as the pair
// (e = q'', m = q') so that trace and Hamiltonian data need no differencing.
// ---------------------------------------------------------------------------
struct twist_form {
    std::vector<double> e;        // density: eta corresponds to e(x) dx
    std::vector<double> m;        // Hamiltonian: m_eta = q'
    double eps_floor = 0.0;       // largest eps with eta >= eps * omega on the grid
    double theta_bar = 0.0;       // normalization constant (filled for presets)
    std::string tag;
};

// Ric(omega) packaged the same way (q = -log f0'').
inline twist_form ricci_form(const background& bg) {
    twist_form t;
    t.e = bg.r0;
    t.m = bg.m_ric;
    t.eps_floor = 2.0;  // r0 = 2 f0''
    t.tag = "ricci";
    return t;
}

// tr_phi(eta) = e_eta / psi''.
inline std::vector<double> tr_phi(const toric_state& st, const twist_form& eta) {
    std::vector<double> out(eta.e.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = eta.e[i] / st.dens[i];
    return out;
}

// tr_{v,phi}(eta) = v(m) tr_phi(eta) + <dv(m), m_eta>.
inline std::vector<double> tr_v_phi(const toric_state& st, const weight& v,
                                    const twist_form& eta) {
    std::vector<double> out(eta.e.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double y = st.m[i];
        out[i] = v(y) * eta.e[i] / st.dens[i] + v.d1(y) * eta.m[i];
    }
    return out;
}

inline double weighted_volume(const toric_state& st, const weight& v) {
    std::vector<double> f(st.dens.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = v(st.m[i]) * st.dens[i];
    return two_pi * integrate(st.g(), f);
}

// Normalization constant of a twist form: integral of tr_{v,phi}(theta)
// against omega_phi^n over the w-weighted volume; phi-independent by the
// pushforward identity (tested), so it is evaluated once at phi = 0.
inline double theta_bar_of(const background& bg, const weight_pair& wp, const twist_form& th) {
    std::vector<double> num(th.e.size()), den(th.e.size());
    for (std::size_t i = 0; i < num.size(); ++i) {
        const double y = bg.m0[i];
        num[i] = wp.v(y) * th.e[i] + wp.v.d1(y) * th.m[i] * bg.f0pp[i];
        den[i] = wp.w(y) * bg.f0pp[i];
    }
    return integrate(bg.g, num) / integrate(bg.g, den);
}

inline twist_form twist_scaled_omega(const background& bg, const weight_pair& wp, double c) {
    if (c < 0.0) throw validation_error("twist form requires a nonnegative scale");
    twist_form t;
    t.e.resize(bg.f0pp.size());
    t.m.resize(bg.f0pp.size());
    for (std::size_t i = 0; i < t.e.size(); ++i) {
        t.e[i] = c * bg.f0pp[i];
        t.m[i] = c * bg.m0[i];
    }
    t.eps_floor = c;
    t.tag = c == 0.0 ? "zero" : (c == 1.0 ? "omega" : "scaled");
    t.theta_bar = theta_bar_of(bg, wp, t);
    return t;
}

// The balanced twist form: theta = omega + dd^c psi0 chosen so that
// tr_{v,omega}(theta)/w(m_omega) is the constant theta_bar pointwise. With
// q = f0 + psi0 the condition collapses to the first-order ODE
//   [v(m0) q']' = theta_bar w(m0) f0'',
// solved in closed form by one cumulative integral; theta_bar and the
// integration constant are fixed by the Hamiltonian endpoints m_theta(+-L) =
// m0(+-L) (psi0' decays at the ends like every admissible potential).
inline twist_form twist_balanced(const background& bg, const weight_pair& wp) {
    const int n = bg.g.n;
    std::vector<double> wf(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        wf[k] = wp.w(bg.m0[k]) * bg.f0pp[k];
    }
    const std::vector<double> cum = cumulative_integral(bg.g, wf);
    const double y_lo = bg.m0.front(), y_hi = bg.m0.back();
    const double K = wp.v(y_lo) * y_lo;
    const double tb = (wp.v(y_hi) * y_hi - K) / cum.back();
    twist_form t;
    t.tag = "balanced";
    t.theta_bar = tb;
    t.m.resize(static_cast<std::size_t>(n));
    t.e.resize(static_cast<std::size_t>(n));
    double floor = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double y = bg.m0[k];
        t.m[k] = (tb * cum[k] + K) / wp.v(y);
        // q'' from differentiating v(m0) q' = tb*cum + K in closed form.
        t.e[k] = (tb * wf[k] - wp.v.d1(y) * bg.f0pp[k] * t.m[k]) / wp.v(y);
        floor = std::min(floor, t.e[k] / bg.f0pp[k]);
    }
    t.eps_floor = floor;
    if (!(floor > 0.0))
        throw validation_error("balanced twist form is not positive for these weights");
    return t;
}

// eta_t = (1 - 1/t) theta + Ric(omega).
inline twist_form eta_t_form(const background& bg, const twist_form& theta, double t) {
    twist_form out;
    out.tag = "eta_t";
    const double a = 1.0 - 1.0 / t;
    out.e.resize(theta.e.size());
    out.m.resize(theta.m.size());
    for (std::size_t i = 0; i < out.e.size(); ++i) {
        out.e[i] = a * theta.e[i] + bg.r0[i];
        out.m[i] = a * theta.m[i] + bg.m_ric[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Convention pinning oracle: rebuild Laplacian, J xi, and the moment map from
// scratch on a 2D annulus chart (u = s + i*angle, x = 2s) with plain 2D finite
// differences, and require the 1D reduction formulas to be their limits. A
// wrong sign, a wrong chart factor, or a wrong moment normalization leaves an
// O(1) discrepancy and the fitted order drops to ~0.
// ---------------------------------------------------------------------------
struct reduction_report {
    double order_laplacian = 0.0;
    double order_jxi = 0.0;
    double order_moment = 0.0;
    bool pass = false;
};

namespace detail {
// Least-squares slope of log2(err) against refinement level (step halving).
inline double fitted_order(const std::vector<double>& errs) {
    const int k = static_cast<int>(errs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < k; ++i) {
        const double xi = static_cast<double>(i);
        const double yi = -std::log2(std::max(errs[static_cast<std::size_t>(i)], 1e-300));
        sx += xi; sy += yi; sxx += xi * xi; sxy += xi * yi;
    }
    return (static_cast<double>(k) * sxy - sx * sy) / (static_cast<double>(k) * sxx - sx * sx);
}
}  // namespace detail

inline reduction_report validate_reduction(const toric_state& st,
                                           const std::function<double(double)>& h) {
    const grid& g1 = st.g();
    // 1D-reduction reference values, computed exactly as every consumer does.
    std::vector<double> h_grid(static_cast<std::size_t>(g1.n));
    for (int i = 0; i < g1.n; ++i)
        h_grid[static_cast<std::size_t>(i)] = h(g1.x[static_cast<std::size_t>(i)]);
    const std::vector<double> lap_1d = laplacian(st, h_grid);
    const std::vector<double> jxi_1d = jxi(st, h_grid);

    // Chart window well inside the trusted interior: x = 2s, s in [s1, s2].
    const double s1 = -1.5, s2 = 1.5;
    const int n_theta = 8;
    std::vector<double> err_lap, err_jxi, err_mom;
    for (int level = 0; level < 3; ++level) {
        const int ns = 61 * (1 << level);
        const double ds = (s2 - s1) / (ns - 1);
        const double dth = two_pi / n_theta;
        // Invariant sample H(s, angle) = h(2s); the angle dimension is kept
        // honest by running real 2D stencils over it.
        std::vector<std::vector<double>> H(static_cast<std::size_t>(ns),
                                           std::vector<double>(n_theta));
        for (int i = 0; i < ns; ++i)
            for (int j = 0; j < n_theta; ++j)
                H[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    h(2.0 * (s1 + i * ds));
        double worst_lap = 0.0, worst_jxi = 0.0, worst_mom = 0.0;
        // Moment map reconstruction: iota_xi omega = -(1/2) dm with
        // omega = 2 psi''(2s) ds ^ dangle and xi = (1/2) d/dangle, so
        // m(s) = m(s1) + int 2 psi''(2s) ds. Trapezoid in s.
        double mom = interp6(g1, st.m, 2.0 * s1);
        double prev_density = interp6(g1, st.dens, 2.0 * s1);
        for (int i = 1; i < ns; ++i) {
            const double s = s1 + i * ds;
            const double x = 2.0 * s;
            const double density = interp6(g1, st.dens, x);
            mom += 0.5 * ds * 2.0 * (prev_density + density);
            prev_density = density;
            worst_mom = std::max(worst_mom, std::abs(mom - interp6(g1, st.m, x)));
            if (i == ns - 1) break;
            const std::size_t ki = static_cast<std::size_t>(i);
            for (int j = 0; j < n_theta; ++j) {
                const std::size_t kj = static_cast<std::size_t>(j);
                const std::size_t jm = static_cast<std::size_t>((j + n_theta - 1) % n_theta);
                const std::size_t jp = static_cast<std::size_t>((j + 1) % n_theta);
                const double hss = (H[ki - 1][kj] - 2.0 * H[ki][kj] + H[ki + 1][kj]) / (ds * ds);
                const double htt = (H[ki][jm] - 2.0 * H[ki][kj] + H[ki][jp]) / (dth * dth);
                const double hs = (H[ki + 1][kj] - H[ki - 1][kj]) / (2.0 * ds);
                // Chart Laplacian: (H_ss + H_tt)/(4 psi''(2s)); J xi = -(1/2) d/ds.
                const double lap_chart = (hss + htt) / (4.0 * density);
                const double jxi_chart = -0.5 * hs;
                worst_lap = std::max(worst_lap, std::abs(lap_chart - interp6(g1, lap_1d, x)));
                worst_jxi = std::max(worst_jxi, std::abs(jxi_chart - interp6(g1, jxi_1d, x)));
            }
        }
        err_lap.push_back(std::max(worst_lap, 1e-16));
        err_jxi.push_back(std::max(worst_jxi, 1e-16));
        err_mom.push_back(std::max(worst_mom, 1e-16));
    }
    reduction_report rep;
    rep.order_laplacian = detail::fitted_order(err_lap);
    rep.order_jxi = detail::fitted_order(err_jxi);
    rep.order_moment = detail::fitted_order(err_mom);
    rep.pass = rep.order_laplacian >= 1.5 && rep.order_jxi >= 1.5 && rep.order_moment >= 1.5;
    if (!rep.pass) throw convention_mismatch("validate_reduction: observed order below 1.5");
    return rep;
}

}  // namespace wcsck
