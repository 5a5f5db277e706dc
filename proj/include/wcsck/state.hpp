#pragma once

#include <cmath>
#include <cstdio>
#include <vector>

#include "wcsck/background.hpp"
#include "wcsck/errors.hpp"
#include "wcsck/grid.hpp"
#include "wcsck/rng.hpp"

namespace wcsck {

// A torus-invariant metric state: psi = f0 + phi with psi'' > 0. The moment
// map is psi' and the volume density (per 2*pi of angle) is psi'' dx.
struct toric_state {
    const background* bg = nullptr;
    std::vector<double> phi;
    std::vector<double> phi_p;      // d1_4th(phi)
    std::vector<double> phi_pp;     // d2_4th(phi)
    std::vector<double> m;          // moment map psi' = m0 + phi'
    std::vector<double> dens;       // psi'' = f0'' + phi''
    std::vector<double> log_ratio;  // log(psi''/f0'')
    double min_density = 0.0;

    const grid& g() const { return bg->g; }
};

inline toric_state build_state(const background& bg, std::vector<double> phi) {
    if (static_cast<int>(phi.size()) != bg.g.n)
        throw grid_mismatch("build_state: phi size does not match the grid");
    toric_state st;
    st.bg = &bg;
    st.phi = std::move(phi);
    for (double p : st.phi)
        if (!std::isfinite(p)) throw validation_error("build_state: phi has non-finite entries");
    st.phi_p = d1_4th(bg.g, st.phi);
    st.phi_pp = d2_4th(bg.g, st.phi);
    const int n = bg.g.n;
    st.m.resize(n);
    st.dens.resize(n);
    st.log_ratio.resize(n);
    st.min_density = std::numeric_limits<double>::infinity();
    int worst = 0;
    for (int i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        st.m[k] = bg.m0[k] + st.phi_p[k];
        st.dens[k] = bg.f0pp[k] + st.phi_pp[k];
        if (st.dens[k] < st.min_density) {
            st.min_density = st.dens[k];
            worst = i;
        }
    }
    if (!(st.min_density > 0.0)) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "Kahler condition violated: psi''=%.6g at x=%.6g",
                      st.min_density, bg.g.x[static_cast<std::size_t>(worst)]);
        throw kahler_condition_violated(buf);
    }
    // The decay closure phi' -> 0 at the box ends is what keeps the moment
    // image inside P and the quadrature endpoints matched to the background.
    const double decay = std::max(std::abs(st.phi_p.front()), std::abs(st.phi_p.back()));
    if (decay > 1e-3) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "state does not satisfy the decay closure: |phi'(+-L)|=%.3g", decay);
        throw boundary_untrusted(buf);
    }
    for (int i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        st.log_ratio[k] = std::log(st.dens[k]) - bg.log_f0pp[k];
    }
    return st;
}

// Smooth compactly-concentrated random bump, guaranteed admissible by retry.
inline std::vector<double> random_bumps(const background& bg, rng64& rng, double amplitude,
                                        int n_bumps = 3) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<double> phi(static_cast<std::size_t>(bg.g.n), 0.0);
        for (int b = 0; b < n_bumps; ++b) {
            const double a = rng.next_in(-amplitude, amplitude);
            const double ctr = rng.next_in(-2.0, 2.0);
            // Width capped so the bump tail dies well below the background
            // density e^{-|x|} by the box ends; wider bumps leave a visible
            // relative density perturbation at x = +-L.
            const double s = rng.next_in(0.8, 1.4);
            for (int i = 0; i < bg.g.n; ++i) {
                const double z = (bg.g.x[static_cast<std::size_t>(i)] - ctr) / s;
                phi[static_cast<std::size_t>(i)] += a * std::exp(-0.5 * z * z);
            }
        }
        try {
            build_state(bg, phi);
            return phi;
        } catch (const kahler_condition_violated&) {
            continue;  // resample; deterministic given the seed
        }
    }
    throw validation_error("random_bumps: could not find an admissible sample");
}

namespace detail {

// Density of the Fubini-Study potential, computed through the small branch of
// the sigmoid so it keeps full relative precision out to large |x|.
inline double sigma_prime(double x) {
    const double e = sigmoid(-std::abs(x));
    return e * (1.0 - e);
}

// Continuation of a state beyond the box end at x_e, used when a translated
// potential needs values where there is no data. The density is continued
// with the background's own tail shape times a small linear correction,
//   psi''(x_e + d) = psi''(x_e) * [f0''(x_e+d)/f0''(x_e)] * (1 + c d),
//   c = psi'''/psi''(x_e) - (log f0'')'(x_e),
// which matches value, slope, curvature and third derivative of psi at the
// seam (no kink for the curvature stencils to amplify) AND keeps the tail's
// log-density curving the way the background's does. The latter is what the
// scalar curvature sees: a tail with straight log-density (for instance
// psi'' ~ e^{-gamma d}) has (log psi''/f0'')'' = -(log f0'')'' = r0, which
// cancels the curvature numerator and drags S to 0 over the few nodes the
// stencils reach past the seam — an O(1) boundary layer in a quantity whose
// true variation out there is the e^{-L}-sized projection residual. With the
// background-shape tail the continuation is exact at phi = 0 and off by only
// the phi-tail's own curvature error otherwise.
struct edge_tail {
    double x_e = 0.0;
    double phi_e = 0.0;
    double m_e = 0.0;
    double dens_e = 0.0;
    double c = 0.0;
    bool right = false;

    edge_tail(const background& bg, const std::vector<double>& phi, bool right_side) {
        const int n = bg.g.n;
        const double h = bg.g.h;
        right = right_side;
        const int e = right ? n - 1 : 0;
        const int dir = right ? -1 : +1;
        const std::size_t ke = static_cast<std::size_t>(e);
        x_e = right ? bg.g.half_width : -bg.g.half_width;
        phi_e = phi[ke];
        m_e = sigmoid(x_e) + detail::d1_onesided(phi, e, dir, h);
        dens_e = bg.f0pp[ke] + detail::d2_onesided(phi, e, dir, h);
        const double psi3_e = bg.f0ppp[ke] + detail::d3_onesided(phi, e, dir, h);
        const double gamma0 = 1.0 - 2.0 * sigmoid(x_e);  // (log f0'')'(x_e)
        c = psi3_e / dens_e - gamma0;
        if (!std::isfinite(c)) c = 0.0;
        // The correction must keep the continued density positive over the
        // reach actually used (a few units at most); a state wild enough to
        // break that has no trustworthy tail data anyway, so fall back to the
        // plain background shape.
        if (std::abs(c) > 0.25) c = 0.0;
    }

    // The phi-part p(xq) = psi_ext(xq) - f0(xq), assembled without O(|x|)
    // intermediates: p gets differenced by the state stencils, and a rounding
    // of ulp(psi ~ L) per value would put ~ ulp(L)/h^2 of noise on a density
    // that is only ~ e^{-L} near the box ends.
    double p(double xq) const {
        const double d = xq - x_e;
        // I(d) = int_0^d (d-u) rho(u) (1+cu) du via Simpson in u = d s.
        const double rho0 = sigma_prime(x_e);
        const int panels = 16;
        double acc = 0.0;
        for (int j = 0; j <= 2 * panels; ++j) {
            const double s = static_cast<double>(j) / (2 * panels);
            const double u = d * s;
            const double f = (1.0 - s) * (sigma_prime(x_e + u) / rho0) * (1.0 + c * u);
            const double w = (j == 0 || j == 2 * panels) ? 1.0 : (j % 2 ? 4.0 : 2.0);
            acc += w * f;
        }
        const double tail = dens_e * d * d * acc / (6.0 * panels);
        const double hw = std::abs(x_e);
        if (right) {
            return phi_e + (m_e - 1.0) * d + (softplus(-hw) - softplus(-xq)) + tail;
        }
        // Left of the box f0 itself is ~ e^{-L}: every term is small.
        return phi_e + m_e * d + (softplus(-hw) - softplus(xq)) + tail;
    }
};

}  // namespace detail

// Torus flow sigma_s acting on potentials: psi -> psi(.+s) re-based to f0.
// The f0 part shifts in closed form; only phi itself is interpolated. Beyond
// the box, psi is continued by detail::edge_tail.
// The destination grid may differ from the source: sampling a translated (or
// untranslated, s = 0) potential onto a padded grid lets integrals over the
// original window use interior stencils only, pushing the one-sided edge
// truncation outside the region that matters.
inline std::vector<double> translate_potential(const background& bg,
                                               const std::vector<double>& phi, double s,
                                               const grid& gdst) {
    const double hw = bg.g.half_width;
    const detail::edge_tail tail_l(bg, phi, false);
    const detail::edge_tail tail_r(bg, phi, true);
    std::vector<double> out(static_cast<std::size_t>(gdst.n));
    for (int i = 0; i < gdst.n; ++i) {
        const double x = gdst.x[static_cast<std::size_t>(i)];
        const double xq = x + s;
        double pq;  // psi(xq) - f0(xq)
        if (xq <= -hw || xq >= hw) {
            pq = (xq >= hw ? tail_r : tail_l).p(xq);
        } else {
            pq = interp6(bg.g, phi, xq);
        }
        out[static_cast<std::size_t>(i)] = pq + (softplus(xq) - softplus(x));
    }
    return out;
}

inline std::vector<double> translate_potential(const background& bg,
                                               const std::vector<double>& phi, double s) {
    return translate_potential(bg, phi, s, bg.g);
}

// State of the flow potential sigma_s(phi), sampled on the grid of bgdst
// (same spacing, possibly padded). Building it as build_state(translate(..))
// loses the box-end density: psi'' there is ~ e^{-L} while the translated
// potential carries O(|s|) values, so the value rounding alone puts
// ~ ulp(|s|)/h^2 of noise on the density — orders of magnitude above the
// signal, and the curvature quotient amplifies it further. Here the shift is
// split as  psi(.+s) = f0 + [f0(.+s) - f0] + phi(.+s),  the background part
// of every field is taken in closed form, and only the phi-sized part is
// differenced, which keeps the rounding floor at ulp(phi).
inline toric_state build_translated_state(const background& bg, const std::vector<double>& phi,
                                          double s, const background& bgdst) {
    const double hw = bg.g.half_width;
    const int nd = bgdst.g.n;
    // Reduced part p(x) = psi(x+s) - f0(x+s): equal to phi(x+s) over the data
    // window and to the tail continuation minus f0 beyond it. The tail matches
    // value, slope, curvature and third derivative at the seam, so p is C^3
    // there and the interior stencils cross it cleanly.
    const detail::edge_tail tail_l(bg, phi, false);
    const detail::edge_tail tail_r(bg, phi, true);
    std::vector<double> p(static_cast<std::size_t>(nd));
    std::vector<double> phiw(static_cast<std::size_t>(nd));
    for (int i = 0; i < nd; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double x = bgdst.g.x[k];
        const double xq = x + s;
        if (xq <= -hw || xq >= hw) {
            p[k] = (xq >= hw ? tail_r : tail_l).p(xq);
        } else {
            p[k] = interp6(bg.g, phi, xq);
        }
        phiw[k] = p[k] + (softplus(xq) - softplus(x));
    }
    std::vector<double> pp = d1_4th(bgdst.g, p);
    std::vector<double> ppp = d2_4th(bgdst.g, p);
    toric_state st;
    st.bg = &bgdst;
    st.phi = std::move(phiw);
    st.m.resize(static_cast<std::size_t>(nd));
    st.dens.resize(static_cast<std::size_t>(nd));
    st.log_ratio.resize(static_cast<std::size_t>(nd));
    st.phi_p.resize(static_cast<std::size_t>(nd));
    st.phi_pp.resize(static_cast<std::size_t>(nd));
    st.min_density = std::numeric_limits<double>::infinity();
    int worst = 0;
    for (int i = 0; i < nd; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double xq = bgdst.g.x[k] + s;
        const double mq = sigmoid(xq);
        st.m[k] = mq + pp[k];
        st.dens[k] = mq * (1.0 - mq) + ppp[k];
        // Derived-from-phi fields, kept consistent with the assembled m/dens
        // rather than re-differenced from the shifted values.
        st.phi_p[k] = st.m[k] - bgdst.m0[k];
        st.phi_pp[k] = st.dens[k] - bgdst.f0pp[k];
        if (st.dens[k] < st.min_density) {
            st.min_density = st.dens[k];
            worst = i;
        }
    }
    if (!(st.min_density > 0.0)) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "Kahler condition violated: psi''=%.6g at x=%.6g",
                      st.min_density, bgdst.g.x[static_cast<std::size_t>(worst)]);
        throw kahler_condition_violated(buf);
    }
    const double decay = std::max(std::abs(st.phi_p.front()), std::abs(st.phi_p.back()));
    if (decay > 1e-3) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "state does not satisfy the decay closure: |phi'(+-L)|=%.3g", decay);
        throw boundary_untrusted(buf);
    }
    for (int i = 0; i < nd; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        st.log_ratio[k] = std::log(st.dens[k]) - bgdst.log_f0pp[k];
    }
    return st;
}

}  // namespace wcsck
