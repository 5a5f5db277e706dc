#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "wcsck/background.hpp"
#include "wcsck/errors.hpp"
#include "wcsck/ops.hpp"
#include "wcsck/rng.hpp"
#include "wcsck/state.hpp"
#include "wcsck/weights.hpp"

namespace {

using namespace wcsck;

background& fs1025() {
    static background bg = make_fs_background(make_grid(1025, 12.0));
    return bg;
}

TEST(weights, evaluation_and_derivatives) {
    weight v = weight::exponential(0.3);
    EXPECT_NEAR(v(0.5), std::exp(0.15), 1e-15);
    EXPECT_NEAR(v.d1(0.5), 0.3 * std::exp(0.15), 1e-15);
    EXPECT_NEAR(v.d2(0.5), 0.09 * std::exp(0.15), 1e-15);
    EXPECT_FALSE(v.is_constant());

    weight one = weight::constant(1.0);
    EXPECT_TRUE(one.is_constant());
    EXPECT_DOUBLE_EQ(one(0.77), 1.0);
    EXPECT_DOUBLE_EQ(one.d1(0.77), 0.0);

    weight p = weight::polynomial({2.0, -1.0, 0.5});  // 2 - y + 0.5 y^2
    EXPECT_NEAR(p(0.4), 2.0 - 0.4 + 0.5 * 0.16, 1e-15);
    EXPECT_NEAR(p.d1(0.4), -1.0 + 0.4, 1e-15);
    EXPECT_NEAR(p.d2(0.4), 1.0, 1e-15);

    weight a = weight::affine(1.0, 2.0);
    EXPECT_NEAR(a(0.25), 1.5, 1e-15);
    EXPECT_NEAR(a.d1(0.25), 2.0, 1e-15);
    EXPECT_DOUBLE_EQ(a.d2(0.25), 0.0);
}

TEST(weights, positivity_gate) {
    EXPECT_NO_THROW(require_positive_on(weight::exponential(-2.0), 0.0, 1.0, "v"));
    // 1 - 2y crosses zero inside [0, 1].
    EXPECT_THROW(require_positive_on(weight::affine(1.0, -2.0), 0.0, 1.0, "v"),
                 validation_error);
}

TEST(weights, log_concavity_certificate) {
    log_concavity_report ok = certify_log_concave(weight::exponential(0.7), 0.0, 1.0);
    EXPECT_TRUE(ok.certified);
    EXPECT_LE(ok.worst_value, 1e-12);

    // 1 + y^2 is log-convex on (0, 1): must be refused with a located witness.
    log_concavity_report bad = certify_log_concave(weight::polynomial({1.0, 0.0, 1.0}), 0.0, 1.0);
    EXPECT_FALSE(bad.certified);
    EXPECT_GT(bad.worst_value, 0.0);
    // (log(1+y^2))'' = (2-2y^2)/(1+y^2)^2 peaks at the left end of [0,1].
    EXPECT_GE(bad.worst_y, 0.0);
    EXPECT_LE(bad.worst_y, 1.0);
    EXPECT_NEAR(bad.worst_value, 2.0, 1e-2);
}

TEST(background, closed_forms_are_consistent) {
    const background& bg = fs1025();
    const int n = bg.g.n;
    for (int i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        EXPECT_GT(bg.f0pp[k], 0.0);
        EXPECT_GT(bg.m0[k], 0.0);
        EXPECT_LT(bg.m0[k], 1.0);
        EXPECT_NEAR(bg.r0[k], 2.0 * bg.f0pp[k], 1e-15);
        EXPECT_NEAR(bg.m_ric[k], 2.0 * bg.m0[k] - 1.0, 1e-15);
        EXPECT_NEAR(bg.lap_m0[k], 1.0 - 2.0 * bg.m0[k], 1e-15);
        EXPECT_NEAR(std::exp(bg.log_f0pp[k]), bg.f0pp[k], 1e-12);
        // Round-trip: sigmoid' = sigmoid (1 - sigmoid).
        EXPECT_NEAR(bg.f0pp[k], bg.m0[k] * (1.0 - bg.m0[k]), 1e-15);
    }
    // The box truncates the moment interval by O(e^{-L}) at each end;
    // quadrature agrees with the closed form to that scale, not better.
    EXPECT_NEAR(bg.area_quadrature, bg.area_exact(), 1e-4 * bg.area_exact());
    EXPECT_NEAR(bg.area_quadrature, bg.area_exact() * (1.0 - 2.0 * sigmoid(-12.0)), 1e-8);
}

TEST(state, zero_potential_reproduces_background) {
    const background& bg = fs1025();
    toric_state st = build_state(bg, std::vector<double>(static_cast<std::size_t>(bg.g.n), 0.0));
    for (int i = 0; i < bg.g.n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        EXPECT_DOUBLE_EQ(st.m[k], bg.m0[k]);
        EXPECT_DOUBLE_EQ(st.dens[k], bg.f0pp[k]);
        EXPECT_DOUBLE_EQ(st.log_ratio[k], 0.0);
    }
    EXPECT_GT(st.min_density, 0.0);
}

TEST(state, rejects_bad_input) {
    const background& bg = fs1025();
    EXPECT_THROW(build_state(bg, std::vector<double>(100, 0.0)), grid_mismatch);

    std::vector<double> nan_phi(static_cast<std::size_t>(bg.g.n), 0.0);
    nan_phi[500] = std::nan("");
    EXPECT_THROW(build_state(bg, nan_phi), validation_error);

    // Crushing the density below zero must be caught.
    std::vector<double> crush(static_cast<std::size_t>(bg.g.n));
    for (int i = 0; i < bg.g.n; ++i)
        crush[static_cast<std::size_t>(i)] = -1.2 * bg.f0[static_cast<std::size_t>(i)];
    EXPECT_THROW(build_state(bg, crush), kahler_condition_violated);

    // A potential with slope at the box ends violates the decay closure.
    std::vector<double> tilt(static_cast<std::size_t>(bg.g.n));
    for (int i = 0; i < bg.g.n; ++i)
        tilt[static_cast<std::size_t>(i)] = 0.01 * bg.g.x[static_cast<std::size_t>(i)];
    EXPECT_THROW(build_state(bg, tilt), boundary_untrusted);
}

TEST(state, random_bumps_are_admissible_and_distinct) {
    const background& bg = fs1025();
    rng64 rng(2024);
    std::vector<double> prev;
    for (int k = 0; k < 20; ++k) {
        std::vector<double> phi = random_bumps(bg, rng, 0.05);
        toric_state st = build_state(bg, phi);
        EXPECT_GT(st.min_density, 0.0);
        if (!prev.empty()) EXPECT_GT(max_abs(phi) + max_abs(prev), 0.0);
        prev = phi;
    }
}

TEST(ops, fubini_study_scalar_curvature_is_two) {
    const background& bg = fs1025();
    toric_state st = build_state(bg, std::vector<double>(static_cast<std::size_t>(bg.g.n), 0.0));
    std::vector<double> s = scalar_curvature(st);
    for (double si : s) EXPECT_NEAR(si, 2.0, 1e-12);
    // Constant weight reduces the weighted curvature to the plain one.
    std::vector<double> sv = weighted_scalar_curvature(st, weight::constant(1.0));
    for (int i = 0; i < bg.g.n; ++i)
        EXPECT_DOUBLE_EQ(sv[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(i)]);
}

TEST(ops, weighted_curvature_matches_momentum_profile_oracle) {
    // Independent route: with the metric written through the momentum profile
    // H(y) (= y(1-y) for the round background), the weighted curvature is
    // -(v H)''(y).  For v = e^{0.3 y} that is v (2 - 0.09 H - 0.6 H').
    const background& bg = fs1025();
    toric_state st = build_state(bg, std::vector<double>(static_cast<std::size_t>(bg.g.n), 0.0));
    weight v = weight::exponential(0.3);
    std::vector<double> sv = weighted_scalar_curvature(st, v);
    for (int i = bg.g.trusted_lo(); i <= bg.g.trusted_hi(); ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double y = bg.m0[k];
        const double H = y * (1.0 - y);
        const double Hp = 1.0 - 2.0 * y;
        const double expected = v(y) * (2.0 - 0.09 * H - 0.6 * Hp);
        EXPECT_NEAR(sv[k], expected, 2e-5);
    }
}

TEST(ops, gauss_bonnet_bridge_on_random_states) {
    // Total Riemannian curvature = 2 * int S dvol = 4 pi chi = 8 pi, stated
    // with the complex trace S used everywhere internally.
    const background& bg = fs1025();
    rng64 rng(5);
    for (int k = 0; k < 5; ++k) {
        toric_state st = build_state(bg, random_bumps(bg, rng, 0.05));
        std::vector<double> s = scalar_curvature(st);
        std::vector<double> integrand(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) integrand[i] = s[i] * st.dens[i];
        const double total = 2.0 * two_pi * integrate(bg.g, integrand);
        EXPECT_NEAR(total, 8.0 * M_PI, 8.0 * M_PI * 1e-3);
    }
}

TEST(ops, jxi_sign_and_flip) {
    const background& bg = fs1025();
    toric_state st = build_state(bg, std::vector<double>(static_cast<std::size_t>(bg.g.n), 0.0));
    std::vector<double> a = jxi(st, st.m);
    std::vector<double> b = jxi(st, st.m, /*flip_sign=*/true);
    for (int i = bg.g.trusted_lo(); i <= bg.g.trusted_hi(); ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        // J xi m = -m' = -psi''.
        EXPECT_NEAR(a[k], -st.dens[k], 1e-6);
        EXPECT_NEAR(b[k], st.dens[k], 1e-6);
    }
}

TEST(ops, pairing_fields_close_the_reduction) {
    const background& bg = fs1025();
    rng64 rng(9);
    toric_state st = build_state(bg, random_bumps(bg, rng, 0.05));
    std::vector<double> gm = grad_pair(st, st.m, st.m);
    std::vector<double> xx = xi_pair(st);
    for (int i = bg.g.trusted_lo(); i <= bg.g.trusted_hi(); ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        // |grad m|^2 = <xi, xi> = psi'' on the reduced line.
        EXPECT_NEAR(gm[k], st.dens[k], 1e-5);
        EXPECT_DOUBLE_EQ(xx[k], st.dens[k]);
    }
}

TEST(ops, drift_laplacian_is_divergence_form) {
    const background& bg = fs1025();
    rng64 rng(13);
    toric_state st = build_state(bg, random_bumps(bg, rng, 0.05));
    weight v = weight::exponential(0.4);

    auto bump = [&](double c, double s) {
        std::vector<double> h(static_cast<std::size_t>(bg.g.n));
        for (int i = 0; i < bg.g.n; ++i) {
            const double x = bg.g.x[static_cast<std::size_t>(i)];
            h[static_cast<std::size_t>(i)] = std::exp(-0.5 * (x - c) * (x - c) / (s * s));
        }
        return h;
    };
    std::vector<double> h1 = bump(-1.0, 1.2), h2 = bump(1.5, 0.9);
    std::vector<double> L1 = drift_laplacian(st, v, h1);
    std::vector<double> L2 = drift_laplacian(st, v, h2);
    std::vector<double> d1 = d1_4th(bg.g, h1), d2 = d1_4th(bg.g, h2);

    std::vector<double> a(h1.size()), b(h1.size()), c(h1.size());
    for (std::size_t i = 0; i < h1.size(); ++i) {
        const double mu = v(st.m[i]) * st.dens[i];
        a[i] = L1[i] * h2[i] * mu;
        b[i] = h1[i] * L2[i] * mu;
        c[i] = v(st.m[i]) * d1[i] * d2[i];
    }
    const double s12 = integrate(bg.g, a);
    const double s21 = integrate(bg.g, b);
    const double ref = -integrate(bg.g, c);
    EXPECT_NEAR(s12, s21, 1e-7 * std::max(1.0, std::abs(s12)));
    EXPECT_NEAR(s12, ref, 1e-6 * std::max(1.0, std::abs(ref)));
}

TEST(ops, conservation_volume_and_affine_moments) {
    const background& bg = fs1025();
    weight v = weight::exponential(0.3);
    toric_state base =
        build_state(bg, std::vector<double>(static_cast<std::size_t>(bg.g.n), 0.0));
    const double vol0 = weighted_volume(base, v);

    auto affine_moment = [&](const toric_state& st) {
        std::vector<double> f(st.m.size());
        for (std::size_t i = 0; i < st.m.size(); ++i)
            f[i] = (0.25 + 1.5 * st.m[i]) * v(st.m[i]) * st.dens[i];
        return two_pi * integrate(bg.g, f);
    };
    const double mom0 = affine_moment(base);

    rng64 rng(77);
    for (int k = 0; k < 10; ++k) {
        toric_state st = build_state(bg, random_bumps(bg, rng, 0.05));
        EXPECT_NEAR(weighted_volume(st, v), vol0, 1e-6 * std::abs(vol0));
        EXPECT_NEAR(affine_moment(st), mom0, 1e-6 * std::abs(mom0));
    }
}

TEST(ops, twist_presets_and_normalization) {
    const background& bg = fs1025();
    weight_pair unit{weight::constant(1.0), weight::constant(1.0)};

    twist_form om = twist_scaled_omega(bg, unit, 1.0);
    EXPECT_NEAR(om.theta_bar, 1.0, 1e-9);
    EXPECT_GT(om.eps_floor, 0.0);

    twist_form ric = ricci_form(bg);
    // mean of tr Ric over the round metric: integral = 2 Area / Area.
    EXPECT_NEAR(theta_bar_of(bg, unit, ric), 2.0, 1e-9);

    EXPECT_THROW(twist_scaled_omega(bg, unit, -1.0), validation_error);
}

TEST(ops, balanced_twist_kills_the_startup_mismatch) {
    const background& bg = fs1025();
    weight_pair wp{weight::exponential(0.3), weight::exponential(0.3)};
    twist_form th = twist_balanced(bg, wp);
    toric_state st = build_state(bg, std::vector<double>(static_cast<std::size_t>(bg.g.n), 0.0));
    std::vector<double> tr = tr_v_phi(st, wp.v, th);
    for (int i = 0; i < bg.g.n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        EXPECT_NEAR(tr[k] / wp.w(st.m[k]) - th.theta_bar, 0.0, 1e-11);
    }
    // Reduces to the metric itself for unit weights.
    weight_pair unit{weight::constant(1.0), weight::constant(1.0)};
    twist_form th1 = twist_balanced(bg, unit);
    twist_form om = twist_scaled_omega(bg, unit, 1.0);
    for (int i = 0; i < bg.g.n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        EXPECT_NEAR(th1.e[k], om.e[k], 5e-9);
        EXPECT_NEAR(th1.m[k], om.m[k], 5e-9);
    }
    EXPECT_NEAR(th1.theta_bar, 1.0, 1e-9);
}

TEST(ops, pushforward_boundary_identities) {
    const background& bg = fs1025();
    weight v = weight::exponential(0.3);
    weight_pair wp{v, weight::exponential(0.3)};
    twist_form ric = ricci_form(bg);
    twist_form bal = twist_balanced(bg, wp);

    auto twist_integral = [&](const toric_state& st, const twist_form& th) {
        std::vector<double> tr = tr_v_phi(st, v, th);
        std::vector<double> f(tr.size());
        for (std::size_t i = 0; i < tr.size(); ++i) f[i] = tr[i] * st.dens[i];
        return two_pi * integrate(bg.g, f);
    };

    toric_state base =
        build_state(bg, std::vector<double>(static_cast<std::size_t>(bg.g.n), 0.0));
    const double ric0 = twist_integral(base, ric);
    const double bal0 = twist_integral(base, bal);

    rng64 rng(31);
    for (int k = 0; k < 8; ++k) {
        toric_state st = build_state(bg, random_bumps(bg, rng, 0.05));
        EXPECT_NEAR(twist_integral(st, ric), ric0, 1e-7 * std::abs(ric0));
        EXPECT_NEAR(twist_integral(st, bal), bal0, 1e-5 * std::abs(bal0));

        // Self-trace pushforward: integral of tr_{v,phi}(omega_phi) equals
        // v at the top of the moment interval, by parts in y.
        // Box truncation shows up here at O(e^{-L}) relative.
        twist_form self;
        self.e = st.dens;
        self.m = st.m;
        EXPECT_NEAR(twist_integral(st, self), two_pi * v(bg.y_max),
                    5e-5 * std::abs(two_pi * v(bg.y_max)));
    }
}

TEST(ops, chart_reduction_cross_check) {
    const background& bg = fs1025();
    rng64 rng(19);
    toric_state st = build_state(bg, random_bumps(bg, rng, 0.05));
    reduction_report rep = validate_reduction(st, [](double x) { return std::exp(-x * x / 8.0); });
    EXPECT_TRUE(rep.pass);
    EXPECT_GE(rep.order_laplacian, 1.8);
    EXPECT_GE(rep.order_jxi, 1.8);
    EXPECT_GE(rep.order_moment, 1.8);
}

TEST(state, translation_flow_shifts_the_moment_map) {
    const background& bg = fs1025();
    std::vector<double> zero(static_cast<std::size_t>(bg.g.n), 0.0);
    for (double s : {0.7, -1.3, 4.0}) {
        std::vector<double> phi_s = translate_potential(bg, zero, s);
        toric_state st = build_state(bg, phi_s);
        for (int i = bg.g.trusted_lo(); i <= bg.g.trusted_hi(); ++i) {
            const std::size_t k = static_cast<std::size_t>(i);
            EXPECT_NEAR(st.m[k], sigmoid(bg.g.x[k] + s), 1e-6);
        }
    }
}

}  // namespace
