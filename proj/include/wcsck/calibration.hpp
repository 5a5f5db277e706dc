#pragma once

#include <cstdlib>
#include <cstdio>
#include <string>

namespace wcsck {

// Leading constants C for mesh-error acceptance bounds of the form C * h^2.
// Values are measured once on a fixed probe configuration (moderately bumped
// potential, exponential weights, coarse N=257 grid), inflated by a safety
// factor, floored, and frozen here.  Environment variables WCSCK_C_<NAME>
// override individual entries at runtime; the manifest records what was in
// force for a run.
struct calibration {
    double c_linearized_ma = 10.0;
    double c_grad_logv = 10.0;
    double c_lap_logv = 10.0;
    double c_jxi_logvol = 10.0;
    double c_drift_f = 10.0;
    double c_laplace_fprime = 10.0;
    double c_coupled = 10.0;
    double c_mu = 10.0;
    double c_csck_residual = 10.0;  // flatness of S_v - w*l at solved states
    double c_reduction = 10.0;      // chart-vs-reduction cross-check

    static constexpr double safety_factor = 5.0;
    static constexpr double floor = 1e-4;
};

namespace detail {
inline double env_or(const char* name, double fallback) {
    const char* s = std::getenv(name);
    if (!s || !*s) return fallback;
    char* end = nullptr;
    const double parsed = std::strtod(s, &end);
    if (end == s) return fallback;
    return parsed;
}
}  // namespace detail

// The constants actually used by checks: frozen defaults unless overridden
// through the environment.
inline calibration calibration_in_force() {
    calibration c;
    c.c_linearized_ma = detail::env_or("WCSCK_C_LINEARIZED_MA", c.c_linearized_ma);
    c.c_grad_logv = detail::env_or("WCSCK_C_GRAD_LOGV", c.c_grad_logv);
    c.c_lap_logv = detail::env_or("WCSCK_C_LAP_LOGV", c.c_lap_logv);
    c.c_jxi_logvol = detail::env_or("WCSCK_C_JXI_LOGVOL", c.c_jxi_logvol);
    c.c_drift_f = detail::env_or("WCSCK_C_DRIFT_F", c.c_drift_f);
    c.c_laplace_fprime = detail::env_or("WCSCK_C_LAPLACE_FPRIME", c.c_laplace_fprime);
    c.c_coupled = detail::env_or("WCSCK_C_COUPLED", c.c_coupled);
    c.c_mu = detail::env_or("WCSCK_C_MU", c.c_mu);
    c.c_csck_residual = detail::env_or("WCSCK_C_CSCK_RESIDUAL", c.c_csck_residual);
    c.c_reduction = detail::env_or("WCSCK_C_REDUCTION", c.c_reduction);
    return c;
}

inline std::string calibration_json(const calibration& c) {
    char buf[1024];
    std::snprintf(buf, sizeof buf,
                  "{\"c_linearized_ma\":%.17g,\"c_grad_logv\":%.17g,\"c_lap_logv\":%.17g,"
                  "\"c_jxi_logvol\":%.17g,\"c_drift_f\":%.17g,\"c_laplace_fprime\":%.17g,"
                  "\"c_coupled\":%.17g,\"c_mu\":%.17g,\"c_csck_residual\":%.17g,"
                  "\"c_reduction\":%.17g,\"safety_factor\":%.17g,\"floor\":%.17g}",
                  c.c_linearized_ma, c.c_grad_logv, c.c_lap_logv, c.c_jxi_logvol, c.c_drift_f,
                  c.c_laplace_fprime, c.c_coupled, c.c_mu, c.c_csck_residual, c.c_reduction,
                  calibration::safety_factor, calibration::floor);
    return std::string(buf);
}

// Conventions pinned by the 1D reduction; printed into run manifests so a
// reader can tell which normalizations produced the numbers.
struct conventions {
    // Complex trace is used throughout; multiply by this to get the
    // Riemannian scalar curvature (Gauss-Bonnet bookkeeping).
    static constexpr double riemannian_scalar_factor = 2.0;
    // Generator is half the angle field: xi = (1/2) d/dtheta, so x = 2s in
    // the cylinder chart and J xi h = -h' on the reduced line.
    static constexpr double xi_angle_fraction = 0.5;
    // Moment normalization: iota_xi omega = -(1/2) dm, image [0, 1].
    static constexpr double moment_min = 0.0;
    static constexpr double moment_max = 1.0;
};

inline std::string conventions_json() {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "{\"riemannian_scalar_factor\":%.17g,\"xi_angle_fraction\":%.17g,"
                  "\"moment_min\":%.17g,\"moment_max\":%.17g,"
                  "\"trace_convention\":\"complex\",\"jxi_sign\":\"J xi h = -dh/dx\"}",
                  conventions::riemannian_scalar_factor, conventions::xi_angle_fraction,
                  conventions::moment_min, conventions::moment_max);
    return std::string(buf);
}

}  // namespace wcsck
