#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "wcsck/errors.hpp"

namespace wcsck {

enum class weight_kind { constant, exponential, affine, polynomial };

// Positive weight function on the moment polytope coordinate y, with the
// derivatives the operators need. Presets only — arbitrary callables would
// break scenario hashing and determinism.
struct weight {
    weight_kind kind = weight_kind::constant;
    std::vector<double> c;  // parameters, meaning depends on kind

    double operator()(double y) const {
        switch (kind) {
            case weight_kind::constant: return c[0];
            case weight_kind::exponential: return std::exp(c[0] * y);
            case weight_kind::affine: return c[0] + c[1] * y;
            case weight_kind::polynomial: {
                double acc = 0.0;
                for (std::size_t j = c.size(); j-- > 0;) acc = acc * y + c[j];
                return acc;
            }
        }
        return 0.0;
    }

    double d1(double y) const {
        switch (kind) {
            case weight_kind::constant: return 0.0;
            case weight_kind::exponential: return c[0] * std::exp(c[0] * y);
            case weight_kind::affine: return c[1];
            case weight_kind::polynomial: {
                double acc = 0.0;
                for (std::size_t j = c.size(); j-- > 1;)
                    acc = acc * y + static_cast<double>(j) * c[j];
                return acc;
            }
        }
        return 0.0;
    }

    double d2(double y) const {
        switch (kind) {
            case weight_kind::constant: return 0.0;
            case weight_kind::exponential: return c[0] * c[0] * std::exp(c[0] * y);
            case weight_kind::affine: return 0.0;
            case weight_kind::polynomial: {
                double acc = 0.0;
                for (std::size_t j = c.size(); j-- > 2;)
                    acc = acc * y + static_cast<double>(j * (j - 1)) * c[j];
                return acc;
            }
        }
        return 0.0;
    }

    bool is_constant() const {
        return kind == weight_kind::constant ||
               (kind == weight_kind::affine && c[1] == 0.0) ||
               (kind == weight_kind::exponential && c[0] == 0.0);
    }

    std::string describe() const {
        char buf[128];
        switch (kind) {
            case weight_kind::constant:
                std::snprintf(buf, sizeof buf, "constant %.17g", c[0]);
                break;
            case weight_kind::exponential:
                std::snprintf(buf, sizeof buf, "exponential %.17g", c[0]);
                break;
            case weight_kind::affine:
                std::snprintf(buf, sizeof buf, "affine %.17g %.17g", c[0], c[1]);
                break;
            case weight_kind::polynomial: {
                std::string s = "polynomial";
                for (double cj : c) {
                    std::snprintf(buf, sizeof buf, " %.17g", cj);
                    s += buf;
                }
                return s;
            }
        }
        return buf;
    }

    static weight constant(double value = 1.0) { return {weight_kind::constant, {value}}; }
    static weight exponential(double a) { return {weight_kind::exponential, {a}}; }
    static weight affine(double a0, double a1) { return {weight_kind::affine, {a0, a1}}; }
    static weight polynomial(std::vector<double> coeffs) {
        return {weight_kind::polynomial, std::move(coeffs)};
    }
};

inline void require_positive_on(const weight& v, double y0, double y1, const char* name) {
    const int samples = 4001;
    for (int i = 0; i < samples; ++i) {
        const double y = y0 + (y1 - y0) * static_cast<double>(i) / (samples - 1);
        if (!(v(y) > 0.0)) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "weight %s not positive at y=%.17g (value %.17g)",
                          name, y, v(y));
            throw validation_error(buf);
        }
    }
}

struct log_concavity_report {
    bool certified = false;
    double worst_value = 0.0;  // max of (log v)'' over the probe grid
    double worst_y = 0.0;
};

// (log v)'' = v''/v - (v'/v)^2 must be <= 0 on the polytope. Exponential
// weights give an exact algebraic zero; anything strictly positive yields a
// located counterexample instead of a certificate.
inline log_concavity_report certify_log_concave(const weight& v, double y0, double y1,
                                                int samples = 4001) {
    log_concavity_report rep;
    rep.worst_value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double y = y0 + (y1 - y0) * static_cast<double>(i) / (samples - 1);
        const double val = v(y);
        const double q = v.d2(y) / val - (v.d1(y) / val) * (v.d1(y) / val);
        if (q > rep.worst_value) {
            rep.worst_value = q;
            rep.worst_y = y;
        }
    }
    rep.certified = rep.worst_value <= 1e-12;
    return rep;
}

struct weight_pair {
    weight v;
    weight w;
};

}  // namespace wcsck
