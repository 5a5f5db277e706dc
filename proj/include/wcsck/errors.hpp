#pragma once

#include <stdexcept>
#include <string>

namespace wcsck {

// Base class for every failure the library raises on purpose. Each concrete
// error names the contract that was violated, so callers (and the CLI) can
// map failures to exit codes without string matching.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Geometry / state construction --------------------------------------------

struct kahler_condition_violated : error {
    explicit kahler_condition_violated(const std::string& what) : error(what) {}
};

struct grid_mismatch : error {
    explicit grid_mismatch(const std::string& what) : error(what) {}
};

struct boundary_untrusted : error {
    explicit boundary_untrusted(const std::string& what) : error(what) {}
};

struct convention_mismatch : error {
    explicit convention_mismatch(const std::string& what) : error(what) {}
};

// Functionals ----------------------------------------------------------------

struct path_leaves_kahler_cone : error {
    explicit path_leaves_kahler_cone(const std::string& what) : error(what) {}
};

struct minimizer_at_boundary : error {
    explicit minimizer_at_boundary(const std::string& what) : error(what) {}
};

struct degenerate_gram : error {
    explicit degenerate_gram(const std::string& what) : error(what) {}
};

struct legendre_failure : error {
    explicit legendre_failure(const std::string& what) : error(what) {}
};

// Solver ----------------------------------------------------------------------

struct singular_linearization : error {
    explicit singular_linearization(const std::string& what) : error(what) {}
};

struct damping_failed : error {
    explicit damping_failed(const std::string& what) : error(what) {}
};

struct eigenvalue_non_negative : error {
    explicit eigenvalue_non_negative(const std::string& what) : error(what) {}
};

struct step_underflow : error {
    explicit step_underflow(const std::string& what) : error(what) {}
};

struct assembly_mismatch : error {
    explicit assembly_mismatch(const std::string& what) : error(what) {}
};

// Harness ----------------------------------------------------------------------

struct parse_error : error {
    explicit parse_error(const std::string& what) : error(what) {}
};

struct validation_error : error {
    explicit validation_error(const std::string& what) : error(what) {}
};

struct missing_trace : error {
    explicit missing_trace(const std::string& what) : error(what) {}
};

}  // namespace wcsck
