// The canonical square-root-singularity family
//
//   F_n(x) = a + b (1 - c1 sqrt(1-x) + (c1-1) sqrt(1-x)^n),  x in [0,1),
//   c1 = (n b - 2 c) / ((n-1) b),
//
// extended by F(x+m) = F(x)+m. F_n(0) = a, F_n'(0) = c, lim_{x->1} = a+b;
// b in (0,1) puts a gap at integer x with the square-root side at 1^-.
// The n = 2 member has closed-form fixed-point bifurcations.
#pragma once

#include <cmath>
#include <limits>

#include "gapmaps/errors.hpp"
#include "gapmaps/lift.hpp"

namespace gapmaps {

struct CanonicalParams {
    int n = 2;
    double a = 0.0;
    double b = 0.5;
    double c = 0.0;

    double c1() const { return (n * b - 2.0 * c) / ((n - 1) * b); }

    void validate(bool allow_degenerate = false) const {
        if (n < 2) throw invalid_params("canonical: n >= 2 required");
        if (!(b > 0.0 && b < 1.0)) throw invalid_params("canonical: b in (0,1) required");
        if (c < 0.0) throw invalid_params("canonical: c >= 0 required");
        double lim = 0.5 * n * b;
        if (allow_degenerate ? (c > lim) : (c >= lim))
            throw invalid_params("canonical: c < n b / 2 required for monotonicity");
    }
};

namespace detail {

inline double canonical_branch(const CanonicalParams& p, double x) {
    double t = std::sqrt(1.0 - x); // x in [0,1)
    return p.a + p.b * (1.0 - p.c1() * t + (p.c1() - 1.0) * std::pow(t, p.n));
}

inline double canonical_branch_derivative(const CanonicalParams& p, double x) {
    double t = std::sqrt(1.0 - x);
    if (t == 0.0) return std::numeric_limits<double>::infinity();
    double c1 = p.c1();
    return p.b / (2.0 * t) * (c1 + (1.0 - c1) * p.n * std::pow(t, p.n - 1));
}

} // namespace detail

// allow_degenerate admits c = n b / 2 (c1 = 0), where the square-root
// singularity disappears; useful as a control case.
inline Lift make_canonical(const CanonicalParams& p, bool allow_degenerate = false) {
    p.validate(allow_degenerate);
    return Lift(
        lift_family::canonical,
        [p](double u) { return detail::canonical_branch(p, u); },
        [p](double u) { return detail::canonical_branch_derivative(p, u); },
        "canonical");
}

// Fixed-point bifurcation structure of F_2 for 0 <= c < b < 1: border
// collisions at a = 0 (creates the stable point) and a = 1-b (creates the
// unstable one), saddle-node at a = 1 - b + (b-c)^2 / (1 + b - 2c).
struct F2Structure {
    double bc_stable_a = 0.0;
    double bc_unstable_a = 0.0;
    double sn_a = 0.0;
};

inline F2Structure f2_bifurcation_structure(double b, double c) {
    if (!(b > 0.0 && b < 1.0) || c < 0.0 || c >= b)
        throw invalid_params("f2_bifurcation_structure: need 0 <= c < b < 1");
    F2Structure s;
    s.bc_stable_a = 0.0;
    s.bc_unstable_a = 1.0 - b;
    s.sn_a = 1.0 - b + (b - c) * (b - c) / (1.0 + b - 2.0 * c);
    return s;
}

// Partial derivatives of F_n with respect to its parameters; all are
// nonnegative on [0,1], which makes the rotation number monotone in each.
struct CanonicalPartials {
    double dF_da = 1.0;
    double dF_db = 0.0;
    double dF_dc = 0.0;
};

inline CanonicalPartials parameter_monotonicity_check(const CanonicalParams& p, double x) {
    double t = std::sqrt(1.0 - wrap01(x));
    CanonicalPartials out;
    out.dF_da = 1.0;
    double geom = 0.0; // sum_{j=0}^{n-1} t^j
    double tj = 1.0;
    for (int j = 0; j < p.n; ++j) {
        geom += tj;
        tj *= t;
    }
    out.dF_db = (1.0 - t) / (p.n - 1) * (p.n - geom);
    out.dF_dc = 2.0 * t / (p.n - 1) * (1.0 - std::pow(t, p.n - 1));
    return out;
}

} // namespace gapmaps
