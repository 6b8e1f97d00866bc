// The sinusoidal threshold system (STS):
//
//   h(x) = beta + (alpha / 2 pi)(1 + sin 2 pi x),  g(x) = 0,
//   up flow dy/dx = gamma, down flow dy/dx = -1,
//
// giving the implicit circle-map lift
//
//   x_{n+1} = x_n + h(x_n) + h(x_{n+1}) / gamma,
//
// always resolved on the first intersection (smallest admissible x_{n+1}).
// The map is continuous and monotone for alpha < min(1, gamma), develops a
// gap with a square-root side for alpha > gamma, and turns non-monotone for
// alpha > 1. Closed forms are provided for the (p,1) saddle-node lines, the
// type I border collision, the type II border-collision system, the
// single/multi-gap wedge edges and the codimension-two crossing.
#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "gapmaps/errors.hpp"
#include "gapmaps/lift.hpp"
#include "gapmaps/numeric.hpp"
#include "gapmaps/threshold.hpp"

namespace gapmaps {

struct StsParams {
    double alpha = 0.4;
    double beta = 0.3;
    double gamma = 0.5;

    double gamma_tilde() const { return gamma / (1.0 + gamma); }

    double h(double x) const {
        return beta + alpha / two_pi * (1.0 + std::sin(two_pi * x));
    }
    double dh(double x) const { return alpha * std::cos(two_pi * x); }
    double h_max() const { return beta + alpha / std::numbers::pi_v<double>; }

    void validate() const {
        if (alpha < 0.0) throw invalid_params("sts: alpha >= 0 required");
        if (beta <= 0.0) throw invalid_params("sts: beta > 0 required");
        if (gamma <= 0.0) throw invalid_params("sts: gamma > 0 required");
    }
};

namespace detail {

// First root of R(u) = gamma (u - launch) - h(u) on (lo, hi]. R is monotone
// between its stationary points, which sit exactly at cos 2 pi u =
// gamma/alpha; splitting there makes the first crossing impossible to skip,
// even when an earlier root pair is arbitrarily thin (near tangencies).
inline double sts_first_root(const StsParams& p, double launch, double lo, double hi) {
    auto R = [&](double u) { return p.gamma * (u - launch) - p.h(u); };
    std::vector<double> cuts{lo};
    if (p.alpha > p.gamma) {
        double ua = std::acos(p.gamma / p.alpha) / two_pi; // in (0, 1/4]
        for (int k = static_cast<int>(std::floor(lo)) - 1;
             k <= static_cast<int>(std::ceil(hi)) + 1; ++k) {
            for (double u : {k - ua, k + ua})
                if (u > lo && u < hi) cuts.push_back(u);
        }
        std::sort(cuts.begin(), cuts.end());
    }
    cuts.push_back(hi);

    double ra = R(cuts.front());
    if (ra > 1e-12)
        throw solver_failure("sts_first_root: root precedes the search window");
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (ra >= 0.0) return a;
        double rb = R(b);
        if (rb >= 0.0) {
            if (rb == 0.0) return b;
            double u = solve_bracketed(R, a, b);
            // Newton polish on the monotone segment
            for (int it = 0; it < 3; ++it) {
                double d = p.gamma - p.dh(u);
                if (std::abs(d) < 1e-12) break;
                double un = u - R(u) / d;
                if (un <= a || un >= b) break;
                u = un;
            }
            return u;
        }
        ra = rb;
    }
    throw solver_failure("sts_first_root: no crossing in the window");
}

} // namespace detail

// Time for the up flow launched at (x, 0) to first reach the upper
// threshold: smallest tau > 0 with gamma tau = h(x + tau). The bracket
// [beta/gamma, (beta + alpha/pi)/gamma] always contains every crossing.
inline double sts_up_time(const StsParams& p, double x) {
    double lo = p.beta / p.gamma;
    if (p.alpha == 0.0) return lo; // constant threshold, exact crossing
    double hi = p.h_max() / p.gamma;
    return detail::sts_first_root(p, x, x + lo * (1.0 - 1e-14), x + hi + 1e-12) - x;
}

// Down map from the upper threshold (unit-speed fall to g = 0).
inline double sts_down_map(const StsParams& p, double x) { return x + p.h(x); }

// Up map from the lower threshold.
inline double sts_up_map(const StsParams& p, double x) { return x + sts_up_time(p, x); }

// One step of the implicit difference equation; the first-intersection
// branch of x + h(x) + h(x_{n+1})/gamma.
inline double sts_step(const StsParams& p, double x) {
    return sts_up_map(p, sts_down_map(p, x));
}

// d x_{n+1} / d x_n = (1 + h'(x_n)) / (1 - h'(x_{n+1}) / gamma).
inline double sts_step_derivative(const StsParams& p, double x, double x_next) {
    return (1.0 + p.dh(x)) / (1.0 - p.dh(x_next) / p.gamma);
}

inline Lift sts_lift(const StsParams& p) {
    p.validate();
    return Lift(
        lift_family::sts, [p](double u) { return sts_step(p, u); },
        [p](double u) { return sts_step_derivative(p, u, sts_step(p, u)); }, "sts");
}

// T_d o T_u: the equivalent map from the lower threshold to itself.
inline Lift sts_lift_lower(const StsParams& p) {
    p.validate();
    return Lift(
        lift_family::sts,
        [p](double u) { return sts_down_map(p, sts_up_map(p, u)); },
        [p](double u) {
            double up = sts_up_map(p, u);
            double tu = p.gamma / (p.gamma - p.dh(up));
            return (1.0 + p.dh(up)) * tu;
        },
        "sts-lower");
}

// gamma -> infinity limit (classic reset): the Arnold-type map x + h(x).
inline Lift sts_arnold_limit_lift(double alpha, double beta) {
    StsParams p{alpha, beta, 1.0};
    p.validate();
    return Lift(
        lift_family::sts, [p](double u) { return u + p.h(u); },
        [p](double u) { return 1.0 + p.dh(u); }, "sts-arnold-limit");
}

// The STS expressed as a generic smooth threshold system.
inline ThresholdSystemSpec sts_threshold_spec(const StsParams& p) {
    p.validate();
    ThresholdSystemSpec spec;
    spec.upper = ThresholdFn::sinusoidal(p.beta, p.alpha);
    spec.lower = ThresholdFn::constant(0.0);
    spec.up_flow = FlowSpec::affine(p.gamma);
    spec.down_flow = FlowSpec::affine(-1.0);
    spec.horizon = std::max(4.0, 2.0 * p.h_max() / p.gamma + 2.0 * p.h_max() + 2.0);
    return spec;
}

// ---------------------------------------------------------------------------
// Gap geometry (alpha > gamma): the visible tangency of the up flow with the
// upper threshold sits at x_b in (3/4, 1], where cos 2 pi x_b = gamma/alpha
// and the threshold curves away from the flow line. Its launch abscissa is
// x0 = x_b - h(x_b)/gamma, and x_c > x_b is the second intersection of the
// same flow line; T_u jumps from x_b to x_c as the launch point crosses x0.

struct StsGapGeometry {
    double x_b = 0.0; // tangency abscissa (square-root side of the gap)
    double x_c = 0.0; // second intersection (finite side)
    double x0 = 0.0;  // T_u gap position on the lower threshold
};

// Second intersection: first root beyond x_b of gamma (x - x0) = h(x). The
// crossing function has a double root at x_b, dips negative, then climbs
// through zero; the offset clears the double root and its rounding noise.
namespace detail {

inline double sts_second_intersection(const StsParams& p, double x_b, double x0) {
    double hi = x0 + p.h_max() / p.gamma + 1e-9;
    return sts_first_root(p, x0, x_b + 1e-5, hi);
}

} // namespace detail

inline std::optional<StsGapGeometry> sts_gap_geometry(const StsParams& p) {
    p.validate();
    if (p.alpha <= p.gamma) return std::nullopt;
    StsGapGeometry g;
    double q = p.gamma / p.alpha;
    g.x_b = 1.0 - std::acos(q) / two_pi; // branch with sin 2 pi x_b <= 0
    g.x0 = g.x_b - p.h(g.x_b) / p.gamma;
    g.x_c = detail::sts_second_intersection(p, g.x_b, g.x0);
    return g;
}

// One gap of the composed map T_u o T_d, attached to a down-map branch.
struct StsGap {
    double x_gap = 0.0;      // jump abscissa of the composed lift, in [0,1)
    double value_sing = 0.0; // one-sided limit on the square-root side
    double value_fin = 0.0;  // one-sided limit on the finite side
    bool singular_left = true; // square-root side approached from the left
    int shift = 0;           // integer branch offset of the limits
};

// All gaps of T_u o T_d in closed-form geometry: the pre-images of x0 under
// T_d, one gap each, with the square-root side on the left exactly when T_d
// increases through the pre-image.
inline std::vector<StsGap> sts_gaps_from_upper(const StsParams& p) {
    std::vector<StsGap> gaps;
    auto geom = sts_gap_geometry(p);
    if (!geom) return gaps;
    auto Td = [&](double x) { return x + p.h(x); };
    // T_d([0,1)) spans [Td(0), Td(0)+1); solve Td(x) = x0 + m on each
    // monotone piece for every m that can land inside.
    std::vector<double> breaks{0.0};
    if (p.alpha > 1.0) {
        double xm = std::acos(-1.0 / p.alpha) / two_pi; // local max of Td
        breaks.push_back(xm);
        breaks.push_back(1.0 - xm); // local min
    }
    breaks.push_back(1.0);
    double td_min = 1e300, td_max = -1e300;
    for (double b : breaks) {
        td_min = std::min(td_min, Td(b));
        td_max = std::max(td_max, Td(b));
    }
    int m_lo = static_cast<int>(std::floor(td_min - geom->x0)) - 1;
    int m_hi = static_cast<int>(std::ceil(td_max - geom->x0)) + 1;
    for (int m = m_lo; m <= m_hi; ++m) {
        double target = geom->x0 + m;
        for (size_t s = 0; s + 1 < breaks.size(); ++s) {
            double a = breaks[s], b = breaks[s + 1];
            double fa = Td(a) - target, fb = Td(b) - target;
            if (fa == 0.0 || (fa < 0.0) == (fb < 0.0)) continue;
            double x_gap = solve_bracketed([&](double x) { return Td(x) - target; }, a, b);
            if (x_gap >= 1.0 || x_gap < 0.0) continue;
            StsGap gap;
            gap.x_gap = x_gap;
            gap.shift = m;
            gap.singular_left = (1.0 + p.dh(x_gap)) > 0.0;
            gap.value_sing = geom->x_b + m;
            gap.value_fin = geom->x_c + m;
            gaps.push_back(gap);
        }
    }
    std::sort(gaps.begin(), gaps.end(),
              [](const StsGap& u, const StsGap& v) { return u.x_gap < v.x_gap; });
    return gaps;
}

// ---------------------------------------------------------------------------
// Closed-form bifurcation structure for (p,1) orbits.

// Maximal existence region of (p,1) solutions in the (beta, alpha) plane:
// bounded by alpha = pi (p gamma~ - beta) (orbit at x = 1/4) and
// beta = p gamma~ (orbit at x = 3/4). Saddle-node loci wherever the map is
// continuous (alpha < gamma).
struct SnLinesP1 {
    double beta_tip = 0.0;      // beta = p gamma~, vertical line (x = 3/4)
    double x_on_sloped = 0.25;
    double x_on_vertical = 0.75;
    double p_gamma_tilde = 0.0;

    double alpha_of_beta(double beta) const {
        return std::numbers::pi_v<double> * (p_gamma_tilde - beta);
    }
    double beta_of_alpha(double alpha) const {
        return p_gamma_tilde - alpha / std::numbers::pi_v<double>;
    }
};

inline SnLinesP1 sn_lines_p1(int p, double gamma) {
    if (p < 1) throw invalid_params("sn_lines_p1: p >= 1 required");
    StsParams q{0.1, 0.1, gamma};
    SnLinesP1 lines;
    lines.p_gamma_tilde = p * q.gamma_tilde();
    lines.beta_tip = lines.p_gamma_tilde;
    return lines;
}

// Type I border collision of the (p,1) orbit: the fixed point sits at the
// square-root endpoint of the gap, i.e. at the tangency itself, which pins
// h(x_b) = p gamma~ and eliminates x_b against cos 2 pi x_b = gamma/alpha:
//
//   alpha = (gamma^2 + 4 pi^2 (p gamma~ - beta)^2) / (4 pi (p gamma~ - beta)),
//
// valid on max(0, p gamma~ - gamma/(2 pi)) <= beta < p gamma~, with minimum
// alpha = gamma at beta = p gamma~ - gamma/(2 pi).
inline double bc_type1_p1(int p, double gamma, double beta) {
    if (p < 1) throw invalid_params("bc_type1_p1: p >= 1 required");
    double gt = gamma / (1.0 + gamma);
    double s = p * gt - beta;
    double pi = std::numbers::pi_v<double>;
    if (!(s > 0.0) || beta < std::max(0.0, p * gt - gamma / two_pi) - 1e-15)
        throw invalid_params("bc_type1_p1: beta outside the border-collision range");
    return (gamma * gamma + 4.0 * pi * pi * s * s) / (4.0 * pi * s);
}

// Inverse branch beta(alpha) of the type I curve (alpha >= gamma); the
// branch with sin 2 pi x_b <= 0, the visible tangency.
inline double bc_type1_beta_of_alpha(int p, double gamma, double alpha) {
    if (alpha < gamma) throw invalid_params("bc_type1_beta_of_alpha: alpha >= gamma required");
    double gt = gamma / (1.0 + gamma);
    double s = (alpha - std::sqrt(alpha * alpha - gamma * gamma)) / two_pi;
    return p * gt - s;
}

// Type II border collision of the (p,1) orbit: the fixed point sits at the
// finite endpoint x_c. System (for alpha > gamma):
//   cos 2 pi x_b = gamma / alpha,
//   sin 2 pi x_c = (2 pi / alpha)(p gamma~ - beta) - 1,
//   sin 2 pi x_c - sin 2 pi x_b = (2 pi gamma / alpha)(x_c - x_b).
// x_b is pinned by the tangency branch, x_c by the chord equation (the
// second intersection of the same flow line), then beta follows from the
// middle equation. At alpha = gamma the two collision types coalesce.
struct BcType2Result {
    double x_b = 0.0;
    double x_c = 0.0;
    double beta = 0.0;
};

inline BcType2Result bc_type2_p1(int p, double gamma, double alpha) {
    if (p < 1) throw invalid_params("bc_type2_p1: p >= 1 required");
    if (alpha < gamma) throw invalid_params("bc_type2_p1: no solution below alpha = gamma");
    double gt = gamma / (1.0 + gamma);
    BcType2Result r;
    if (alpha == gamma) {
        r.x_b = r.x_c = 1.0;
        r.beta = p * gt - gamma / two_pi;
        return r;
    }
    StsParams q{alpha, 1.0, gamma}; // beta cancels in the chord equation
    double qq = gamma / alpha;
    r.x_b = 1.0 - std::acos(qq) / two_pi;
    double x0 = r.x_b - q.h(r.x_b) / gamma;
    r.x_c = detail::sts_second_intersection(q, r.x_b, x0);
    r.beta = p * gt - alpha / two_pi * (1.0 + std::sin(two_pi * r.x_c));
    return r;
}

// Root of 1 + sqrt(1 - q^2) = q (pi/2 + arccos q) in (0,1); the type II
// border collision meets the sloped saddle-node line at alpha = gamma / q*.
inline double qstar() {
    auto f = [](double q) {
        return 1.0 + std::sqrt(1.0 - q * q) -
               q * (std::numbers::pi_v<double> / 2.0 + std::acos(q));
    };
    return solve_bracketed(f, 1e-9, 1.0 - 1e-9, 1e-12);
}

// Existence-region symmetry: a (p,q) orbit at (alpha, beta, gamma) gives a
// (p + m q, q) orbit at beta + m gamma~.
inline StsParams symmetry_translate(int /*p*/, int /*q*/, int m, const StsParams& params) {
    StsParams out = params;
    out.beta = params.beta + m * params.gamma_tilde();
    return out;
}

// ---------------------------------------------------------------------------
// Multi-gap wedge (alpha > max(1, gamma)): between the two beta edges a
// turning point of the down map maps onto the T_u gap position x0 and the
// composed map changes between one and three gaps. Left edge: the local
// maximum of T_d meets the square-root side; right edge: the local minimum
// meets the finite side. Both reduce to closed form through
// T_d(x_t) = x0 + m.

struct WedgeEdges {
    double beta_left = 0.0;
    double beta_right = 0.0;
};

namespace detail {

// beta solving x_t + h(x_t) = x_b - h(x_b)/gamma + m, as a function of the
// beta-free parts; beta enters both h terms linearly.
inline double wedge_edge_beta(const StsParams& base, double x_t, double x_b, int m) {
    double a2p = base.alpha / two_pi;
    double rhs = x_b - x_t + m - a2p * (1.0 + std::sin(two_pi * x_t)) -
                 a2p / base.gamma * (1.0 + std::sin(two_pi * x_b));
    return base.gamma_tilde() * rhs;
}

} // namespace detail

// Edges are returned for the (p,1) tongue: the translate with
// beta in (p gamma~ - gamma~/2, p gamma~ + gamma~/2].
inline WedgeEdges wedge_boundaries(double alpha, double gamma, int p = 1) {
    if (alpha <= 1.0 || alpha <= gamma)
        throw invalid_params("wedge_boundaries: need alpha > max(1, gamma)");
    StsParams base{alpha, 1.0, gamma}; // beta placeholder; cancels below
    double q = gamma / alpha;
    double x_b = 1.0 - std::acos(q) / two_pi;
    double x_M = std::acos(-1.0 / alpha) / two_pi; // local max of T_d
    double x_m = 1.0 - x_M;                        // local min
    double gt = base.gamma_tilde();
    auto pick_translate = [&](double beta0) {
        double target_lo = p * gt - 0.5 * gt;
        double k = std::floor((target_lo - beta0) / gt) + 1.0;
        return beta0 + k * gt;
    };
    WedgeEdges w;
    w.beta_left = pick_translate(detail::wedge_edge_beta(base, x_M, x_b, 0));
    w.beta_right = pick_translate(detail::wedge_edge_beta(base, x_m, x_b, 0));
    return w;
}

// ---------------------------------------------------------------------------
// Codimension-two crossing: simultaneous type I border collision of the
// (1,1) orbit and type II border collision of the (2,1) orbit. With
// c0 = x_b, c1 = x_c and x0 the T_u gap point, the defining conditions
//
//   T_u(x0^-) = c0,  T_u(x0^+) = c1,
//   T_d(c0) = x0 + 1,  T_d(c1) = x0 + 2,  T_d'(c0) T_d'(c1) < 0
//
// collapse to h(x_b) = gamma~ and h(x_c) = 2 gamma~, since a point on the
// tangency flow line returns with T_d(x) - x0 = h(x)/gamma~.

struct Codim2Point {
    double alpha = 0.0;
    double beta = 0.0;
    double c0 = 0.0; // = x_b, square-root endpoint (type I witness)
    double c1 = 0.0; // = x_c, finite endpoint (type II witness)
    double x0 = 0.0;
    double residual_bc1 = 0.0; // T_d(c0) - x0 - 1
    double residual_bc2 = 0.0; // T_d(c1) - x0 - 2
    double td_slope_product = 0.0;
};

inline std::optional<Codim2Point> codim2_locate(double gamma, double alpha_lo = 0.0,
                                                double alpha_hi = 0.0) {
    if (alpha_lo <= 0.0) alpha_lo = std::max(1.0, gamma) * 1.0005;
    if (alpha_hi <= alpha_lo) alpha_hi = std::max(1.0, gamma) * 2.5;
    // On the type I curve of (1,1), h(x_b) = gamma~ holds identically;
    // scan alpha for a sign change of h(x_c) - 2 gamma~.
    auto mismatch = [&](double alpha) {
        StsParams p{alpha, bc_type1_beta_of_alpha(1, gamma, alpha), gamma};
        auto geom = sts_gap_geometry(p);
        if (!geom) throw solver_failure("codim2: no gap on scan point");
        return p.h(geom->x_c) - 2.0 * p.gamma_tilde();
    };
    auto assemble = [&](double alpha_root) {
        Codim2Point pt;
        pt.alpha = alpha_root;
        pt.beta = bc_type1_beta_of_alpha(1, gamma, alpha_root);
        StsParams p{pt.alpha, pt.beta, gamma};
        auto geom = sts_gap_geometry(p);
        pt.c0 = geom->x_b;
        pt.c1 = geom->x_c;
        pt.x0 = geom->x0;
        auto Td = [&](double x) { return x + p.h(x); };
        pt.residual_bc1 = Td(pt.c0) - pt.x0 - 1.0;
        pt.residual_bc2 = Td(pt.c1) - pt.x0 - 2.0;
        pt.td_slope_product = (1.0 + p.dh(pt.c0)) * (1.0 + p.dh(pt.c1));
        return pt;
    };

    const int n = 400;
    double a_prev = alpha_lo, f_prev = mismatch(a_prev);
    for (int i = 1; i <= n; ++i) {
        double a = alpha_lo + (alpha_hi - alpha_lo) * i / n;
        double f = mismatch(a);
        if ((f_prev < 0.0) != (f < 0.0)) {
            Codim2Point pt = assemble(solve_bracketed(mismatch, a_prev, a));
            // keep scanning past crossings that fail the opposite-slope
            // requirement; they are not simultaneous border collisions
            if (pt.td_slope_product < 0.0) return pt;
        }
        a_prev = a;
        f_prev = f;
    }
    return std::nullopt;
}

} // namespace gapmaps
