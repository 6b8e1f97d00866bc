// Smooth threshold systems: a strictly increasing up flow and strictly
// decreasing down flow bouncing between two period-one thresholds g < h.
// First intersections of the flows with the thresholds induce the down map
// T_d (upper -> lower), the up map T_u (lower -> upper) and the circle map
// T_u o T_d. Tangencies of the up flow with the upper threshold create gaps;
// tangencies of the down flow with the upper threshold create turning
// points. Both are detected here through the crossing functions
//
//   W(tau, x)  = phi_tau(g(x)) - h(x + tau)     (up crossings)
//   W~(tau, x) = psi_{-tau}(g(x)) - h(x - tau)  (down-map pre-images)
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "gapmaps/errors.hpp"
#include "gapmaps/lift.hpp"
#include "gapmaps/numeric.hpp"

namespace gapmaps {

// Closed-form flow families; tau is the elapsed independent variable.
struct FlowSpec {
    enum class family { affine, exp_relax };
    family kind = family::affine;
    double rate = 1.0;   // affine: dy/dx; exp_relax: decay rate (> 0)
    double target = 0.0; // exp_relax asymptote

    double eval(double tau, double y0) const {
        switch (kind) {
            case family::affine:
                return y0 + rate * tau;
            case family::exp_relax:
                return target + (y0 - target) * std::exp(-rate * tau);
        }
        return y0;
    }

    static FlowSpec affine(double rate) { return {family::affine, rate, 0.0}; }
    static FlowSpec exp_relax(double target, double rate) {
        if (rate <= 0.0) throw invalid_params("exp_relax: rate > 0 required");
        return {family::exp_relax, rate, target};
    }
};

// Period-one threshold; derivative falls back to central differences when
// no closed form is supplied.
struct ThresholdFn {
    std::function<double(double)> f;
    std::function<double(double)> df;

    double operator()(double x) const { return f(x); }
    double derivative(double x) const {
        if (df) return df(x);
        return fd_derivative(f, x, 1e-6);
    }

    static ThresholdFn constant(double v) {
        return {[v](double) { return v; }, [](double) { return 0.0; }};
    }
    // beta + (alpha / 2 pi) (1 + sin 2 pi x)
    static ThresholdFn sinusoidal(double beta, double alpha) {
        return {[=](double x) { return beta + alpha / two_pi * (1.0 + std::sin(two_pi * x)); },
                [=](double x) { return alpha * std::cos(two_pi * x); }};
    }
};

struct ThresholdSystemSpec {
    ThresholdFn upper;      // h
    ThresholdFn lower;      // g
    FlowSpec up_flow;       // phi, strictly increasing
    FlowSpec down_flow;     // psi, strictly decreasing
    double horizon = 10.0;  // crossing-search window, in threshold periods

    void validate() const {
        for (int i = 0; i < 256; ++i) {
            double x = i / 256.0;
            if (!(lower(x) < upper(x)))
                throw invalid_params("threshold spec: g(x) < h(x) violated");
        }
        if (up_flow.kind == FlowSpec::family::affine && up_flow.rate <= 0.0)
            throw invalid_params("threshold spec: up flow must increase");
        if (down_flow.kind == FlowSpec::family::affine && down_flow.rate >= 0.0)
            throw invalid_params("threshold spec: down flow must decrease");
    }

    // Crossing function of the up flow launched from the lower threshold.
    double W(double tau, double x) const {
        return up_flow.eval(tau, lower(x)) - upper(x + tau);
    }
    // Backward-down-flow pre-image function.
    double W_back(double tau, double x) const {
        return down_flow.eval(-tau, lower(x)) - upper(x - tau);
    }

    // Sampled threshold envelope, used to bound crossing-time searches.
    struct Bounds {
        double h_min, h_max, g_min, g_max;
    };
    Bounds sample_bounds() const {
        Bounds b{1e300, -1e300, 1e300, -1e300};
        for (int i = 0; i < 512; ++i) {
            double x = i / 512.0;
            double hv = upper(x), gv = lower(x);
            b.h_min = std::min(b.h_min, hv);
            b.h_max = std::max(b.h_max, hv);
            b.g_min = std::min(b.g_min, gv);
            b.g_max = std::max(b.g_max, gv);
        }
        return b;
    }

    // Latest time by which the up flow from any lower-threshold point must
    // have crossed h, when such a bound exists; otherwise the horizon.
    double up_crossing_bound(const Bounds& b) const {
        switch (up_flow.kind) {
            case FlowSpec::family::affine:
                return std::min(horizon, (b.h_max - b.g_min) / up_flow.rate + 0.1);
            case FlowSpec::family::exp_relax:
                if (up_flow.target > b.h_max + 1e-12) {
                    double num = up_flow.target - b.g_min;
                    double den = up_flow.target - b.h_max;
                    return std::min(horizon, std::log(num / den) / up_flow.rate + 0.1);
                }
                return horizon;
        }
        return horizon;
    }

    double down_crossing_bound(const Bounds& b) const {
        switch (down_flow.kind) {
            case FlowSpec::family::affine:
                return std::min(horizon, (b.h_max - b.g_min) / (-down_flow.rate) + 0.1);
            case FlowSpec::family::exp_relax:
                if (down_flow.target < b.g_min - 1e-12) {
                    double num = b.h_max - down_flow.target;
                    double den = b.g_min - down_flow.target;
                    return std::min(horizon, std::log(num / den) / down_flow.rate + 0.1);
                }
                return horizon;
        }
        return horizon;
    }
};

struct IntersectionResult {
    double tau = 0.0;
    double x_hit = 0.0;
    enum class crossing { simple, tangent } multiplicity = crossing::simple;
};

// Smallest tau > 0 with W(tau, x) = 0: the first intersection of the up
// flow from (x, g(x)) with the upper threshold. The scan step halves until
// two sweeps agree, so thin first crossings near a fold are not skipped;
// grazing contact is reported as a tangent crossing. tau_hi <= 0 derives
// the search window from the spec.
inline IntersectionResult first_intersection_up(const ThresholdSystemSpec& spec, double x,
                                                double curv_hint = 0.0,
                                                double tau_hi = 0.0) {
    if (tau_hi <= 0.0) tau_hi = spec.up_crossing_bound(spec.sample_bounds());
    auto W = [&](double tau) { return spec.W(tau, x); };
    double curv = curv_hint > 0.0 ? curv_hint : sampled_curvature_bound(W, 0.0, tau_hi);
    bool grazed = false;
    std::optional<double> tau = first_crossing_guarded(W, 0.0, tau_hi, curv, &grazed);
    if (!tau && tau_hi < spec.horizon)
        tau = first_crossing_guarded(W, tau_hi, spec.horizon, curv, &grazed);
    if (!tau)
        throw no_intersection("first_intersection_up: no crossing within horizon");
    IntersectionResult r;
    r.tau = *tau;
    r.x_hit = x + *tau;
    r.multiplicity = grazed ? IntersectionResult::crossing::tangent
                            : IntersectionResult::crossing::simple;
    return r;
}

// Down-flow counterpart from (x, h(x)) to the lower threshold.
inline IntersectionResult first_intersection_down(const ThresholdSystemSpec& spec, double x,
                                                  double curv_hint = 0.0,
                                                  double tau_hi = 0.0) {
    if (tau_hi <= 0.0) tau_hi = spec.down_crossing_bound(spec.sample_bounds());
    // negate so the pre-crossing sign convention matches the up case
    auto Wd = [&](double tau) {
        return -(spec.down_flow.eval(tau, spec.upper(x)) - spec.lower(x + tau));
    };
    double curv = curv_hint > 0.0 ? curv_hint : sampled_curvature_bound(Wd, 0.0, tau_hi);
    bool grazed = false;
    std::optional<double> tau = first_crossing_guarded(Wd, 0.0, tau_hi, curv, &grazed);
    if (!tau && tau_hi < spec.horizon)
        tau = first_crossing_guarded(Wd, tau_hi, spec.horizon, curv, &grazed);
    if (!tau)
        throw no_intersection("first_intersection_down: no crossing within horizon");
    IntersectionResult r;
    r.tau = *tau;
    r.x_hit = x + *tau;
    r.multiplicity = grazed ? IntersectionResult::crossing::tangent
                            : IntersectionResult::crossing::simple;
    return r;
}

inline double down_map(const ThresholdSystemSpec& spec, double x) {
    return first_intersection_down(spec, x).x_hit;
}

inline double up_map(const ThresholdSystemSpec& spec, double x) {
    return first_intersection_up(spec, x).x_hit;
}

namespace detail {

struct crossing_hints {
    double up_hi, dn_hi, up_curv, dn_curv;
};

inline crossing_hints make_hints(const ThresholdSystemSpec& spec) {
    auto b = spec.sample_bounds();
    crossing_hints h{spec.up_crossing_bound(b), spec.down_crossing_bound(b), 0.0, 0.0};
    for (int i = 0; i < 8; ++i) {
        double xs = i / 8.0;
        auto Wu = [&](double t) { return spec.W(t, xs); };
        auto Wd = [&](double t) {
            return -(spec.down_flow.eval(t, spec.upper(xs)) - spec.lower(xs + t));
        };
        h.up_curv = std::max(h.up_curv, sampled_curvature_bound(Wu, 0.0, h.up_hi));
        h.dn_curv = std::max(h.dn_curv, sampled_curvature_bound(Wd, 0.0, h.dn_hi));
    }
    return h;
}

} // namespace detail

// Lift of the circle map T_u o T_d (upper threshold to upper threshold).
inline Lift threshold_lift(const ThresholdSystemSpec& spec) {
    spec.validate();
    detail::crossing_hints h = detail::make_hints(spec);
    return Lift(
        lift_family::threshold_derived,
        [spec, h](double u) {
            double mid = first_intersection_down(spec, u, h.dn_curv, h.dn_hi).x_hit;
            return first_intersection_up(spec, mid, h.up_curv, h.up_hi).x_hit;
        },
        nullptr, "threshold");
}

// Lift of T_d o T_u (lower threshold to lower threshold); same rotation
// number and bifurcation structure as the composition above.
inline Lift threshold_lift_lower(const ThresholdSystemSpec& spec) {
    spec.validate();
    detail::crossing_hints h = detail::make_hints(spec);
    return Lift(
        lift_family::threshold_derived,
        [spec, h](double u) {
            double mid = first_intersection_up(spec, u, h.up_curv, h.up_hi).x_hit;
            return first_intersection_down(spec, mid, h.dn_curv, h.dn_hi).x_hit;
        },
        nullptr, "threshold-lower");
}

struct TangencyPoint {
    double x = 0.0;   // launch abscissa on the lower threshold
    double tau = 0.0; // contact time; tangency sits at x + tau
    enum class fold { visible, invisible, cusp } kind = fold::visible;

    double x_contact() const { return x + tau; }
};

namespace detail {

// W partials by central differences, step 1e-5 scaled by argument size.
struct WDerivs {
    double w, w1, w2, w11;
};

inline WDerivs w_partials(const ThresholdSystemSpec& spec, double tau, double x) {
    double ht = 1e-5 * std::max(1.0, std::abs(tau));
    double hx = 1e-5 * std::max(1.0, std::abs(x));
    WDerivs d;
    d.w = spec.W(tau, x);
    d.w1 = (spec.W(tau + ht, x) - spec.W(tau - ht, x)) / (2.0 * ht);
    d.w2 = (spec.W(tau, x + hx) - spec.W(tau, x - hx)) / (2.0 * hx);
    d.w11 = (spec.W(tau + ht, x) - 2.0 * d.w + spec.W(tau - ht, x)) / (ht * ht);
    return d;
}

// Damped Gauss-Newton on (W, W1) = 0. Levenberg damping keeps the step
// usable when W11 vanishes (cusp-degenerate tangencies), where convergence
// falls back to a linear rate.
inline bool refine_tangency(const ThresholdSystemSpec& spec, double& tau, double& x) {
    double lambda = 1e-9;
    for (int it = 0; it < 100; ++it) {
        WDerivs d = w_partials(spec, tau, x);
        double ht = 1e-5 * std::max(1.0, std::abs(tau));
        double hx = 1e-5 * std::max(1.0, std::abs(x));
        double w12 = (spec.W(tau + ht, x + hx) - spec.W(tau + ht, x - hx) -
                      spec.W(tau - ht, x + hx) + spec.W(tau - ht, x - hx)) /
                     (4.0 * ht * hx);
        // J = [[w1, w2], [w11, w12]], residual r = (w, w1)
        double a11 = d.w1, a12 = d.w2, a21 = d.w11, a22 = w12;
        double g1 = a11 * d.w + a21 * d.w1;
        double g2 = a12 * d.w + a22 * d.w1;
        double m11 = a11 * a11 + a21 * a21 + lambda;
        double m12 = a11 * a12 + a21 * a22;
        double m22 = a12 * a12 + a22 * a22 + lambda;
        double det = m11 * m22 - m12 * m12;
        if (det == 0.0 || !std::isfinite(det)) return false;
        double dtau = (m22 * g1 - m12 * g2) / det;
        double dx = (m11 * g2 - m12 * g1) / det;
        tau -= dtau;
        x -= dx;
        if (std::abs(dtau) + std::abs(dx) < 1e-14) break;
    }
    WDerivs d = w_partials(spec, tau, x);
    return std::abs(d.w) < 1e-10 && std::abs(d.w1) < 1e-6 && tau > 1e-9;
}

} // namespace detail

// All tangencies of the up flow with the upper threshold over one period of
// launch abscissae. Seeds are extrema of W along tau with small |W| - both
// W1 sign changes and near-zero minima of |W1|, the latter catching the
// cusp-degenerate case where W1 has a double root.
inline std::vector<TangencyPoint> detect_tangencies(const ThresholdSystemSpec& spec,
                                                    double cusp_tol = 1e-3) {
    std::vector<TangencyPoint> out;
    auto bounds = spec.sample_bounds();
    double tau_hi = spec.up_crossing_bound(bounds);
    const int nx = 96, ntau = 768;
    auto try_seed = [&](double tau_c, double x_c) {
        if (std::abs(spec.W(tau_c, x_c)) > 0.2) return;
        if (!detail::refine_tangency(spec, tau_c, x_c)) return;
        for (const auto& tp : out)
            if (circle_dist(tp.x, x_c) < 1e-6 && std::abs(tp.tau - tau_c) < 1e-6) return;
        TangencyPoint tp;
        tp.x = wrap01(x_c);
        tp.tau = tau_c;
        detail::WDerivs d = detail::w_partials(spec, tau_c, x_c);
        if (std::abs(d.w11) < cusp_tol) {
            tp.kind = TangencyPoint::fold::cusp;
        } else {
            auto W = [&](double tt) { return spec.W(tt, tp.x); };
            double curv = sampled_curvature_bound(W, 0.0, tau_hi);
            bool grazed = false;
            std::optional<double> first =
                first_crossing_guarded(W, 0.0, spec.horizon, curv, &grazed);
            // a graze is localised only to the sqrt(graze_tol/curv) scale
            bool is_first = first && *first >= tau_c - 1e-4;
            tp.kind = is_first ? TangencyPoint::fold::visible
                               : TangencyPoint::fold::invisible;
        }
        out.push_back(tp);
    };

    for (int ix = 0; ix < nx; ++ix) {
        double x = static_cast<double>(ix) / nx;
        double step = tau_hi / ntau;
        double w1_a = 0.0, w1_b = detail::w_partials(spec, 1e-9, x).w1, w1_c = 0.0;
        for (int it = 1; it <= ntau; ++it) {
            double t = step * it;
            w1_c = detail::w_partials(spec, t, x).w1;
            if ((w1_b < 0.0) != (w1_c < 0.0)) {
                try_seed(t - 0.5 * step, x);
            } else if (it >= 2 && std::abs(w1_b) < 0.05 &&
                       std::abs(w1_b) <= std::abs(w1_a) &&
                       std::abs(w1_b) <= std::abs(w1_c)) {
                try_seed(t - step, x); // |W1| local minimum near zero
            }
            w1_a = w1_b;
            w1_b = w1_c;
        }
    }
    return out;
}

// Gap list of the induced circle map T_u o T_d.
inline std::vector<GapDescriptor> measure_gap(const ThresholdSystemSpec& spec,
                                              int grid = 0) {
    return locate_gaps(threshold_lift(spec), grid);
}

// Number of down-map pre-images of the point (x, g(x)), counting a grazing
// contact twice. Odd for generic x; parity changes mark turning points of
// the down map.
inline int preimage_count_down(const ThresholdSystemSpec& spec, double x) {
    // Roots of W~(tau, x) in tau > 0. The backward down flow increases, so
    // no roots remain once it clears max h.
    auto b = spec.sample_bounds();
    double tau_hi = 1.0;
    while (spec.down_flow.eval(-tau_hi, spec.lower(x)) < b.h_max + 1e-9 && tau_hi < 1e6)
        tau_hi *= 1.5;

    const int n = 1 << 14;
    int count = 0;
    std::vector<double> f(n + 1);
    for (int i = 0; i <= n; ++i) f[i] = spec.W_back(tau_hi * i / n, x);
    for (int i = 1; i <= n; ++i)
        if (f[i - 1] == 0.0 || (f[i - 1] < 0.0) != (f[i] < 0.0)) ++count;
    // grazing contacts: interior extrema with |W~| below tolerance
    for (int i = 1; i < n; ++i) {
        bool is_max = f[i] >= f[i - 1] && f[i] >= f[i + 1];
        bool is_min = f[i] <= f[i - 1] && f[i] <= f[i + 1];
        if ((is_max || is_min) && std::abs(f[i]) < 1e-10 &&
            (f[i - 1] < 0.0) == (f[i] < 0.0) && (f[i] < 0.0) == (f[i + 1] < 0.0))
            count += 2;
    }
    return count;
}

} // namespace gapmaps
