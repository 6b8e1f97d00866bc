// Two-parameter bifurcation sets for families of circle-map lifts:
// pseudo-arclength continuation of saddle-node curves, border-collision
// curve tracing against recomputed gap endpoints, bifurcation-sequence
// classification along one-parameter transects, and brute-force
// bifurcation diagrams.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gapmaps/canonical.hpp"
#include "gapmaps/errors.hpp"
#include "gapmaps/lift.hpp"
#include "gapmaps/numeric.hpp"
#include "gapmaps/sts.hpp"

namespace gapmaps {

// One discontinuity of a family member, with machine-precision one-sided
// limit values (grid detection cannot deliver the square-root side to the
// residual tolerances the curves are verified at).
struct FamilyGap {
    double x_gap = 0.0;         // jump abscissa of the lift
    double singular_value = 0.0; // limit on the square-root side
    double finite_value = 0.0;   // limit on the finite side
    bool singular_left = true;   // singular side approached from the left
};

// A two-parameter family of lifts. gap_info is optional; families without
// it cannot be border-collision traced.
struct MapFamily {
    std::function<Lift(double, double)> make;
    std::function<std::vector<FamilyGap>(double, double)> gap_info;
    std::string p1_name = "p1";
    std::string p2_name = "p2";
};

// STS in the (beta, alpha) plane at fixed gamma.
inline MapFamily sts_family(double gamma) {
    MapFamily f;
    f.make = [gamma](double beta, double alpha) {
        return sts_lift({alpha, beta, gamma});
    };
    f.gap_info = [gamma](double beta, double alpha) {
        std::vector<FamilyGap> out;
        for (const StsGap& g : sts_gaps_from_upper({alpha, beta, gamma})) {
            FamilyGap fg;
            fg.x_gap = g.x_gap;
            fg.singular_value = g.value_sing;
            fg.finite_value = g.value_fin;
            fg.singular_left = g.singular_left;
            out.push_back(fg);
        }
        return out;
    };
    f.p1_name = "beta";
    f.p2_name = "alpha";
    return f;
}

// Canonical family in the (a, c) plane at fixed n and b. The single gap
// sits at the seam; its one-sided limits are a + b and a exactly.
inline MapFamily canonical_family(int n, double b) {
    MapFamily f;
    f.make = [n, b](double a, double c) {
        return make_canonical({n, a, b, c});
    };
    f.gap_info = [n, b](double a, double c) {
        (void)c;
        FamilyGap g;
        g.x_gap = 1.0; // seam representative: left limit at 1^-, right at 1^+
        g.singular_value = a + b;
        g.finite_value = a + 1.0;
        g.singular_left = true;
        return std::vector<FamilyGap>{g};
    };
    f.p1_name = "a";
    f.p2_name = "c";
    return f;
}

struct PlaneWindow {
    double p1_lo = 0.0, p1_hi = 1.0;
    double p2_lo = 0.0, p2_hi = 1.0;

    bool contains(double p1, double p2) const {
        return p1 >= p1_lo && p1 <= p1_hi && p2 >= p2_lo && p2 <= p2_hi;
    }
};

struct TonguePoint {
    double p1 = 0.0, p2 = 0.0;
    double x = 0.0;
    int p = 0, q = 1;
    enum class bif { SN, BC_I, BC_II } kind = bif::SN;
};

inline const char* to_string(TonguePoint::bif k) {
    switch (k) {
        case TonguePoint::bif::SN: return "SN";
        case TonguePoint::bif::BC_I: return "BC_I";
        case TonguePoint::bif::BC_II: return "BC_II";
    }
    return "?";
}

struct TraceResult {
    std::vector<TonguePoint> points;
    enum class stop { window_exit, step_collapse, max_points } reason = stop::window_exit;
};

struct ContinuationOptions {
    double step0 = 1e-3;
    double step_min = 1e-6;
    double step_max = 1e-2;
    int max_points = 4000;
    double residual_tol = 1e-8;
    int direction = +1; // initial tangent orientation along p1
};

namespace detail {

// F^q and its x-derivative by the chain rule.
inline std::pair<double, double> iterate_with_derivative(const Lift& L, double x, int q) {
    double mult = 1.0;
    for (int i = 0; i < q; ++i) {
        mult *= L.derivative(x);
        x = L(x);
    }
    return {x, mult};
}

} // namespace detail

// Saddle-node curve of the (p,q) orbit: pseudo-arclength continuation of
//   H1(p1, p2, x) = F^q(x) - x - p = 0,
//   H2(p1, p2, x) = (F^q)'(x) - 1 = 0.
// The tangent is the cross product of the two Jacobian rows; the corrector
// appends the arclength plane. Steps halve on corrector failure and double
// after three successes inside [step_min, step_max].
inline TraceResult trace_sn_curve(const MapFamily& family, int p, int q,
                                  const PlaneWindow& window,
                                  std::array<double, 3> seed,
                                  ContinuationOptions opt = {}) {
    // Out-of-domain parameter excursions surface as step failures, not
    // aborts; the step-halving logic retries from the last good point.
    auto H = [&](const std::array<double, 3>& v) -> std::array<double, 2> {
        try {
            Lift L = family.make(v[0], v[1]);
            auto [fx, dfx] = detail::iterate_with_derivative(L, v[2], q);
            return {fx - v[2] - p, dfx - 1.0};
        } catch (const std::exception&) {
            double nan = std::numeric_limits<double>::quiet_NaN();
            return {nan, nan};
        }
    };
    auto jacobian = [&](const std::array<double, 3>& v) {
        std::array<std::array<double, 3>, 2> J{};
        for (int c = 0; c < 3; ++c) {
            double h = 1e-6 * std::max(1.0, std::abs(v[c]));
            auto vp = v, vm = v;
            vp[c] += h;
            vm[c] -= h;
            auto fp = H(vp), fm = H(vm);
            J[0][c] = (fp[0] - fm[0]) / (2.0 * h);
            J[1][c] = (fp[1] - fm[1]) / (2.0 * h);
        }
        return J;
    };
    // corrector: Newton on {H1, H2, (v - v_pred) . t}
    auto correct = [&](std::array<double, 3>& v, const std::array<double, 3>& v_pred,
                       const std::array<double, 3>& t, bool with_plane) -> bool {
        for (int it = 0; it < 12; ++it) {
            auto r = H(v);
            double plane = with_plane ? (v[0] - v_pred[0]) * t[0] + (v[1] - v_pred[1]) * t[1] +
                                            (v[2] - v_pred[2]) * t[2]
                                      : 0.0;
            if (std::abs(r[0]) < 1e-12 && std::abs(r[1]) < 1e-12 &&
                std::abs(plane) < 1e-12)
                return true;
            auto J = jacobian(v);
            std::vector<std::vector<double>> A;
            std::vector<double> b;
            A.push_back({J[0][0], J[0][1], J[0][2]});
            A.push_back({J[1][0], J[1][1], J[1][2]});
            b.push_back(-r[0]);
            b.push_back(-r[1]);
            if (with_plane) {
                A.push_back({t[0], t[1], t[2]});
                b.push_back(-plane);
            } else {
                A.push_back({1.0, 0.0, 0.0}); // hold p1 while seeding
                b.push_back(0.0);
            }
            if (!solve_linear(A, b)) return false;
            v[0] += b[0];
            v[1] += b[1];
            v[2] += b[2];
            if (!std::isfinite(v[0] + v[1] + v[2])) return false;
        }
        auto r = H(v);
        return std::abs(r[0]) < 1e-10 && std::abs(r[1]) < 1e-10;
    };
    auto tangent = [&](const std::array<double, 3>& v) -> std::array<double, 3> {
        auto J = jacobian(v);
        std::array<double, 3> t{J[0][1] * J[1][2] - J[0][2] * J[1][1],
                                J[0][2] * J[1][0] - J[0][0] * J[1][2],
                                J[0][0] * J[1][1] - J[0][1] * J[1][0]};
        double norm = std::sqrt(t[0] * t[0] + t[1] * t[1] + t[2] * t[2]);
        if (norm == 0.0) throw continuation_failure("trace_sn_curve: rank-deficient tangent");
        for (double& c : t) c /= norm;
        return t;
    };

    std::array<double, 3> v = seed;
    if (!correct(v, v, {0, 0, 0}, false))
        throw continuation_failure("trace_sn_curve: seed correction failed");

    TraceResult out;
    auto push = [&](const std::array<double, 3>& w) {
        auto r = H(w);
        if (std::abs(r[0]) > opt.residual_tol || std::abs(r[1]) > opt.residual_tol)
            return false;
        TonguePoint tp;
        tp.p1 = w[0];
        tp.p2 = w[1];
        tp.x = wrap01(w[2]);
        tp.p = p;
        tp.q = q;
        tp.kind = TonguePoint::bif::SN;
        out.points.push_back(tp);
        return true;
    };
    push(v);

    std::array<double, 3> t_prev{static_cast<double>(opt.direction), 0.0, 0.0};
    double step = opt.step0;
    int successes = 0;
    while (static_cast<int>(out.points.size()) < opt.max_points) {
        std::array<double, 3> t = tangent(v);
        double dot = t[0] * t_prev[0] + t[1] * t_prev[1] + t[2] * t_prev[2];
        if (dot < 0.0)
            for (double& c : t) c = -c;
        std::array<double, 3> v_pred{v[0] + step * t[0], v[1] + step * t[1],
                                     v[2] + step * t[2]};
        std::array<double, 3> v_new = v_pred;
        bool ok = correct(v_new, v_pred, t, true) && push(v_new);
        if (!ok) {
            step *= 0.5;
            successes = 0;
            if (step < opt.step_min) {
                out.reason = TraceResult::stop::step_collapse;
                return out;
            }
            continue;
        }
        v = v_new;
        t_prev = t;
        if (++successes >= 3) {
            step = std::min(step * 2.0, opt.step_max);
            successes = 0;
        }
        if (!window.contains(v[0], v[1])) {
            out.reason = TraceResult::stop::window_exit;
            return out;
        }
    }
    out.reason = TraceResult::stop::max_points;
    return out;
}

enum class gap_side { singular, finite };

namespace detail {

// Residual of the (p,q) orbit pinned to a gap endpoint: start from the
// one-sided limit value at the gap, iterate q-1 more times, compare with
// the endpoint abscissa shifted by p. The gap is recomputed from the
// family each call and matched to x_hint.
inline std::optional<double> bc_residual(const MapFamily& family, double p1, double p2,
                                         int p, int q, gap_side side, double x_hint) {
    std::vector<FamilyGap> gaps = family.gap_info(p1, p2);
    if (gaps.empty()) return std::nullopt;
    const FamilyGap* g = &gaps.front();
    for (const FamilyGap& cand : gaps)
        if (circle_dist(cand.x_gap, x_hint) < circle_dist(g->x_gap, x_hint)) g = &cand;
    Lift L = family.make(p1, p2);
    double v = (side == gap_side::singular) ? g->singular_value : g->finite_value;
    for (int i = 1; i < q; ++i) v = L(v);
    return v - g->x_gap - p;
}

} // namespace detail

// Border-collision curve of the (p,q) orbit with the chosen gap endpoint:
// continuation of one scalar equation in the parameter plane.
inline TraceResult trace_bc_curve(const MapFamily& family, int p, int q, gap_side side,
                                  const PlaneWindow& window, std::array<double, 3> seed,
                                  ContinuationOptions opt = {}) {
    if (!family.gap_info) throw invalid_params("trace_bc_curve: family exposes no gaps");
    double x_hint = seed[2];
    auto gaps0 = family.gap_info(seed[0], seed[1]);
    if (gaps0.empty()) throw invalid_params("trace_bc_curve: no gap at the seed");

    auto residual = [&](double p1, double p2) {
        try {
            auto r = detail::bc_residual(family, p1, p2, p, q, side, x_hint);
            if (!r) throw continuation_failure("trace_bc_curve: gap vanished mid-trace");
            return *r;
        } catch (const continuation_failure&) {
            throw;
        } catch (const std::exception&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    auto grad = [&](double p1, double p2) -> std::array<double, 2> {
        double h1 = 1e-7 * std::max(1.0, std::abs(p1));
        double h2 = 1e-7 * std::max(1.0, std::abs(p2));
        return {(residual(p1 + h1, p2) - residual(p1 - h1, p2)) / (2.0 * h1),
                (residual(p1, p2 + h2) - residual(p1, p2 - h2)) / (2.0 * h2)};
    };
    // seed correction by least-norm gradient steps (handles curves that run
    // vertically or horizontally in the plane)
    double p1 = seed[0], p2 = seed[1];
    {
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
            double r = residual(p1, p2);
            if (std::abs(r) < 1e-12) {
                ok = true;
                break;
            }
            auto g = grad(p1, p2);
            double n2 = g[0] * g[0] + g[1] * g[1];
            if (n2 == 0.0 || !std::isfinite(n2)) break;
            p1 -= r * g[0] / n2;
            p2 -= r * g[1] / n2;
        }
        if (!ok && !(std::abs(residual(p1, p2)) < 1e-10))
            throw continuation_failure("trace_bc_curve: seed correction failed");
    }

    TraceResult out;
    auto push = [&](double q1, double q2) {
        double r = residual(q1, q2);
        if (!(std::abs(r) <= opt.residual_tol)) return false;
        std::vector<FamilyGap> gaps = family.gap_info(q1, q2);
        if (gaps.empty()) return false;
        const FamilyGap* gp = &gaps.front();
        for (const FamilyGap& cand : gaps)
            if (circle_dist(cand.x_gap, x_hint) < circle_dist(gp->x_gap, x_hint)) gp = &cand;
        FamilyGap g = *gp;
        TonguePoint tp;
        tp.p1 = q1;
        tp.p2 = q2;
        tp.x = wrap01(g.x_gap);
        tp.p = p;
        tp.q = q;
        tp.kind = (side == gap_side::singular) ? TonguePoint::bif::BC_I
                                               : TonguePoint::bif::BC_II;
        out.points.push_back(tp);
        x_hint = g.x_gap;
        return true;
    };
    push(p1, p2);

    std::array<double, 2> t_prev{0.0, static_cast<double>(opt.direction)};
    double step = opt.step0;
    int successes = 0;
    while (static_cast<int>(out.points.size()) < opt.max_points) {
        auto g = grad(p1, p2);
        double norm = std::hypot(g[0], g[1]);
        if (norm == 0.0) throw continuation_failure("trace_bc_curve: flat residual");
        std::array<double, 2> t{-g[1] / norm, g[0] / norm};
        if (t[0] * t_prev[0] + t[1] * t_prev[1] < 0.0) {
            t[0] = -t[0];
            t[1] = -t[1];
        }
        double q1 = p1 + step * t[0], q2 = p2 + step * t[1];
        // correct back onto the curve along the gradient
        bool ok = false;
        for (int it = 0; it < 30; ++it) {
            double r = residual(q1, q2);
            if (std::abs(r) < 1e-12) {
                ok = true;
                break;
            }
            auto gg = grad(q1, q2);
            double n2 = gg[0] * gg[0] + gg[1] * gg[1];
            if (n2 == 0.0 || !std::isfinite(n2)) break;
            q1 -= r * gg[0] / n2;
            q2 -= r * gg[1] / n2;
            if (!std::isfinite(q1 + q2)) break;
        }
        ok = ok && push(q1, q2);
        if (!ok) {
            step *= 0.5;
            successes = 0;
            if (step < opt.step_min) {
                out.reason = TraceResult::stop::step_collapse;
                return out;
            }
            continue;
        }
        t_prev = t;
        p1 = q1;
        p2 = q2;
        if (++successes >= 3) {
            step = std::min(step * 2.0, opt.step_max);
            successes = 0;
        }
        if (!window.contains(p1, p2)) {
            out.reason = TraceResult::stop::window_exit;
            return out;
        }
    }
    out.reason = TraceResult::stop::max_points;
    return out;
}

// ---------------------------------------------------------------------------
// Transect classification

struct Transect {
    // parameters as a function of t in [0, 1]
    std::function<std::pair<double, double>(double)> at;
    int steps = 2000;
};

struct TransectEvent {
    double t = 0.0;
    double p1 = 0.0, p2 = 0.0;
    TonguePoint::bif kind = TonguePoint::bif::SN;
    int count_before = 0, count_after = 0;
};

enum class tongue_sequence { seq_a, seq_b, unrecognized };

namespace detail {

inline int orbit_count(const MapFamily& family, int p, int q, double p1, double p2,
                       int grid = 2048) {
    Lift L = family.make(p1, p2);
    return static_cast<int>(periodic_points(L, p, q, grid).size());
}

} // namespace detail

struct TransectClassification {
    tongue_sequence label = tongue_sequence::unrecognized;
    std::vector<TransectEvent> events;
};

// Orders the SN/BC events met along the transect and matches the kind
// sequence against the two fundamental templates:
//   (a) BC_II -> BC_I -> SN
//   (b) SN -> BC_II -> BC_I -> SN
// Extra event pairs leave the sequence unrecognized and are reported
// verbatim.
inline TransectClassification classify_tongue_sequence(const MapFamily& family, int p,
                                                       int q, const Transect& transect) {
    TransectClassification out;
    auto count_at = [&](double t) {
        auto [p1, p2] = transect.at(t);
        return detail::orbit_count(family, p, q, p1, p2);
    };

    int prev = count_at(0.0);
    for (int i = 1; i <= transect.steps; ++i) {
        double t1 = static_cast<double>(i) / transect.steps;
        int cur = count_at(t1);
        if (cur != prev) {
            double lo = static_cast<double>(i - 1) / transect.steps, hi = t1;
            int clo = prev;
            while (hi - lo > 1e-12) {
                double mid = 0.5 * (lo + hi);
                int cm = count_at(mid);
                if (cm == clo)
                    lo = mid;
                else
                    hi = mid;
            }
            TransectEvent ev;
            ev.t = 0.5 * (lo + hi);
            auto [p1, p2] = transect.at(ev.t);
            ev.p1 = p1;
            ev.p2 = p2;
            ev.count_before = prev;
            ev.count_after = count_at(t1);
            // classify: a border collision when an endpoint residual
            // vanishes here, else a saddle-node
            double best_bc = 1e300;
            TonguePoint::bif kind = TonguePoint::bif::SN;
            if (family.gap_info) {
                for (const FamilyGap& g : family.gap_info(p1, p2)) {
                    Lift L = family.make(p1, p2);
                    for (gap_side side : {gap_side::singular, gap_side::finite}) {
                        double v = (side == gap_side::singular) ? g.singular_value
                                                                : g.finite_value;
                        for (int k = 1; k < q; ++k) v = L(v);
                        double r = std::abs(v - g.x_gap - p);
                        if (r < best_bc) {
                            best_bc = r;
                            if (r < 1e-5)
                                kind = (side == gap_side::singular)
                                           ? TonguePoint::bif::BC_I
                                           : TonguePoint::bif::BC_II;
                        }
                    }
                }
            }
            ev.kind = kind;
            out.events.push_back(ev);
            prev = cur;
        }
    }

    std::vector<TonguePoint::bif> kinds;
    for (const auto& ev : out.events) kinds.push_back(ev.kind);
    using B = TonguePoint::bif;
    if (kinds == std::vector<B>{B::BC_II, B::BC_I, B::SN} ||
        kinds == std::vector<B>{B::BC_I, B::BC_II, B::SN})
        out.label = tongue_sequence::seq_a;
    else if (kinds == std::vector<B>{B::SN, B::BC_II, B::BC_I, B::SN} ||
             kinds == std::vector<B>{B::SN, B::BC_I, B::BC_II, B::SN})
        out.label = tongue_sequence::seq_b;
    else
        out.label = tongue_sequence::unrecognized;
    return out;
}

// A coarse transect event polished to solver precision: saddle-nodes by
// Newton on {F^q(x) - x - p, (F^q)'(x) - 1} over (t, x), border collisions
// by bisection of the endpoint residual in t.
struct RefinedEvent {
    double t = 0.0;
    double p1 = 0.0, p2 = 0.0;
    double x = 0.0;
    TonguePoint::bif kind = TonguePoint::bif::SN;
};

inline std::optional<RefinedEvent> refine_transect_event(const MapFamily& family, int p,
                                                         int q, const Transect& transect,
                                                         const TransectEvent& ev) {
    RefinedEvent out;
    out.kind = ev.kind;
    if (ev.kind == TonguePoint::bif::SN) {
        // seed x from the colliding pair on the richer side
        double dt = 2.0 / transect.steps;
        double t_rich = (ev.count_before > ev.count_after) ? ev.t - dt : ev.t + dt;
        auto [rp1, rp2] = transect.at(t_rich);
        std::vector<double> roots = periodic_points(family.make(rp1, rp2), p, q);
        if (roots.size() < 2) return std::nullopt;
        std::sort(roots.begin(), roots.end());
        double x_guess = 0.5 * (roots[0] + roots[1]), best_sep = 1e300;
        for (size_t i = 0; i + 1 < roots.size(); ++i) {
            double sep = roots[i + 1] - roots[i];
            if (sep < best_sep) {
                best_sep = sep;
                x_guess = 0.5 * (roots[i] + roots[i + 1]);
            }
        }
        double t = ev.t, x = x_guess;
        auto H = [&](double tt, double xx) -> std::array<double, 2> {
            auto [p1, p2] = transect.at(tt);
            auto [fx, dfx] = detail::iterate_with_derivative(family.make(p1, p2), xx, q);
            return {fx - xx - p, dfx - 1.0};
        };
        for (int it = 0; it < 40; ++it) {
            auto r = H(t, x);
            if (std::abs(r[0]) < 1e-13 && std::abs(r[1]) < 1e-11) break;
            double ht = 1e-7, hx = 1e-7;
            auto rt = H(t + ht, x), rtm = H(t - ht, x);
            auto rx = H(t, x + hx), rxm = H(t, x - hx);
            std::vector<std::vector<double>> A{
                {(rt[0] - rtm[0]) / (2 * ht), (rx[0] - rxm[0]) / (2 * hx)},
                {(rt[1] - rtm[1]) / (2 * ht), (rx[1] - rxm[1]) / (2 * hx)}};
            std::vector<double> b{-r[0], -r[1]};
            if (!solve_linear(A, b)) return std::nullopt;
            t += b[0];
            x += b[1];
        }
        auto r = H(t, x);
        if (std::abs(r[0]) > 1e-9 || std::abs(r[1]) > 1e-7) return std::nullopt;
        out.t = t;
        out.x = wrap01(x);
    } else {
        if (!family.gap_info) return std::nullopt;
        gap_side side =
            (ev.kind == TonguePoint::bif::BC_I) ? gap_side::singular : gap_side::finite;
        auto r_of_t = [&](double t) {
            auto [p1, p2] = transect.at(t);
            auto r = detail::bc_residual(family, p1, p2, p, q, side, 0.0);
            if (!r) throw continuation_failure("refine_transect_event: gap vanished");
            return *r;
        };
        double w = 2.0 / transect.steps;
        double lo = ev.t - w, hi = ev.t + w;
        double flo = r_of_t(lo), fhi = r_of_t(hi);
        if ((flo < 0.0) == (fhi < 0.0)) return std::nullopt;
        out.t = solve_bracketed(r_of_t, lo, hi);
        auto [p1b, p2b] = transect.at(out.t);
        std::vector<FamilyGap> gaps = family.gap_info(p1b, p2b);
        out.x = gaps.empty() ? 0.0 : wrap01(gaps.front().x_gap);
    }
    auto [p1f, p2f] = transect.at(out.t);
    out.p1 = p1f;
    out.p2 = p2f;
    return out;
}

// ---------------------------------------------------------------------------
// One-parameter bifurcation diagrams

struct DiagramConfig {
    int sweep_param = 0; // 0: p1, 1: p2
    double lo = 0.0, hi = 1.0;
    int count = 400;
    double fixed_other = 0.0;
    int transient = 500;
    int samples = 200;
    double x0 = 0.1234;
    int jobs = 1;

    void validate() const {
        if (count < 1 || transient < 0 || samples < 1 || !(hi > lo))
            throw invalid_params("diagram config: bad sweep ranges");
    }
};

struct DiagramPoint {
    double param = 0.0;
    double x = 0.0;
};

inline std::vector<DiagramPoint> sweep_bifurcation_diagram(const MapFamily& family,
                                                           const DiagramConfig& cfg) {
    cfg.validate();
    std::vector<std::vector<DiagramPoint>> rows(cfg.count);
    parallel_for(cfg.count, cfg.jobs, [&](int i) {
        double param = cfg.lo + (cfg.hi - cfg.lo) * i / std::max(1, cfg.count - 1);
        double p1 = cfg.sweep_param == 0 ? param : cfg.fixed_other;
        double p2 = cfg.sweep_param == 0 ? cfg.fixed_other : param;
        Lift L = family.make(p1, p2);
        double x = cfg.x0;
        for (int k = 0; k < cfg.transient; ++k) x = L(x);
        rows[i].reserve(cfg.samples);
        for (int k = 0; k < cfg.samples; ++k) {
            x = L(x);
            rows[i].push_back({param, wrap01(x)});
        }
    });
    std::vector<DiagramPoint> out;
    out.reserve(static_cast<size_t>(cfg.count) * cfg.samples);
    for (auto& row : rows)
        for (auto& pt : row) out.push_back(pt);
    return out;
}

// Largest normalized hole left by an orbit closure on the circle; gap maps
// leave persistent forbidden bands, smooth quasiperiodic orbits fill in.
inline double max_orbit_hole(const Lift& L, double x0, long iters, long transient = 1000) {
    double x = x0;
    for (long i = 0; i < transient; ++i) x = L(x);
    std::vector<double> pts;
    pts.reserve(iters);
    for (long i = 0; i < iters; ++i) {
        x = L(x);
        pts.push_back(wrap01(x));
    }
    std::sort(pts.begin(), pts.end());
    double hole = 1.0 - pts.back() + pts.front();
    for (size_t i = 1; i < pts.size(); ++i) hole = std::max(hole, pts[i] - pts[i - 1]);
    return hole;
}

} // namespace gapmaps
