// Lifts of degree-one circle maps: evaluation, iteration, rotation numbers,
// periodic orbits and gap location.
//
// A lift is a real function F with F(x+1) = F(x) + 1. Families are stored as
// a branch function on the fundamental domain [0,1) together with an optional
// closed-form derivative; evaluation anywhere on the line reduces the
// argument to [0,1) and adds the integer part back, so long orbits do not
// accumulate periodicity error.
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gapmaps/errors.hpp"
#include "gapmaps/numeric.hpp"

namespace gapmaps {

enum class lift_family { canonical, sts, threshold_derived, torus_return, custom };

class Lift {
public:
    using fn = std::function<double(double)>;

    Lift() = default;
    Lift(lift_family family, fn branch, fn branch_derivative = nullptr,
         std::string label = {})
        : family_(family),
          branch_(std::move(branch)),
          dbranch_(std::move(branch_derivative)),
          label_(std::move(label)) {}

    // F(x) for any real x.
    double operator()(double x) const {
        double k = std::floor(x);
        return branch_(x - k) + k;
    }

    // F'(x); closed form when the family provides one, otherwise a central
    // difference of the lift itself.
    double derivative(double x) const {
        double k = std::floor(x);
        double u = x - k;
        if (dbranch_) return dbranch_(u);
        double h = 1e-7;
        if (u < h || u > 1.0 - h) {
            // one-sided away from the branch seam
            double s = (u < h) ? 1.0 : -1.0;
            return s * ((*this)(x + s * h) - (*this)(x)) / h;
        }
        return (branch_(u + h) - branch_(u - h)) / (2.0 * h);
    }

    bool has_closed_derivative() const { return static_cast<bool>(dbranch_); }
    lift_family family() const { return family_; }
    const std::string& label() const { return label_; }

    // Lift from a sampled return map on the section; linear interpolation
    // between samples, degree-one extension outside.
    static Lift from_samples(std::vector<double> y, std::vector<double> fy) {
        if (y.size() != fy.size() || y.size() < 2)
            throw invalid_params("Lift::from_samples: need >= 2 samples");
        auto eval = [y = std::move(y), fy = std::move(fy)](double u) {
            auto it = std::lower_bound(y.begin(), y.end(), u);
            size_t i1 = std::min<size_t>(y.size() - 1,
                                         static_cast<size_t>(it - y.begin()));
            size_t i0 = (i1 == 0) ? 0 : i1 - 1;
            if (i0 == i1) return fy[i0];
            double t = (u - y[i0]) / (y[i1] - y[i0]);
            return fy[i0] + t * (fy[i1] - fy[i0]);
        };
        return Lift(lift_family::torus_return, eval, nullptr, "torus-return");
    }

private:
    lift_family family_ = lift_family::custom;
    fn branch_;
    fn dbranch_;
    std::string label_;
};

inline double eval(const Lift& lift, double x) { return lift(x); }
inline double eval_derivative(const Lift& lift, double x) { return lift.derivative(x); }

// q-fold composition, tracking the full orbit when requested.
inline double iterate(const Lift& lift, double x, int k,
                      std::vector<double>* orbit = nullptr) {
    if (orbit) {
        orbit->clear();
        orbit->reserve(k);
    }
    for (int i = 0; i < k; ++i) {
        if (orbit) orbit->push_back(x);
        x = lift(x);
    }
    return x;
}

struct RotationEstimate {
    double value = 0.0;
    long iterations = 0;
    double error_bound = 0.0; // = 1/iterations, valid for monotone lifts
    bool monotone = true;     // false: a negative derivative was seen en route
};

// Birkhoff average (F^k(x0) - x0)/k. For monotone lifts the estimate is
// within 1/k of the rotation number for every x0.
inline RotationEstimate rotation_number(const Lift& lift, double x0, long k,
                                        bool check_monotone = true) {
    if (k < 1) throw invalid_params("rotation_number: k >= 1 required");
    RotationEstimate est;
    est.iterations = k;
    est.error_bound = 1.0 / static_cast<double>(k);
    double x = x0;
    long deriv_checks = std::min<long>(k, 257);
    long stride = std::max<long>(1, k / deriv_checks);
    for (long i = 0; i < k; ++i) {
        if (check_monotone && (i % stride) == 0) {
            double d = lift.derivative(x);
            if (std::isfinite(d) && d < 0.0) est.monotone = false;
        }
        x = lift(x);
    }
    est.value = (x - x0) / static_cast<double>(k);
    return est;
}

struct PeriodicOrbit {
    int p = 0;
    int q = 1;
    std::vector<double> points; // q points in [0,1), orbit order
    double multiplier = 1.0;    // (F^q)'(x0) by the chain rule
};

namespace detail {

inline int gcd_int(int a, int b) {
    while (b != 0) {
        int t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

} // namespace detail

// All roots of G(x) = F^q(x) - x - p on [0,1): bracket on a uniform grid,
// bisect, then confirm the residual (a sign change across a gap is not a
// root and is discarded).
inline std::vector<double> periodic_points(const Lift& lift, int p, int q,
                                           int grid = 0, double residual_tol = 1e-10) {
    if (grid <= 0) grid = seed_grid();
    auto G = [&](double x) { return iterate(lift, x, q) - x - p; };
    std::vector<double> roots;
    double x0 = 0.0, g0 = G(0.0);
    for (int i = 1; i <= grid; ++i) {
        double x1 = static_cast<double>(i) / grid;
        double g1 = G(x1);
        if (g0 == 0.0) roots.push_back(x0);
        else if ((g0 < 0.0) != (g1 < 0.0)) {
            double r = detail::refine_root(G, x0, x1, g0, g1, 1e-14);
            if (std::abs(G(r)) < residual_tol) roots.push_back(r);
        }
        x0 = x1;
        g0 = g1;
    }
    return roots;
}

// (p,q) orbit nearest x_guess, or nullopt when no root of G exists
// (parameter outside the tongue).
inline std::optional<PeriodicOrbit> find_periodic_orbit(const Lift& lift, int p, int q,
                                                        double x_guess = 0.5,
                                                        int grid = 0) {
    if (q < 1) throw invalid_params("find_periodic_orbit: q >= 1 required");
    if (detail::gcd_int(p, q) > 1)
        throw invalid_params("find_periodic_orbit: p, q must be coprime");
    std::vector<double> roots = periodic_points(lift, p, q, grid);
    if (roots.empty()) return std::nullopt;
    double best = roots.front();
    for (double r : roots)
        if (circle_dist(r, x_guess) < circle_dist(best, x_guess)) best = r;
    PeriodicOrbit orbit;
    orbit.p = p;
    orbit.q = q;
    double x = best;
    double mult = 1.0;
    for (int i = 0; i < q; ++i) {
        orbit.points.push_back(wrap01(x));
        mult *= lift.derivative(x);
        x = lift(x);
    }
    orbit.multiplier = mult;
    return orbit;
}

struct GapDescriptor {
    double x_gap = 0.0;              // position in [0,1)
    double left_limit = 0.0;         // lim x->x_gap- of the lift branch below
    double right_limit = 0.0;        // lim x->x_gap+ (fundamental representative)
    enum class side { none, left, right, both } singular_side = side::none;

    // Jump measured on the circle: the two one-sided limits may live on
    // different integer branches when the gap sits at the seam.
    double size() const {
        double d = wrap01(right_limit - left_limit);
        return std::min(d, 1.0 - d);
    }
};

namespace detail {

// One-sided difference quotient growth test: singular when the quotient
// exceeds `threshold` and keeps growing under two successive refinements.
inline bool side_is_singular(const std::function<double(double)>& f, double x_gap,
                             double direction, double threshold = 1e3) {
    double q_prev = 0.0;
    int grows = 0;
    for (int k = 4; k <= 8; ++k) {
        double h = std::pow(10.0, -k);
        double q = std::abs(f(x_gap + direction * h) - f(x_gap + direction * 2.0 * h)) / h;
        if (k > 4 && q > q_prev) ++grows;
        q_prev = q;
    }
    return q_prev > threshold && grows >= 2;
}

} // namespace detail

// All discontinuities of the lift on one period. Jump candidates come from a
// uniform grid scan; each is narrowed by quartering onto the subcell with the
// dominant variation, which separates a genuine jump (variation bounded
// below) from a steep square-root branch (variation ~ sqrt of cell width).
inline std::vector<GapDescriptor> locate_gaps(const Lift& lift, int grid = 0,
                                              double min_gap = 1e-4,
                                              double x_tol = 1e-10) {
    if (grid <= 0) grid = seed_grid();
    const double h0 = 1.0 / grid;
    std::vector<std::pair<double, double>> cells; // candidate [lo,hi]
    double prev_x = 0.0, prev_f = lift(0.0);
    for (int i = 1; i <= grid; ++i) {
        double x = static_cast<double>(i) / grid;
        double f = lift(x);
        if (std::abs(f - prev_f) > min_gap) {
            if (!cells.empty() && cells.back().second >= prev_x - 0.5 * h0)
                cells.back().second = x; // merge adjacent candidates
            else
                cells.emplace_back(prev_x, x);
        }
        prev_x = x;
        prev_f = f;
    }

    std::vector<GapDescriptor> gaps;
    for (auto [lo, hi] : cells) {
        while (hi - lo > x_tol) {
            // quarter the cell, keep the span with the dominant variation
            double best_lo = lo, best_hi = hi, best_jump = -1.0;
            for (int s = 0; s < 4; ++s) {
                double a = lo + (hi - lo) * s / 4.0;
                double b = lo + (hi - lo) * (s + 1) / 4.0;
                double j = std::abs(lift(b) - lift(a));
                if (j > best_jump) {
                    best_jump = j;
                    best_lo = a;
                    best_hi = b;
                }
            }
            lo = best_lo;
            hi = best_hi;
        }
        double x_gap = 0.5 * (lo + hi);
        const double dl = 2.0 * x_tol; // outside the position uncertainty
        GapDescriptor g;
        g.left_limit = lift(x_gap - dl);
        g.right_limit = lift(x_gap + dl);
        if (g.size() <= min_gap) continue; // steep but continuous
        // Position reported in [0,1). A seam gap (x_gap ~ 1) snaps to 0 and
        // its right limit drops to the fundamental branch, so the canonical
        // family reads left 1.1, right 0.4.
        double rep = wrap01(x_gap);
        if (rep > 1.0 - 1e-8) {
            rep = 0.0;
            g.right_limit -= 1.0;
        }
        g.x_gap = rep;
        auto f = [&](double x) { return lift(x); };
        bool sl = detail::side_is_singular(f, x_gap, -1.0);
        bool sr = detail::side_is_singular(f, x_gap, +1.0);
        using S = GapDescriptor::side;
        g.singular_side = sl && sr ? S::both : sl ? S::left : sr ? S::right : S::none;
        gaps.push_back(g);
    }
    return gaps;
}

} // namespace gapmaps
