// Scalar root finding, finite differences, least squares and small helpers
// used throughout the library.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "gapmaps/errors.hpp"

namespace gapmaps {

inline constexpr double two_pi = 2.0 * std::numbers::pi_v<double>;

// Fractional part in [0,1); stable for negative arguments.
inline double wrap01(double x) {
    double f = x - std::floor(x);
    return (f >= 1.0) ? f - 1.0 : f;
}

// Distance on the circle R/Z.
inline double circle_dist(double a, double b) {
    double d = wrap01(a - b);
    return std::min(d, 1.0 - d);
}

// Grid density default; GAPMAPS_SEED_GRID overrides for every scan-based
// routine at once.
inline int seed_grid(int fallback = 4096) {
    static const int cached = [] {
        if (const char* s = std::getenv("GAPMAPS_SEED_GRID")) {
            int v = std::atoi(s);
            if (v >= 16) return v;
        }
        return 0;
    }();
    return cached > 0 ? cached : fallback;
}

namespace detail {

// Bisection on a sign-changing bracket, then Newton polish while it stays
// inside the bracket. Returns the refined abscissa.
template <typename F>
double refine_root(F&& f, double lo, double hi, double flo, double fhi,
                   double xtol = 1e-15, int newton_rounds = 4) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    for (int i = 0; i < 200 && (hi - lo) > xtol * std::max(1.0, std::abs(lo)); ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) != (fm < 0.0)) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < newton_rounds; ++i) {
        double h = 1e-7 * std::max(1.0, std::abs(x));
        double d = (f(x + h) - f(x - h)) / (2.0 * h);
        if (d == 0.0 || !std::isfinite(d)) break;
        double step = f(x) / d;
        double xn = x - step;
        if (xn <= lo || xn >= hi) break;
        x = xn;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

} // namespace detail

// Root of f on [lo,hi] given a sign change (or endpoint zero).
template <typename F>
double solve_bracketed(F&& f, double lo, double hi, double xtol = 1e-15) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw solver_failure("solve_bracketed: no sign change on bracket");
    return detail::refine_root(f, lo, hi, flo, fhi, xtol);
}

// Smallest root of f in (t_min, t_max]. Scans with the given step, halving
// the step until two successive sweeps agree on the first crossing to
// agree_tol, then refines by bisection. A grazing root (f touching zero
// without a sign change) is reported when |f| dips below graze_tol at an
// interior extremum; `grazed`, when non-null, is set in that case.
template <typename F>
std::optional<double> first_positive_root(F&& f, double t_min, double t_max,
                                          double step0,
                                          double agree_tol = 1e-9,
                                          bool* grazed = nullptr,
                                          double graze_tol = 1e-10) {
    if (grazed) *grazed = false;
    auto sweep = [&](double step) -> std::optional<double> {
        double t0 = t_min;
        double f0 = f(t0);
        if (f0 == 0.0) return t0;
        int n = static_cast<int>(std::ceil((t_max - t_min) / step));
        for (int i = 1; i <= n; ++i) {
            double t1 = std::min(t_min + i * step, t_max);
            double f1 = f(t1);
            if (f1 == 0.0) return t1;
            if ((f0 < 0.0) != (f1 < 0.0))
                return detail::refine_root(f, t0, t1, f0, f1);
            t0 = t1;
            f0 = f1;
        }
        return std::nullopt;
    };

    // A returned root is a graze when f keeps its sign on both sides.
    auto classify = [&](double r) {
        if (!grazed) return;
        double h = std::max(1e-9, 10.0 * agree_tol);
        double fl = (r - h > t_min) ? f(r - h) : -f(r + h);
        double fr = (r + h < t_max) ? f(r + h) : fl;
        *grazed = (fl < 0.0) == (fr < 0.0);
    };

    double step = step0;
    std::optional<double> prev = sweep(step);
    for (int halvings = 0; halvings < 12; ++halvings) {
        step *= 0.5;
        std::optional<double> cur = sweep(step);
        if (prev && cur && std::abs(*prev - *cur) < agree_tol) {
            classify(*cur);
            return cur;
        }
        if (!prev && !cur && halvings >= 6) break;
        prev = cur;
    }
    if (prev) {
        classify(*prev);
        return prev;
    }

    // No sign change: look for a grazing contact. f is assumed negative
    // between crossings; a graze is a local maximum with |f| ~ 0.
    if (grazed) {
        const int n = 4096;
        double best_t = t_min, best_f = -std::numeric_limits<double>::infinity();
        const double grid = (t_max - t_min) / n;
        for (int i = 0; i <= n; ++i) {
            double t = t_min + grid * i;
            double v = f(t);
            if (v > best_f) {
                best_f = v;
                best_t = t;
            }
        }
        // ternary refinement of the maximum before judging the contact
        double lo = std::max(t_min, best_t - grid), hi = std::min(t_max, best_t + grid);
        for (int i = 0; i < 100 && hi - lo > 1e-14; ++i) {
            double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            if (f(m1) < f(m2))
                lo = m1;
            else
                hi = m2;
        }
        best_t = 0.5 * (lo + hi);
        if (f(best_t) > -graze_tol) {
            *grazed = true;
            return best_t;
        }
    }
    return std::nullopt;
}

// Smallest root of f in (t_min, t_max] for smooth f with |f''| bounded by
// curv. Steps never exceed the certified root-free radius around the
// current point, i.e. the positive root r of |w| = |w'| r + (curv/2) r^2,
// so a sign change cannot be skipped no matter how thin the crossing pair -
// steps simply contract near a tangency. A graze (f touching zero with
// sign unchanged) terminates the walk and is reported through `grazed`.
template <typename F>
std::optional<double> first_crossing_guarded(F&& f, double t_min, double t_max,
                                             double curv, bool* grazed = nullptr,
                                             double graze_tol = 1e-10,
                                             double floor_step = 1e-11) {
    if (grazed) *grazed = false;
    curv = std::max(curv, 1e-12);
    double t = t_min;
    double w = f(t);
    if (w == 0.0) return t;
    const double dh = 1e-7 * std::max(1.0, std::abs(t_max));
    while (t < t_max) {
        double wp = (f(t + dh) - f(t - dh)) / (2.0 * dh);
        double awp = std::abs(wp);
        double r = (std::sqrt(awp * awp + 2.0 * curv * std::abs(w)) - awp) / curv;
        r = std::max(0.9 * r, floor_step);
        // true graze: residual and slope both at the touch scale
        if (std::abs(w) < graze_tol && awp <= 4.0 * std::sqrt(2.0 * curv * graze_tol)) {
            if (grazed) *grazed = true;
            return t;
        }
        double t_next = std::min(t + r, t_max);
        double w_next = f(t_next);
        if (w_next == 0.0 || (w < 0.0) != (w_next < 0.0)) {
            if (grazed) *grazed = false;
            return detail::refine_root(f, t, t_next, w, w_next);
        }
        if (t_next >= t_max) break;
        t = t_next;
        w = w_next;
    }
    return std::nullopt;
}

// Sampled bound on |f''| over [lo, hi]; safety factor 2.
template <typename F>
double sampled_curvature_bound(F&& f, double lo, double hi, int n = 48) {
    double h = (hi - lo) / (4.0 * n);
    double q = 0.0;
    for (int i = 0; i <= n; ++i) {
        double t = lo + (hi - lo) * i / n;
        double tt = std::min(std::max(t, lo + h), hi - h);
        double second = (f(tt + h) - 2.0 * f(tt) + f(tt - h)) / (h * h);
        q = std::max(q, std::abs(second));
    }
    return 2.0 * q + 1e-9;
}

// Central finite difference of f at x, step scaled to the argument.
template <typename F>
double fd_derivative(F&& f, double x, double h = 0.0) {
    if (h <= 0.0) h = 1e-6 * std::max(1.0, std::abs(x));
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

template <typename F>
double fd_second_derivative(F&& f, double x, double h = 0.0) {
    if (h <= 0.0) h = 1e-4 * std::max(1.0, std::abs(x));
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

struct line_fit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline line_fit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw invalid_params("fit_line: need >= 2 matched samples");
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw solver_failure("fit_line: degenerate abscissae");
    line_fit r;
    r.slope = (n * sxy - sx * sy) / denom;
    r.intercept = (sy - r.slope * sx) / n;
    return r;
}

// Slope of the through-origin least squares fit y ~ k x.
inline double fit_through_origin(const std::vector<double>& xs,
                                 const std::vector<double>& ys) {
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    if (sxx == 0.0) throw solver_failure("fit_through_origin: zero abscissae");
    return sxy / sxx;
}

// Gaussian elimination with partial pivoting for tiny dense systems.
inline bool solve_linear(std::vector<std::vector<double>>& A, std::vector<double>& b) {
    const size_t n = A.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (A[piv][col] == 0.0 || !std::isfinite(A[piv][col])) return false;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (size_t r = col + 1; r < n; ++r) {
            double f = A[r][col] / A[col][col];
            for (size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    for (size_t col = n; col-- > 0;) {
        for (size_t c = col + 1; c < n; ++c) b[col] -= A[col][c] * b[c];
        b[col] /= A[col][col];
        if (!std::isfinite(b[col])) return false;
    }
    return true;
}

// Local minimiser of a smooth f by Newton on the finite-difference
// derivative. delta controls the FD stencil.
template <typename F>
double minimize_newton_fd(F&& f, double x0, double delta = 1e-5, int iters = 30) {
    double x = x0;
    for (int i = 0; i < iters; ++i) {
        double fp = (f(x + delta) - f(x - delta)) / (2.0 * delta);
        double fpp = (f(x + delta) - 2.0 * f(x) + f(x - delta)) / (delta * delta);
        if (fpp <= 0.0 || !std::isfinite(fpp)) break;
        double step = fp / fpp;
        x -= step;
        if (std::abs(step) < 1e-13) break;
    }
    return x;
}

// Index-parallel loop; results keep their index ordering because the body
// writes to per-index slots. jobs <= 1 runs inline.
template <typename Body>
void parallel_for(int n, int jobs, Body&& body) {
    if (n <= 0) return;
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    std::atomic<int> next{0};
    for (int t = 0; t < jobs; ++t) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace gapmaps
