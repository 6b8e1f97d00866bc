#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gapmaps/canonical.hpp"
#include "gapmaps/lift.hpp"
#include "gapmaps/sts.hpp"

using namespace gapmaps;

namespace {

Lift affine_lift(double shift) {
    return Lift(
        lift_family::custom, [shift](double u) { return u + shift; },
        [](double) { return 1.0; }, "affine");
}

} // namespace

TEST_CASE("eval respects degree-one periodicity for every family") {
    std::mt19937 rng(20240517);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    std::vector<Lift> lifts;
    lifts.push_back(make_canonical({2, 0.4, 0.7, 0.5}));
    lifts.push_back(make_canonical({5, 0.5, 0.9, 1.2}));
    lifts.push_back(sts_lift({0.4, 0.3, 0.5}));
    lifts.push_back(sts_lift({0.7, 0.15, 0.5}));
    lifts.push_back(affine_lift(0.9));
    for (const auto& L : lifts) {
        for (int i = 0; i < 100; ++i) {
            double x = unif(rng);
            CHECK(std::abs(L(x + 1.0) - L(x) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("eval canonical anchor values") {
    Lift L = make_canonical({2, 0.4, 0.7, 0.5});
    CHECK(L(0.0) == Catch::Approx(0.4).margin(1e-15));           // F_n(0) = a
    CHECK(L(1.0 - 1e-13) == Catch::Approx(1.1).margin(1e-5));    // lim = a + b
}

TEST_CASE("eval STS with constant threshold is an exact translation") {
    // alpha = 0: x -> x + beta (1 + 1/gamma)
    Lift L = sts_lift({0.0, 0.3, 0.5});
    CHECK(L(0.2) == Catch::Approx(1.1).margin(1e-12));
}

TEST_CASE("eval_derivative matches finite differences away from gaps") {
    Lift can = make_canonical({2, 0.4, 0.7, 0.5});
    CHECK(can.derivative(0.0) == Catch::Approx(0.5).margin(1e-12)); // F_n'(0) = c
    for (double x : {0.1, 0.3, 0.55, 0.8, 0.99}) {
        double fd = (can(x + 1e-7) - can(x - 1e-7)) / 2e-7;
        double d = can.derivative(x);
        CHECK(std::abs(d - fd) < std::max(1e-6, 1e-4 * std::abs(d)));
    }
    Lift flat = sts_lift({0.0, 0.4, 0.7});
    CHECK(flat.derivative(0.33) == Catch::Approx(1.0).margin(1e-12));
    Lift sts = sts_lift({0.4, 0.3, 0.5});
    for (double x : {0.05, 0.2, 0.45, 0.7, 0.9}) {
        double fd = (sts(x + 1e-7) - sts(x - 1e-7)) / 2e-7;
        double d = sts.derivative(x);
        CHECK(std::abs(d - fd) < std::max(1e-6, 1e-4 * std::abs(d)));
    }
}

TEST_CASE("rotation_number of a rigid translation is exact") {
    RotationEstimate est = rotation_number(affine_lift(2.0), 0.3, 1000);
    CHECK(est.value == Catch::Approx(2.0).margin(1e-14));
    CHECK(est.error_bound == Catch::Approx(1e-3));
    CHECK(est.monotone);
}

TEST_CASE("rotation_number hits integer plateaus of the canonical family") {
    // a = m gives rho = m for any b, c
    Lift L = make_canonical({5, 1.0, 0.9, 1.2});
    RotationEstimate est = rotation_number(L, 0.2, 10000);
    CHECK(std::abs(est.value - 1.0) <= est.error_bound + 1e-12);
}

TEST_CASE("rotation_number is reproducible across starting points") {
    StsParams p{0.4, 0.3, 0.5};
    Lift L = sts_lift(p);
    const long k = 100000;
    RotationEstimate a = rotation_number(L, 0.1, k);
    RotationEstimate b = rotation_number(L, 0.7321, k);
    CHECK(a.value >= 0.0 - a.error_bound);
    CHECK(a.value <= 1.0 + a.error_bound);
    CHECK(std::abs(a.value - b.value) < 2e-5);
}

TEST_CASE("find_periodic_orbit locates the (1,1) tongue interior orbit") {
    // Interior of the (1,1) tongue at alpha = 0.4, gamma = 0.5
    Lift L = sts_lift({0.4, 0.3, 0.5});
    auto orbit = find_periodic_orbit(L, 1, 1, 0.5);
    REQUIRE(orbit.has_value());
    CHECK(orbit->points.size() == 1);
    double x = orbit->points[0];
    CHECK(std::abs(L(x) - x - 1.0) < 1e-10);
}

TEST_CASE("find_periodic_orbit rejects a rotation without fixed points") {
    auto orbit = find_periodic_orbit(affine_lift(0.9), 1, 1, 0.0);
    CHECK_FALSE(orbit.has_value());
}

TEST_CASE("find_periodic_orbit fixed points of F_2 match a dense scan oracle") {
    auto count_roots = [](const Lift& L, int p) {
        // independent oracle: dense grid sign scan of G(x) = F(x) - x - p,
        // stopping short of the seam so the gap jump is not counted
        int n = 200000, count = 0;
        double g0 = L(0.0) - 0.0 - p;
        for (int i = 1; i < n; ++i) {
            double x = static_cast<double>(i) / n;
            double g1 = L(x) - x - p;
            if ((g0 < 0.0) != (g1 < 0.0)) ++count;
            g0 = g1;
        }
        return count;
    };

    // one fixed point between the border collisions at a=0 and a=1-b
    Lift one = make_canonical({2, 0.15, 0.7, 0.5});
    CHECK(count_roots(one, 0) == 1);
    auto orb1 = find_periodic_orbit(one, 0, 1, 0.3);
    REQUIRE(orb1.has_value());
    CHECK(orb1->multiplier < 1.0);
    CHECK(orb1->multiplier > 0.0);

    // stable + unstable pair between a=1-b and the saddle-node
    Lift two = make_canonical({2, 0.33, 0.7, 0.5});
    CHECK(count_roots(two, 0) == 2);
    std::vector<double> roots = periodic_points(two, 0, 1);
    REQUIRE(roots.size() == 2);
    double m0 = two.derivative(roots[0]);
    double m1 = two.derivative(roots[1]);
    CHECK(std::min(m0, m1) < 1.0);
    CHECK(std::max(m0, m1) > 1.0);
}

TEST_CASE("orbit and rotation estimates agree on the locked plateau") {
    Lift L = sts_lift({0.4, 0.3, 0.5});
    auto orbit = find_periodic_orbit(L, 1, 1, 0.5);
    REQUIRE(orbit.has_value());
    RotationEstimate est = rotation_number(L, 0.123, 5000);
    CHECK(std::abs(est.value - 1.0) <= est.error_bound + 1e-12);
}

TEST_CASE("locate_gaps finds the canonical seam gap with its square-root side") {
    Lift L = make_canonical({2, 0.4, 0.7, 0.5});
    auto gaps = locate_gaps(L);
    REQUIRE(gaps.size() == 1);
    const GapDescriptor& g = gaps[0];
    CHECK(g.x_gap == Catch::Approx(0.0).margin(1e-9));
    CHECK(g.left_limit == Catch::Approx(1.1).margin(1e-4));
    CHECK(g.right_limit == Catch::Approx(0.4).margin(1e-4));
    CHECK(g.size() == Catch::Approx(0.3).margin(1e-4));
    CHECK(g.singular_side == GapDescriptor::side::left);
}

TEST_CASE("locate_gaps returns nothing for continuous maps") {
    CHECK(locate_gaps(sts_lift({0.4, 0.3, 0.5})).empty());
    CHECK(locate_gaps(affine_lift(0.35)).empty());
}

TEST_CASE("locate_gaps sees three equal gaps inside the STS wedge") {
    auto gaps = locate_gaps(sts_lift({1.3, 0.358, 0.5}));
    REQUIRE(gaps.size() == 3);
    double s0 = gaps[0].size();
    for (const auto& g : gaps) CHECK(g.size() == Catch::Approx(s0).margin(1e-6));
}

TEST_CASE("rotation monotone in a for the canonical family") {
    double prev = -1.0;
    for (int i = 0; i <= 40; ++i) {
        double a = static_cast<double>(i) / 40;
        Lift L = make_canonical({2, a, 0.7, 0.5});
        double rho = rotation_number(L, 0.37, 4000, false).value;
        CHECK(rho >= prev - 1e-12);
        prev = rho;
    }
}

TEST_CASE("Lift::from_samples interpolates a sampled return map") {
    std::vector<double> y, fy;
    for (int i = 0; i <= 50; ++i) {
        double u = i / 50.0;
        y.push_back(u);
        fy.push_back(u + 0.25);
    }
    Lift L = Lift::from_samples(y, fy);
    CHECK(L(0.5) == Catch::Approx(0.75).margin(1e-12));
    CHECK(L(1.3) == Catch::Approx(1.55).margin(1e-12));
}
