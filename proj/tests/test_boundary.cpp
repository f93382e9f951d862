#include "doctest.h"

#include <cmath>
#include <numbers>

#include "magbill/boundary.hpp"
#include "magbill/errors.hpp"
#include "oracles.hpp"

using namespace magbill;
using std::numbers::pi;

namespace {

const BoundaryCurve kCircle(10, 10, 2);
const BoundaryCurve kEllipse(10, 8, 2);
const BoundaryCurve kPerturbed(10, 8, 2.005);
const BoundaryCurve kSquarish(10, 8, 4);
const BoundaryCurve kPointy(10, 8, 1.5);

}  // namespace

TEST_CASE("construction validates parameters") {
    CHECK_THROWS_AS(BoundaryCurve(0, 8, 2), InvalidGeometry);
    CHECK_THROWS_AS(BoundaryCurve(10, -1, 2), InvalidGeometry);
    CHECK_THROWS_AS(BoundaryCurve(10, 8, 1), InvalidGeometry);
    CHECK_THROWS_AS(BoundaryCurve(10, 8, std::nan("")), InvalidGeometry);
    CHECK(kPointy.low_smoothness());
    CHECK_FALSE(kEllipse.low_smoothness());
    CHECK(kCircle.is_circle());
    CHECK_FALSE(kPerturbed.is_ellipse());
}

TEST_CASE("angle helpers") {
    CHECK(wrap_angle(-0.5) == doctest::Approx(kTwoPi - 0.5));
    CHECK(wrap_angle(kTwoPi) == 0.0);
    CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - kTwoPi));
    CHECK(angle_difference(0.1, kTwoPi - 0.1) == doctest::Approx(-0.2));
    CHECK(angle_difference(kTwoPi - 0.1, 0.1) == doctest::Approx(0.2));
}

TEST_CASE("implicit value") {
    CHECK(kCircle.implicit_value({10, 0}) == 0.0);
    CHECK(kCircle.implicit_value({0, 0}) == -1.0);
    CHECK(kEllipse.implicit_value({0, 8}) == 0.0);
    CHECK(kEllipse.implicit_value({20, 0}) == doctest::Approx(3.0));
}

TEST_CASE("outward normal and tangent") {
    const Vec2 n0 = kCircle.outward_normal({10, 0});
    CHECK(n0.x == doctest::Approx(1.0));
    CHECK(n0.y == doctest::Approx(0.0));
    const Vec2 n1 = kEllipse.outward_normal({0, 8});
    CHECK(n1.x == doctest::Approx(0.0));
    CHECK(n1.y == doctest::Approx(1.0));
    const Vec2 t0 = kCircle.tangent_ccw({10, 0});
    CHECK(t0.x == doctest::Approx(0.0));
    CHECK(t0.y == doctest::Approx(1.0));
    const Vec2 t1 = kEllipse.tangent_ccw({0, 8});
    CHECK(t1.x == doctest::Approx(-1.0));
    CHECK(t1.y == doctest::Approx(0.0));

    CHECK_THROWS_AS(kEllipse.outward_normal({0, 0}), ZeroGradient);

    for (const BoundaryCurve* c : {&kEllipse, &kPerturbed, &kSquarish, &kPointy}) {
        for (const auto& z : oracle::uniform_phase_points(200, 3)) {
            const Vec2 q = c->point_at_polar(z.theta_pos);
            const Vec2 n = c->outward_normal(q);
            const Vec2 t = c->tangent_ccw(q);
            CHECK(std::fabs(dot(n, t)) <= 1e-15);
            CHECK(std::fabs(norm(n) - 1.0) <= 1e-15);
            CHECK(std::fabs(norm(t) - 1.0) <= 1e-15);
        }
    }
}

TEST_CASE("outward normal matches finite-difference gradient") {
    for (const BoundaryCurve* c : {&kEllipse, &kPerturbed, &kSquarish}) {
        double worst = 0.0;
        for (const auto& z : oracle::uniform_phase_points(1000, 11)) {
            const Vec2 q = c->point_at_polar(z.theta_pos);
            const Vec2 fd = oracle::fd_normal(c->semi_axis_a(), c->semi_axis_b(), c->power_p(), q);
            worst = std::max(worst, norm(c->outward_normal(q) - fd));
        }
        CAPTURE(c->power_p());
        CHECK(worst <= 1e-7);
    }
}

TEST_CASE("point at polar angle") {
    const Vec2 p0 = kEllipse.point_at_polar(0.0);
    CHECK(p0.x == doctest::Approx(10.0));
    CHECK(p0.y == 0.0);
    const Vec2 p1 = kEllipse.point_at_polar(pi / 2);
    CHECK(std::fabs(p1.x) <= 1e-14);
    CHECK(p1.y == doctest::Approx(8.0));
    const Vec2 p2 = kCircle.point_at_polar(pi / 4);
    CHECK(p2.x == doctest::Approx(10 / std::sqrt(2.0)));
    CHECK(p2.y == doctest::Approx(10 / std::sqrt(2.0)));

    for (const BoundaryCurve* c : {&kCircle, &kEllipse, &kPerturbed, &kSquarish, &kPointy}) {
        for (const auto& z : oracle::uniform_phase_points(1000, 5)) {
            CHECK(std::fabs(c->implicit_value(c->point_at_polar(z.theta_pos))) <= 1e-12);
        }
    }
}

TEST_CASE("polar angle of a boundary point") {
    CHECK(kCircle.polar_angle_of({10, 0}) == 0.0);
    CHECK(kEllipse.polar_angle_of({0, -8}) == doctest::Approx(3 * pi / 2));
    for (const BoundaryCurve* c : {&kEllipse, &kPerturbed, &kPointy}) {
        double worst = 0.0;
        for (const auto& z : oracle::uniform_phase_points(1000, 17)) {
            const double back = c->polar_angle_of(c->point_at_polar(z.theta_pos));
            worst = std::max(worst, std::fabs(angle_difference(z.theta_pos, back)));
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("mirror symmetry") {
    for (const BoundaryCurve* c : {&kEllipse, &kPerturbed, &kSquarish}) {
        for (const auto& z : oracle::uniform_phase_points(200, 23)) {
            const Vec2 q = c->point_at_polar(z.theta_pos);
            const Vec2 m = c->point_at_polar(pi - z.theta_pos);
            CHECK(std::fabs(m.x + q.x) <= 1e-12);
            CHECK(std::fabs(m.y - q.y) <= 1e-12);
            const Vec2 w = c->point_at_polar(-z.theta_pos);
            CHECK(std::fabs(w.x - q.x) <= 1e-12);
            CHECK(std::fabs(w.y + q.y) <= 1e-12);
        }
    }
}

TEST_CASE("strict convexity of a dense inscribed polygon") {
    for (const BoundaryCurve* c : {&kEllipse, &kPerturbed, &kSquarish, &kPointy}) {
        constexpr int n = 10000;
        std::vector<Vec2> pts(n);
        for (int k = 0; k < n; ++k) pts[k] = c->point_at_polar(kTwoPi * k / n);
        bool all_positive = true;
        for (int k = 0; k < n; ++k) {
            const Vec2 e0 = pts[(k + 1) % n] - pts[k];
            const Vec2 e1 = pts[(k + 2) % n] - pts[(k + 1) % n];
            all_positive = all_positive && cross(e0, e1) > 0.0;
        }
        CAPTURE(c->power_p());
        CHECK(all_positive);
    }
}

TEST_CASE("arc length") {
    CHECK(kCircle.arc_length_between(1.0, 1.0) == 0.0);
    CHECK(std::fabs(kCircle.arc_length_between(0, pi / 2) - 5 * pi) <= 1e-9);
    CHECK(std::fabs(kCircle.perimeter() - 20 * pi) <= 1e-9);
    CHECK(kEllipse.arc_length_between(1.0, 0.5) == doctest::Approx(-kEllipse.arc_length_between(0.5, 1.0)));

    SUBCASE("full ellipse against a 10^6-segment polygon") {
        const double polygon = oracle::polygon_length(10, 8, 2, 0, kTwoPi, 1'000'000);
        CHECK(std::fabs(kEllipse.perimeter() - polygon) <= 1e-6);
    }
    SUBCASE("perturbed table against a 10^6-segment polygon") {
        const double polygon = oracle::polygon_length(10, 8, 2.005, 0, kTwoPi, 1'000'000);
        CHECK(std::fabs(kPerturbed.perimeter() - polygon) <= 1e-6);
    }
    SUBCASE("partial arc against a polygon") {
        const double polygon = oracle::polygon_length(10, 8, 4, 0.3, 2.9, 1'000'000);
        CHECK(std::fabs(kSquarish.arc_length_between(0.3, 2.9) - polygon) <= 1e-6);
    }
    SUBCASE("additivity") {
        for (const auto& z : oracle::uniform_phase_points(50, 29)) {
            const double t0 = z.theta_pos, t1 = t0 + z.theta_vel + 2.0, t2 = t1 + 1.3;
            const double whole = kPerturbed.arc_length_between(t0, t2);
            const double parts = kPerturbed.arc_length_between(t0, t1) + kPerturbed.arc_length_between(t1, t2);
            CHECK(std::fabs(whole - parts) <= 1e-9);
        }
    }
    SUBCASE("polygon approximation is close to the perimeter") {
        CHECK(std::fabs(kEllipse.approx_perimeter() - kEllipse.perimeter()) <= 1e-3);
    }
}

TEST_CASE("quadrature depth cap for powers near one") {
    CHECK_THROWS_AS(BoundaryCurve(10, 8, 1.05).perimeter(), QuadratureFailure);
    CHECK_NOTHROW(kPointy.perimeter());
}
