#include "magbill/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "magbill/errors.hpp"

namespace magbill {
namespace {

// |u|^(p-1) * sign(u), zero at u = 0.
double signed_pow_m1(double u, double p) {
    if (p == 2.0) return u;
    if (u == 0.0) return 0.0;
    return std::copysign(std::pow(std::fabs(u), p - 1.0), u);
}

constexpr double kArcTolerance = 1e-10;
constexpr int kArcMaxDepth = 40;

struct SimpsonPanel {
    double lo, mid, hi;
    double f_lo, f_mid, f_hi;
    double whole;
};

}  // namespace

double wrap_angle(double theta) {
    double w = std::fmod(theta, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

double angle_difference(double from, double to) {
    double d = std::remainder(to - from, kTwoPi);
    if (d <= -std::numbers::pi) d += kTwoPi;
    return d;
}

BoundaryCurve::BoundaryCurve(double semi_axis_a, double semi_axis_b, double power_p)
    : params_{semi_axis_a, semi_axis_b, power_p} {
    if (!(semi_axis_a > 0.0) || !(semi_axis_b > 0.0) || !std::isfinite(semi_axis_a) || !std::isfinite(semi_axis_b))
        throw InvalidGeometry("semi-axes must be positive and finite");
    if (!(power_p > 1.0) || !std::isfinite(power_p))
        throw InvalidGeometry("power must exceed 1 for a strictly convex table, got " + std::to_string(power_p));

    gradient_bound_ = power_p * std::hypot(1.0 / semi_axis_a, 1.0 / semi_axis_b);

    constexpr int kSides = 4096;
    Vec2 prev = point_at_polar(0.0);
    for (int i = 1; i <= kSides; ++i) {
        const Vec2 next = point_at_polar(kTwoPi * i / kSides);
        approx_perimeter_ += norm(next - prev);
        prev = next;
    }
}

Vec2 BoundaryCurve::gradient(Vec2 point) const {
    const double p = params_.p;
    return {p * signed_pow_m1(point.x / params_.a, p) / params_.a,
            p * signed_pow_m1(point.y / params_.b, p) / params_.b};
}

Vec2 BoundaryCurve::outward_normal(Vec2 point) const {
    const Vec2 g = gradient(point);
    const double len = norm(g);
    if (!(len >= 1e-14)) throw ZeroGradient("implicit gradient vanishes at the requested point");
    return g * (1.0 / len);
}

Vec2 BoundaryCurve::point_at_polar(double theta_pos) const {
    const double c = std::cos(theta_pos);
    const double s = std::sin(theta_pos);
    const double g = kernels::abs_pow(c / params_.a, params_.p) + kernels::abs_pow(s / params_.b, params_.p);
    const double r = params_.p == 2.0 ? 1.0 / std::sqrt(g) : std::pow(g, -1.0 / params_.p);
    return {r * c, r * s};
}

double BoundaryCurve::polar_angle_of(Vec2 point) const { return wrap_angle(std::atan2(point.y, point.x)); }

double BoundaryCurve::polar_speed(double theta_pos) const {
    const double p = params_.p;
    const double c = std::cos(theta_pos);
    const double s = std::sin(theta_pos);
    const double u = c / params_.a;
    const double v = s / params_.b;
    const double g = kernels::abs_pow(u, p) + kernels::abs_pow(v, p);
    const double r = p == 2.0 ? 1.0 / std::sqrt(g) : std::pow(g, -1.0 / p);
    // dr/dtheta = -r/g * (-|u|^(p-1) sgn(u) s/a + |v|^(p-1) sgn(v) c/b)
    const double dg = -signed_pow_m1(u, p) * s / params_.a + signed_pow_m1(v, p) * c / params_.b;
    const double dr = -r / g * dg;
    return std::hypot(r, dr);
}

double BoundaryCurve::arc_length_between(double theta_0, double theta_1) const {
    if (theta_0 == theta_1) return 0.0;
    const double span = theta_1 - theta_0;
    const int panels = std::max(1, static_cast<int>(std::ceil(std::fabs(span) / (std::numbers::pi / 16.0))));
    const double width = span / panels;
    const double panel_tol = kArcTolerance / panels;

    auto f = [this](double t) { return polar_speed(t); };
    auto make = [&](double lo, double hi, double f_lo, double f_hi) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        return SimpsonPanel{lo, mid, hi, f_lo, f_mid, f_hi, (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi)};
    };

    // Explicit stack instead of recursion; (panel, tolerance, depth).
    struct Item {
        SimpsonPanel panel;
        double tol;
        int depth;
    };
    double total = 0.0;
    std::vector<Item> stack;
    for (int k = 0; k < panels; ++k) {
        const double lo = theta_0 + k * width;
        const double hi = k + 1 == panels ? theta_1 : lo + width;
        stack.push_back({make(lo, hi, f(lo), f(hi)), panel_tol, 0});
        while (!stack.empty()) {
            const Item item = stack.back();
            stack.pop_back();
            const SimpsonPanel& P = item.panel;
            const SimpsonPanel left = make(P.lo, P.mid, P.f_lo, P.f_mid);
            const SimpsonPanel right = make(P.mid, P.hi, P.f_mid, P.f_hi);
            const double refined = left.whole + right.whole;
            const double err = refined - P.whole;
            if (std::fabs(err) <= 15.0 * item.tol) {
                total += refined + err / 15.0;
                continue;
            }
            if (item.depth >= kArcMaxDepth)
                throw QuadratureFailure("arc length did not reach tolerance 1e-10 within depth " +
                                        std::to_string(kArcMaxDepth));
            stack.push_back({right, 0.5 * item.tol, item.depth + 1});
            stack.push_back({left, 0.5 * item.tol, item.depth + 1});
        }
    }
    return total;
}

}  // namespace magbill
