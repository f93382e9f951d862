#pragma once

#include <numbers>

#include "magbill/kernels.hpp"
#include "magbill/vec2.hpp"

namespace magbill {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps any angle to [0, 2*pi).
double wrap_angle(double theta);

/// Signed angular difference to - from, mapped to (-pi, pi].
double angle_difference(double from, double to);

/// The superellipse table boundary |x/a|^p + |y/b|^p = 1.
///
/// The curve is star-shaped about the origin, so points are addressed by
/// their polar angle. Powers in (1, 2) give a boundary that is only C^1 on
/// the axes; such curves are accepted but report low_smoothness().
class BoundaryCurve {
public:
    /// Throws InvalidGeometry unless a > 0, b > 0 and p > 1.
    BoundaryCurve(double semi_axis_a, double semi_axis_b, double power_p);

    double semi_axis_a() const { return params_.a; }
    double semi_axis_b() const { return params_.b; }
    double power_p() const { return params_.p; }
    const kernels::ImplicitParams& params() const { return params_; }

    bool low_smoothness() const { return params_.p < 2.0; }
    bool is_ellipse() const { return params_.p == 2.0; }
    bool is_circle() const { return is_ellipse() && params_.a == params_.b; }

    /// F(x, y) = |x/a|^p + |y/b|^p - 1; negative strictly inside.
    double implicit_value(Vec2 point) const { return kernels::implicit_value(params_, point.x, point.y); }

    Vec2 gradient(Vec2 point) const;

    /// Unit outward normal. Throws ZeroGradient if |grad F| < 1e-14.
    Vec2 outward_normal(Vec2 point) const;

    /// Outward normal rotated a quarter turn counterclockwise.
    Vec2 tangent_ccw(Vec2 point) const { return perp(outward_normal(point)); }

    Vec2 point_at_polar(double theta_pos) const;
    double polar_angle_of(Vec2 point) const;

    /// |d Sigma / d theta| for the polar parametrization.
    double polar_speed(double theta_pos) const;

    /// Signed counterclockwise arc length from theta_0 to theta_1 (adaptive
    /// Simpson, absolute tolerance 1e-10). Throws QuadratureFailure.
    double arc_length_between(double theta_0, double theta_1) const;

    /// Full perimeter by quadrature.
    double perimeter() const { return arc_length_between(0.0, kTwoPi); }

    /// Perimeter of a 4096-gon inscribed in the curve; a cheap length scale.
    double approx_perimeter() const { return approx_perimeter_; }

    /// Upper bound of |grad F| over the closed table.
    double gradient_bound() const { return gradient_bound_; }

private:
    kernels::ImplicitParams params_;
    double approx_perimeter_ = 0.0;
    double gradient_bound_ = 0.0;
};

}  // namespace magbill
