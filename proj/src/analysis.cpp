#include "magbill/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "magbill/errors.hpp"

namespace magbill {
namespace {

PhasePoint probe_step(const BoundaryCurve& curve, const PhasePoint& z, const FieldParams& field, double tol) {
    if (!is_valid(z)) throw ProbeFailure("probe point leaves the phase cylinder");
    try {
        const StepResult r = billiard_step_detailed(curve, z, field, tol);
        if (r.full_loop) throw ProbeFailure("probe orbit closes a full Larmor loop");
        return r.next;
    } catch (const ProbeFailure&) {
        throw;
    } catch (const Error& e) {
        throw ProbeFailure(std::string("probe step failed: ") + e.what());
    }
}

// Signed counterclockwise arc length between two nearby boundary angles.
double short_arc(const BoundaryCurve& curve, double from, double to) {
    return curve.arc_length_between(from, from + angle_difference(from, to));
}

}  // namespace

double joachimsthal(const BoundaryCurve& curve, const BoundaryState& state) {
    const double a = curve.semi_axis_a();
    const double b = curve.semi_axis_b();
    return state.position.x * state.velocity.x / (a * a) + state.position.y * state.velocity.y / (b * b);
}

double joachimsthal_relative_spread(const BoundaryCurve& curve, std::span<const PhasePoint> points) {
    if (points.empty()) return 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double scale = 0.0;
    for (const PhasePoint& z : points) {
        const double j = joachimsthal(curve, phase_to_state(curve, z));
        lo = std::min(lo, j);
        hi = std::max(hi, j);
        scale = std::max(scale, std::fabs(j));
    }
    return (hi - lo) / std::max(scale, std::numeric_limits<double>::min());
}

double polar_angle_at_arc_offset(const BoundaryCurve& curve, double theta_0, double length) {
    double theta = theta_0 + length / curve.polar_speed(theta_0);
    for (int k = 0; k < 30; ++k) {
        const double residual = length - curve.arc_length_between(theta_0, theta);
        const double next = theta + residual / curve.polar_speed(theta);
        if (next == theta) break;
        theta = next;
        if (std::fabs(residual) <= 1e-16 * std::max(1.0, std::fabs(length))) break;
    }
    return theta;
}

SymplecticProbe symplectic_defect(const BoundaryCurve& curve, const PhasePoint& z, const FieldParams& field,
                                  double fd_step, double tol) {
    if (!(fd_step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    const double h = fd_step;

    const PhasePoint image = probe_step(curve, z, field, tol);
    const PhasePoint s_plus =
        probe_step(curve, {wrap_angle(polar_angle_at_arc_offset(curve, z.theta_pos, h)), z.theta_vel}, field, tol);
    const PhasePoint s_minus =
        probe_step(curve, {wrap_angle(polar_angle_at_arc_offset(curve, z.theta_pos, -h)), z.theta_vel}, field, tol);
    const PhasePoint phi_plus = probe_step(curve, {z.theta_pos, z.theta_vel + h}, field, tol);
    const PhasePoint phi_minus = probe_step(curve, {z.theta_pos, z.theta_vel - h}, field, tol);

    const double ds_ds = short_arc(curve, s_minus.theta_pos, s_plus.theta_pos) / (2.0 * h);
    const double dphi_ds = (s_plus.theta_vel - s_minus.theta_vel) / (2.0 * h);
    const double ds_dphi = short_arc(curve, phi_minus.theta_pos, phi_plus.theta_pos) / (2.0 * h);
    const double dphi_dphi = (phi_plus.theta_vel - phi_minus.theta_vel) / (2.0 * h);

    const double det = ds_ds * dphi_dphi - ds_dphi * dphi_ds;
    SymplecticProbe probe;
    probe.base_point = z;
    probe.fd_step = h;
    probe.defect = std::fabs(det * std::cos(image.theta_vel) / std::cos(z.theta_vel) - 1.0);
    return probe;
}

double reversibility_defect(const BoundaryCurve& curve, const PhasePoint& z, const FieldParams& field,
                            std::size_t n_steps, double tol) {
    PhasePoint w = z;
    for (std::size_t k = 0; k < n_steps; ++k) w = probe_step(curve, w, field, tol);
    w.theta_vel = -w.theta_vel;
    const FieldParams back = field.reversed();
    for (std::size_t k = 0; k < n_steps; ++k) w = probe_step(curve, w, back, tol);
    w.theta_vel = -w.theta_vel;
    return std::max(std::fabs(angle_difference(z.theta_pos, w.theta_pos)), std::fabs(w.theta_vel - z.theta_vel));
}

PhasePoint circle_field_oracle(double table_radius, const FieldParams& field, const PhasePoint& z) {
    if (field.is_zero()) throw std::invalid_argument("circle_field_oracle requires a non-zero field");
    const double R = table_radius;
    const double r = field.larmor_radius();
    const double sigma = field.orientation();

    const Vec2 n{std::cos(z.theta_pos), std::sin(z.theta_pos)};
    const Vec2 start = R * n;
    const Vec2 v = std::cos(z.theta_vel) * (-n) + std::sin(z.theta_vel) * perp(n);
    const Vec2 center = start + (sigma * r) * perp(v);

    // Radical line of |x| = R and |x - c| = r.
    const double d = norm(center);
    if (!(d > 1e-12 * R)) throw NoSecondIntersection("Larmor circle is concentric with the table");
    const double along = (R * R - r * r + d * d) / (2.0 * d);
    const double h2 = (R - along) * (R + along);
    if (!(h2 > 1e-18 * R * R)) throw NoSecondIntersection("Larmor circle touches the table in a single point");
    // The two intersections are mirror images across the line of centers;
    // one of them is the start point.
    const Vec2 u = center * (1.0 / d);
    const Vec2 q = (2.0 * dot(start, u)) * u - start;

    const Vec2 arrival = (sigma / r) * perp(q - center);
    const Vec2 n_out = q * (1.0 / R);
    const Vec2 out = reflect(arrival, n_out);
    return {wrap_angle(std::atan2(q.y, q.x)), std::atan2(dot(out, perp(n_out)), -dot(out, n_out))};
}

}  // namespace magbill
