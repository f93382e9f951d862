#pragma once

#include <numbers>

#include "magbill/boundary.hpp"
#include "magbill/vec2.hpp"

namespace magbill {

inline constexpr double kDefaultTolerance = 1e-9;

/// Discrete phase-space coordinates: polar angle of the reflection point and
/// outgoing angle measured from the inward normal, positive toward the
/// counterclockwise tangent.
struct PhasePoint {
    double theta_pos = 0.0;
    double theta_vel = 0.0;

    bool operator==(const PhasePoint&) const = default;
};

/// True if theta_pos lies in [0, 2*pi) and |theta_vel| < pi/2.
bool is_valid(const PhasePoint& z);

/// Euclidean form of a phase point: position on the boundary and unit
/// outgoing velocity pointing into the table.
struct BoundaryState {
    Vec2 position;
    Vec2 velocity;
};

/// Uniform magnetic field. B > 0 turns the particle counterclockwise on a
/// Larmor circle of radius 1/|B|; B = 0 gives straight chords.
class FieldParams {
public:
    constexpr FieldParams() = default;
    constexpr explicit FieldParams(double strength) : strength_(strength) {}

    constexpr double strength() const { return strength_; }
    constexpr bool is_zero() const { return strength_ == 0.0; }
    /// +1 counterclockwise, -1 clockwise, 0 without field.
    constexpr int orientation() const { return strength_ > 0.0 ? 1 : (strength_ < 0.0 ? -1 : 0); }
    /// 1/|B|; infinite for B = 0.
    double larmor_radius() const;
    constexpr FieldParams reversed() const { return FieldParams(-strength_); }

private:
    double strength_ = 0.0;
};

BoundaryState phase_to_state(const BoundaryCurve& curve, const PhasePoint& z);

/// Throws VelocityOutOfRange if the velocity does not point into the table.
PhasePoint state_to_phase(const BoundaryCurve& curve, const BoundaryState& s);

/// Specular reflection: keeps the tangential component, flips the normal one.
constexpr Vec2 reflect(Vec2 v_in, Vec2 n) { return v_in - (2.0 * dot(v_in, n)) * n; }

/// Next boundary crossing along a trajectory leaving a boundary state.
struct HitResult {
    Vec2 point;             ///< crossing point (not re-projected)
    Vec2 arrival_velocity;  ///< unit tangent of the trajectory at the crossing
    double path_length = 0.0;
    double residual = 0.0;  ///< |F(point)|
    bool full_loop = false; ///< no crossing on the whole Larmor circle
};

/// Straight chord. Throws RootFindFailure or DegenerateTangency.
HitResult next_hit_line(const BoundaryCurve& curve, const BoundaryState& s, double tol = kDefaultTolerance);

/// Larmor arc; requires a non-zero field. Throws RootFindFailure or DegenerateTangency.
HitResult next_hit_arc(const BoundaryCurve& curve, const BoundaryState& s, const FieldParams& field,
                       double tol = kDefaultTolerance);

struct StepResult {
    PhasePoint next;
    Vec2 hit_point;
    double residual = 0.0;
    bool full_loop = false;
};

/// One application of the billiard map with diagnostics.
StepResult billiard_step_detailed(const BoundaryCurve& curve, const PhasePoint& z, const FieldParams& field,
                                  double tol = kDefaultTolerance);

inline PhasePoint billiard_step(const BoundaryCurve& curve, const PhasePoint& z, const FieldParams& field,
                                double tol = kDefaultTolerance) {
    return billiard_step_detailed(curve, z, field, tol).next;
}

}  // namespace magbill
