#pragma once

#include <span>

#include "magbill/boundary.hpp"
#include "magbill/ensemble.hpp"
#include "magbill/stepper.hpp"

namespace magbill {

/// Joachimsthal quantity <A x, v> with A = diag(1/a^2, 1/b^2), evaluated for
/// the outgoing velocity. Conserved by the field-free ellipse billiard.
double joachimsthal(const BoundaryCurve& curve, const BoundaryState& state);

/// (max J - min J) / max |J| over the phase points of one orbit.
double joachimsthal_relative_spread(const BoundaryCurve& curve, std::span<const PhasePoint> points);

struct SymplecticProbe {
    PhasePoint base_point;
    double fd_step = 1e-5;
    double defect = 0.0;
};

/// Central-difference Jacobian of the billiard map in (arc length, theta_vel)
/// coordinates; defect = |det J * cos(phi') / cos(phi) - 1|. Arc length is
/// counted counterclockwise from polar angle 0. Throws ProbeFailure.
SymplecticProbe symplectic_defect(const BoundaryCurve& curve, const PhasePoint& z, const FieldParams& field,
                                  double fd_step = 1e-5, double tol = kDefaultTolerance);

/// Forward n steps, reverse velocity and field, n steps back, reverse velocity;
/// returns the larger coordinate distance to the start. Throws ProbeFailure.
double reversibility_defect(const BoundaryCurve& curve, const PhasePoint& z, const FieldParams& field,
                            std::size_t n_steps, double tol = kDefaultTolerance);

/// Next phase point on a circular table of the given radius, computed by
/// intersecting the table and Larmor circles algebraically. Independent of
/// the stepper's root finder. Throws NoSecondIntersection.
PhasePoint circle_field_oracle(double table_radius, const FieldParams& field, const PhasePoint& z);

/// Solves arc_length_between(theta_0, theta) = length for theta near theta_0.
double polar_angle_at_arc_offset(const BoundaryCurve& curve, double theta_0, double length);

}  // namespace magbill
