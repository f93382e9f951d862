#pragma once
// Invariant checks shared by `magbill verify` and the acceptance suite. Each
// check is sized by its arguments so the same code runs at desk scale and at
// full acceptance scale.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "magbill/boundary.hpp"
#include "magbill/cli.hpp"
#include "magbill/stepper.hpp"

namespace magbill::verification {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool passed = false;
    std::string detail;
};

std::vector<PhasePoint> random_phase_points(std::size_t count, std::uint64_t seed, double cutoff_delta = 0.01);

/// Largest crossing residual |F| over whole ensembles, one per (curve, field).
CheckResult boundary_residual(const std::vector<BoundaryCurve>& curves, const std::vector<double>& fields,
                              std::size_t orbits, std::size_t steps, double tol, std::uint64_t seed);

/// Largest per-orbit theta_vel range on the radius-10 circle.
CheckResult circle_integrability(const std::vector<double>& fields, std::size_t orbits, std::size_t steps,
                                 std::uint64_t seed);

/// theta_pos advance versus pi - 2 theta_vel on the field-free circle.
CheckResult circle_chord_advance(std::size_t states, std::uint64_t seed);

/// billiard_step versus circle_field_oracle on the radius-10 circle.
CheckResult circle_oracle_agreement(const std::vector<double>& fields, std::size_t states, std::uint64_t seed);

/// Largest relative Joachimsthal spread on the 10 x 8 ellipse without field.
CheckResult ellipse_joachimsthal(std::size_t orbits, std::size_t steps, std::uint64_t seed);

/// Largest symplectic defect over the (B, p) grid on 10 x 8 tables.
CheckResult symplecticity(const std::vector<double>& fields, const std::vector<double>& powers, std::size_t points,
                          double fd_step, std::uint64_t seed);

/// Largest reversibility defect over the (B, p) grid on 10 x 8 tables.
CheckResult reversibility(const std::vector<double>& fields, const std::vector<double>& powers, std::size_t starts,
                          std::size_t n_steps, std::uint64_t seed);

/// Phase-space distance between B = 1e-6 arc steps and B = 0 line steps.
CheckResult straight_line_limit(std::size_t states, std::uint64_t seed);

/// Fraction of orbits whose Joachimsthal spread exceeds 1e-3 on the
/// p = 2.005 preset geometry; passes at >= 10%.
CheckResult perturbation_sensitivity(std::size_t orbits, std::size_t steps, std::uint64_t seed);

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool passed() const;
};

/// Desk-scale run of every check, plus residual and oracle checks for the
/// configured geometry when one is given. Prints one line per check.
VerifyReport run_verification(const cli::CliConfig& config, std::ostream& log);

std::string format_check(const CheckResult& check);

}  // namespace magbill::verification
