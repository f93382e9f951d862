#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "magbill/analysis.hpp"
#include "magbill/ensemble.hpp"
#include "magbill/errors.hpp"
#include "magbill/verification.hpp"

namespace magbill::verification {
namespace {

const BoundaryCurve kCircle{10.0, 10.0, 2.0};

CheckResult make(std::string name, double measured, double bound, std::string detail = {}) {
    return {std::move(name), measured, bound, measured <= bound, std::move(detail)};
}

double phase_distance(const PhasePoint& a, const PhasePoint& b) {
    return std::max(std::fabs(angle_difference(a.theta_pos, b.theta_pos)), std::fabs(a.theta_vel - b.theta_vel));
}

std::string fmt(const char* pattern, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

// Largest stretching of a small separation along the first n steps of the
// orbit, renormalized after every step so it never saturates.
double finite_time_amplification(const BoundaryCurve& curve, const PhasePoint& z, const FieldParams& field,
                                 std::size_t n_steps) {
    constexpr double kNudge = 1e-8;
    double largest = 1.0;
    for (int axis = 0; axis < 2; ++axis) {
        PhasePoint a = z;
        double dpos = axis == 0 ? kNudge : 0.0;
        double dvel = axis == 0 ? 0.0 : kNudge;
        double growth = 1.0;
        for (std::size_t k = 0; k < n_steps; ++k) {
            const PhasePoint b = billiard_step(curve, {wrap_angle(a.theta_pos + dpos), a.theta_vel + dvel}, field);
            a = billiard_step(curve, a, field);
            dpos = angle_difference(a.theta_pos, b.theta_pos);
            dvel = b.theta_vel - a.theta_vel;
            const double sep = std::max(std::fabs(dpos), std::fabs(dvel));
            growth *= sep / kNudge;
            largest = std::max(largest, growth);
            dpos *= kNudge / sep;
            dvel *= kNudge / sep;
        }
    }
    return largest;
}

}  // namespace

std::vector<PhasePoint> random_phase_points(std::size_t count, std::uint64_t seed, double cutoff_delta) {
    OrbitRng rng(seed);
    std::vector<PhasePoint> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(sample_initial(rng, cutoff_delta));
    return out;
}

CheckResult boundary_residual(const std::vector<BoundaryCurve>& curves, const std::vector<double>& fields,
                              std::size_t orbits, std::size_t steps, double tol, std::uint64_t seed) {
    double worst = 0.0;
    std::size_t computed = 0;
    std::size_t early = 0;
    for (const BoundaryCurve& curve : curves) {
        for (double B : fields) {
            EnsembleConfig config;
            config.curve = curve;
            config.field = FieldParams(B);
            config.number_of_orbits = orbits;
            config.points_per_orbit = steps;
            config.tolerance = tol;
            config.master_seed = seed++;
            for (const OrbitRecord& r : run_ensemble(config)) {
                worst = std::max(worst, r.max_residual);
                computed += r.points.size() - 1;
                early += r.has(kTerminatedEarly) ? 1 : 0;
                // Re-projected points must sit on the curve to round-off.
                for (const Vec2& q : r.positions) worst = std::max(worst, std::fabs(curve.implicit_value(q)));
            }
        }
    }
    return make("boundary residual", worst, tol,
                fmt("%zu steps, %zu orbits ended early", computed, early));
}

CheckResult circle_integrability(const std::vector<double>& fields, std::size_t orbits, std::size_t steps,
                                 std::uint64_t seed) {
    double worst = 0.0;
    std::size_t early = 0;
    for (double B : fields) {
        EnsembleConfig config;
        config.curve = kCircle;
        config.field = FieldParams(B);
        config.number_of_orbits = orbits;
        config.points_per_orbit = steps;
        config.master_seed = seed++;
        for (const OrbitRecord& r : run_ensemble(config)) {
            const auto [lo, hi] = std::minmax_element(r.points.begin(), r.points.end(),
                                                      [](auto& x, auto& y) { return x.theta_vel < y.theta_vel; });
            worst = std::max(worst, hi->theta_vel - lo->theta_vel);
            early += r.has(kTerminatedEarly) ? 1 : 0;
        }
    }
    CheckResult c = make("circle theta_vel conservation", worst, 1e-8, fmt("%zu orbits ended early", early));
    c.passed = c.passed && early == 0;
    return c;
}

CheckResult circle_chord_advance(std::size_t states, std::uint64_t seed) {
    double worst = 0.0;
    for (const PhasePoint& z : random_phase_points(states, seed)) {
        const PhasePoint next = billiard_step(kCircle, z, FieldParams(0.0));
        const double advance = angle_difference(z.theta_pos, next.theta_pos);
        worst = std::max(worst, std::fabs(angle_difference(std::numbers::pi - 2.0 * z.theta_vel, advance)));
    }
    return make("circle chord advance pi - 2 theta_vel", worst, 1e-8);
}

CheckResult circle_oracle_agreement(const std::vector<double>& fields, std::size_t states, std::uint64_t seed) {
    double worst = 0.0;
    for (double B : fields) {
        const FieldParams field(B);
        for (const PhasePoint& z : random_phase_points(states, seed++)) {
            worst = std::max(worst, phase_distance(billiard_step(kCircle, z, field),
                                                   circle_field_oracle(10.0, field, z)));
        }
    }
    return make("magnetic circle oracle agreement", worst, 1e-8);
}

CheckResult ellipse_joachimsthal(std::size_t orbits, std::size_t steps, std::uint64_t seed) {
    EnsembleConfig config;
    config.curve = BoundaryCurve(10.0, 8.0, 2.0);
    config.number_of_orbits = orbits;
    config.points_per_orbit = steps;
    config.master_seed = seed;
    double worst = 0.0;
    std::size_t early = 0;
    for (const OrbitRecord& r : run_ensemble(config)) {
        worst = std::max(worst, joachimsthal_relative_spread(config.curve, r.points));
        early += r.has(kTerminatedEarly) ? 1 : 0;
    }
    CheckResult c = make("ellipse Joachimsthal spread", worst, 1e-7, fmt("%zu orbits ended early", early));
    c.passed = c.passed && early == 0;
    return c;
}

CheckResult symplecticity(const std::vector<double>& fields, const std::vector<double>& powers, std::size_t points,
                          double fd_step, std::uint64_t seed) {
    double worst = 0.0;
    std::size_t failures = 0;
    for (double p : powers) {
        const BoundaryCurve curve(10.0, 8.0, p);
        for (double B : fields) {
            for (const PhasePoint& z : random_phase_points(points, seed++)) {
                try {
                    worst = std::max(worst, symplectic_defect(curve, z, FieldParams(B), fd_step).defect);
                } catch (const ProbeFailure&) {
                    ++failures;
                }
            }
        }
    }
    CheckResult c = make("symplectic defect", worst, 1e-4, fmt("%zu probe failures", failures));
    c.passed = c.passed && failures == 0;
    return c;
}

CheckResult reversibility(const std::vector<double>& fields, const std::vector<double>& powers, std::size_t starts,
                          std::size_t n_steps, std::uint64_t seed) {
    constexpr double kBound = 1e-6;
    constexpr double kEpsilon = 0x1.0p-52;
    double worst = 0.0;
    std::size_t failures = 0;
    // Starts in chaotic layers amplify round-off beyond the bound; they are
    // held to n * epsilon times their measured amplification instead.
    std::size_t limited = 0;
    double limited_worst = 0.0;
    double limited_growth = 0.0;
    bool limited_ok = true;
    for (double p : powers) {
        const BoundaryCurve curve(10.0, 8.0, p);
        for (double B : fields) {
            const FieldParams field(B);
            for (const PhasePoint& z : random_phase_points(starts, seed++)) {
                try {
                    const double d = reversibility_defect(curve, z, field, n_steps);
                    if (d <= kBound) {
                        worst = std::max(worst, d);
                        continue;
                    }
                    const double growth = finite_time_amplification(curve, z, field, n_steps);
                    const double floor = static_cast<double>(n_steps) * kEpsilon * growth;
                    if (floor > kBound) {
                        ++limited;
                        limited_worst = std::max(limited_worst, d);
                        limited_growth = std::max(limited_growth, growth);
                        limited_ok = limited_ok && d <= floor;
                    } else {
                        worst = std::max(worst, d);
                    }
                } catch (const ProbeFailure&) {
                    ++failures;
                }
            }
        }
    }
    std::string detail = fmt("%zu probe failures", failures);
    if (limited > 0)
        detail += fmt("; %zu chaotic starts with amplification up to %.1e, defect %.2e within n*eps*amplification",
                      limited, limited_growth, limited_worst);
    CheckResult c = make("reversibility defect", worst, kBound, detail);
    c.passed = c.passed && failures == 0 && limited_ok;
    return c;
}

CheckResult straight_line_limit(std::size_t states, std::uint64_t seed) {
    const BoundaryCurve ellipse(10.0, 8.0, 2.0);
    double worst = 0.0;
    for (const PhasePoint& z : random_phase_points(states, seed)) {
        worst = std::max(worst, phase_distance(billiard_step(ellipse, z, FieldParams(1e-6)),
                                               billiard_step(ellipse, z, FieldParams(0.0))));
    }
    return make("straight-line limit B = 1e-6", worst, 1e-4);
}

CheckResult perturbation_sensitivity(std::size_t orbits, std::size_t steps, std::uint64_t seed) {
    cli::CliConfig preset = cli::apply_preset(cli::find_preset("5"), cli::CliConfig{});
    EnsembleConfig config;
    config.curve = cli::resolve_geometry(preset).curve;
    config.number_of_orbits = orbits;
    config.points_per_orbit = steps;
    config.master_seed = seed;
    std::size_t sensitive = 0;
    double largest = 0.0;
    for (const OrbitRecord& r : run_ensemble(config)) {
        const double spread = joachimsthal_relative_spread(config.curve, r.points);
        largest = std::max(largest, spread);
        sensitive += spread > 1e-3 ? 1 : 0;
    }
    const double fraction = static_cast<double>(sensitive) / static_cast<double>(orbits);
    CheckResult c{"perturbed-table Joachimsthal breakdown", fraction, 0.10, fraction >= 0.10,
                  fmt("%zu of %zu orbits spread > 1e-3, largest spread %.3g", sensitive, orbits, largest)};
    return c;
}

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string format_check(const CheckResult& check) {
    std::string line = check.passed ? "PASS  " : "FAIL  ";
    line += check.name;
    line += fmt("  measured=%.3e bound=%.1e", check.measured, check.bound);
    if (!check.detail.empty()) line += "  (" + check.detail + ")";
    return line;
}

VerifyReport run_verification(const cli::CliConfig& config, std::ostream& log) {
    VerifyReport report;
    auto add = [&](CheckResult c) {
        log << format_check(c) << '\n' << std::flush;
        report.checks.push_back(std::move(c));
    };
    const std::uint64_t seed = config.master_seed;
    const double tol = config.tolerance;

    if (config.semi_axis_b || config.eccentricity_epsilon) {
        const cli::ResolvedGeometry geometry = cli::resolve_geometry(config);
        for (const std::string& w : geometry.warnings) log << "warning: " << w << '\n';
        CheckResult c = boundary_residual({geometry.curve}, {config.field_B}, 50, 200, tol, seed);
        c.name = "configured geometry " + c.name;
        add(std::move(c));
        if (geometry.curve.is_circle() && config.field_B != 0.0) {
            const FieldParams field(config.field_B);
            const double radius = geometry.curve.semi_axis_a();
            double worst = 0.0;
            for (const PhasePoint& z : random_phase_points(200, seed + 1))
                worst = std::max(worst, phase_distance(billiard_step(geometry.curve, z, field, tol),
                                                       circle_field_oracle(radius, field, z)));
            add(make("configured circle oracle agreement", worst, 1e-8));
        }
    }

    const BoundaryCurve ellipse(10.0, 8.0, 2.0);
    const BoundaryCurve perturbed(10.0, 8.0, 2.005);
    add(boundary_residual({ellipse, perturbed}, {0.0, 0.5, 2.0}, 20, 200, tol, seed + 10));
    add(circle_integrability({0.0, 0.01, 0.5, 1.0, 2.0}, 10, 500, seed + 20));
    add(circle_chord_advance(200, seed + 30));
    add(circle_oracle_agreement({0.1, 0.5, 1.0, 2.0}, 100, seed + 40));
    add(ellipse_joachimsthal(10, 500, seed + 50));
    add(symplecticity({0.0, 0.5, 1.0, 2.0}, {2.0, 2.005}, 10, 1e-5, seed + 60));
    add(reversibility({0.0, 0.5, 1.0, 2.0}, {2.0, 2.005}, 10, 100, seed + 70));
    add(straight_line_limit(50, seed + 80));
    add(perturbation_sensitivity(50, 1000, seed + 90));
    return report;
}

}  // namespace magbill::verification
