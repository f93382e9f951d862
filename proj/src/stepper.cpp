#include "magbill/stepper.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "magbill/errors.hpp"
#include "magbill/kernels.hpp"

namespace magbill {
namespace {

// Root-finding scheme along a unit-speed trajectory x(t):
//   exclusion window   t_excl = 1e-6 * L
//   coarse march       h0 = L / 64, evaluated in SIMD blocks
//   bracket refinement bisection to 1e-12 * L, then <= 5 Newton steps
//   grazing resolution halving down to 1e-6 * L between negative samples
constexpr double kExclusionFraction = 1e-6;
constexpr double kMarchDivisions = 64.0;
constexpr double kBracketFraction = 1e-12;
constexpr double kGrazeFraction = 1e-6;
constexpr int kMaxRefineIterations = 200;
constexpr int kMaxNewton = 5;
constexpr long kMaxEvaluations = 2'000'000;
constexpr std::size_t kBlock = 16;
constexpr double kTangencyMargin = 1e-12;

struct LinePath {
    Vec2 origin;
    Vec2 dir;

    Vec2 position(double t) const { return origin + t * dir; }
    Vec2 velocity(double) const { return dir; }
    double curvature() const { return 0.0; }

    void sample(const kernels::ImplicitParams& c, std::span<const double> ts, std::span<double> out) const {
        kernels::line_implicit_values(c, origin.x, origin.y, dir.x, dir.y, ts, out);
    }
};

// Larmor circle through origin with initial unit velocity dir, turning toward
// side (= orientation * perp(dir)). Written relative to the start point so that
// huge radii lose no precision.
struct ArcPath {
    Vec2 origin;
    Vec2 dir;
    Vec2 side;
    double radius;

    Vec2 position(double t) const {
        const double angle = t / radius;
        const double half = std::sin(0.5 * angle);
        return origin + (radius * std::sin(angle)) * dir + (2.0 * radius * half * half) * side;
    }
    Vec2 velocity(double t) const {
        const double angle = t / radius;
        return std::cos(angle) * dir + std::sin(angle) * side;
    }
    double curvature() const { return 1.0 / radius; }

    void sample(const kernels::ImplicitParams& c, std::span<const double> ts, std::span<double> out) const {
        std::array<double, kBlock> xs{};
        std::array<double, kBlock> ys{};
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const Vec2 q = position(ts[i]);
            xs[i] = q.x;
            ys[i] = q.y;
        }
        kernels::implicit_values(c, std::span(xs).first(ts.size()), std::span(ys).first(ts.size()), out);
    }
};

struct Sample {
    double t;
    double f;
};

struct Bracket {
    Sample lo;  // f < 0
    Sample hi;  // f >= 0
};

template <class Path>
class CrossingSearch {
public:
    CrossingSearch(const BoundaryCurve& curve, const Path& path, double length_scale, bool convex_along_path)
        : curve_(curve),
          path_(path),
          scale_(length_scale),
          convex_(convex_along_path),
          lipschitz_(curve.gradient_bound()),
          h_min_(kGrazeFraction * length_scale) {
        const double p = curve.power_p();
        if (p >= 2.0) {
            const double inv_min = 1.0 / std::min(curve.semi_axis_a(), curve.semi_axis_b());
            curvature_bound_ = p * (p - 1.0) * inv_min * inv_min + lipschitz_ * path.curvature();
        }
    }

    // First t in (t_excl, horizon] with F(x(t)) = 0, if any.
    std::optional<double> first_root(double horizon) {
        const double t_excl = kExclusionFraction * scale_;
        Sample prev{t_excl, eval(t_excl)};
        if (!(prev.f < 0.0))
            throw DegenerateTangency("trajectory leaves the table inside the exclusion window");

        const double h0 = scale_ / kMarchDivisions;
        std::array<double, kBlock> ts{};
        std::array<double, kBlock> fs{};
        while (prev.t < horizon) {
            std::size_t n = 0;
            while (n < kBlock) {
                const double t = std::min(prev.t + static_cast<double>(n + 1) * h0, horizon);
                ts[n++] = t;
                if (t >= horizon) break;
            }
            path_.sample(curve_.params(), std::span(ts).first(n), std::span(fs).first(n));
            evaluations_ += static_cast<long>(n);
            for (std::size_t i = 0; i < n; ++i) {
                const Sample next{ts[i], fs[i]};
                if (next.f >= 0.0) return refine({prev, next});
                if (!convex_) {
                    if (auto inner = scan(prev, next)) return refine(*inner);
                }
                prev = next;
            }
            guard();
        }
        return std::nullopt;
    }

    long evaluations() const { return evaluations_; }

private:
    double eval(double t) {
        ++evaluations_;
        return curve_.implicit_value(path_.position(t));
    }

    double slope(double t) const { return dot(curve_.gradient(path_.position(t)), path_.velocity(t)); }

    void guard() const {
        if (evaluations_ > kMaxEvaluations)
            throw RootFindFailure("boundary crossing not bracketed within the evaluation budget");
    }

    // Proves [a, b] (both ends strictly inside) crossing-free, or halves it.
    // Shorter unresolved pieces are treated as tangential touches.
    std::optional<Bracket> scan(Sample a, Sample b) {
        const double w = b.t - a.t;
        if (-a.f - b.f >= lipschitz_ * w) return std::nullopt;
        if (curvature_bound_ < std::numeric_limits<double>::infinity()) {
            const double bend = 0.5 * curvature_bound_ * w * w;
            if (a.f + slope(a.t) * w + bend < 0.0 || b.f - slope(b.t) * w + bend < 0.0) return std::nullopt;
        }
        if (w < h_min_) return std::nullopt;
        guard();
        const Sample mid{0.5 * (a.t + b.t), eval(0.5 * (a.t + b.t))};
        if (mid.f >= 0.0) return Bracket{a, mid};
        if (auto left = scan(a, mid)) return left;
        return scan(mid, b);
    }

    double refine(Bracket br) {
        const double width_goal = kBracketFraction * scale_;
        int iterations = 0;
        while (br.hi.t - br.lo.t > width_goal && iterations < kMaxRefineIterations) {
            const double m = 0.5 * (br.lo.t + br.hi.t);
            if (m <= br.lo.t || m >= br.hi.t) break;
            const Sample mid{m, eval(m)};
            ++iterations;
            if (mid.f >= 0.0)
                br.hi = mid;
            else
                br.lo = mid;
        }
        Sample best = std::fabs(br.lo.f) < std::fabs(br.hi.f) ? br.lo : br.hi;
        Sample cur = best;
        for (int k = 0; k < kMaxNewton && iterations < kMaxRefineIterations; ++k, ++iterations) {
            const double d = slope(cur.t);
            if (!(d != 0.0) || cur.f == 0.0) break;
            const double t = cur.t - cur.f / d;
            if (!(t >= br.lo.t && t <= br.hi.t)) break;
            cur = Sample{t, eval(t)};
            if (std::fabs(cur.f) < std::fabs(best.f)) best = cur;
        }
        return best.t;
    }

    const BoundaryCurve& curve_;
    const Path& path_;
    double scale_;
    bool convex_;
    double lipschitz_;
    double h_min_;
    double curvature_bound_ = std::numeric_limits<double>::infinity();
    long evaluations_ = 0;
};

template <class Path>
HitResult finish(const BoundaryCurve& curve, const Path& path, double t, double tol) {
    HitResult hit;
    hit.point = path.position(t);
    hit.arrival_velocity = normalized(path.velocity(t));
    hit.path_length = t;
    hit.residual = std::fabs(curve.implicit_value(hit.point));
    if (!(hit.residual <= tol))
        throw RootFindFailure("boundary residual " + std::to_string(hit.residual) + " exceeds tolerance");
    return hit;
}

}  // namespace

bool is_valid(const PhasePoint& z) {
    return z.theta_pos >= 0.0 && z.theta_pos < kTwoPi && std::fabs(z.theta_vel) < 0.5 * std::numbers::pi;
}

double FieldParams::larmor_radius() const {
    return is_zero() ? std::numeric_limits<double>::infinity() : 1.0 / std::fabs(strength_);
}

BoundaryState phase_to_state(const BoundaryCurve& curve, const PhasePoint& z) {
    const Vec2 position = curve.point_at_polar(z.theta_pos);
    const Vec2 n = curve.outward_normal(position);
    const Vec2 t = perp(n);
    return {position, std::cos(z.theta_vel) * (-n) + std::sin(z.theta_vel) * t};
}

PhasePoint state_to_phase(const BoundaryCurve& curve, const BoundaryState& s) {
    const Vec2 n = curve.outward_normal(s.position);
    const double normal_part = dot(s.velocity, n);
    if (!(normal_part < 0.0)) throw VelocityOutOfRange("velocity does not point into the table");
    return {curve.polar_angle_of(s.position), std::atan2(dot(s.velocity, perp(n)), -normal_part)};
}

HitResult next_hit_line(const BoundaryCurve& curve, const BoundaryState& s, double tol) {
    const double scale = std::min(curve.approx_perimeter(), 4.0 * std::max(curve.semi_axis_a(), curve.semi_axis_b()));
    const LinePath path{s.position, s.velocity};
    // F is convex along a straight line, so the first sign change is the exit.
    CrossingSearch<LinePath> search(curve, path, scale, true);
    const double horizon = 2.5 * std::hypot(curve.semi_axis_a(), curve.semi_axis_b());
    const auto t = search.first_root(horizon);
    if (!t) throw RootFindFailure("straight chord did not leave the table");
    return finish(curve, path, *t, tol);
}

HitResult next_hit_arc(const BoundaryCurve& curve, const BoundaryState& s, const FieldParams& field, double tol) {
    if (field.is_zero()) throw std::invalid_argument("next_hit_arc requires a non-zero field");
    const double radius = field.larmor_radius();
    const double loop = kTwoPi * radius;
    const double scale = std::min(curve.approx_perimeter(), loop);
    const ArcPath path{s.position, s.velocity, static_cast<double>(field.orientation()) * perp(s.velocity), radius};
    CrossingSearch<ArcPath> search(curve, path, scale, false);
    const auto t = search.first_root(loop - kExclusionFraction * scale);
    if (!t) {
        HitResult stay;
        stay.point = s.position;
        stay.arrival_velocity = s.velocity;
        stay.path_length = loop;
        stay.residual = std::fabs(curve.implicit_value(s.position));
        stay.full_loop = true;
        return stay;
    }
    return finish(curve, path, *t, tol);
}

StepResult billiard_step_detailed(const BoundaryCurve& curve, const PhasePoint& z, const FieldParams& field,
                                  double tol) {
    const BoundaryState start = phase_to_state(curve, z);
    const HitResult hit = field.is_zero() ? next_hit_line(curve, start, tol) : next_hit_arc(curve, start, field, tol);

    StepResult out;
    out.hit_point = hit.point;
    out.residual = hit.residual;
    if (hit.full_loop) {
        out.next = z;
        out.full_loop = true;
        return out;
    }

    const double theta_pos = curve.polar_angle_of(hit.point);
    const Vec2 n = curve.outward_normal(curve.point_at_polar(theta_pos));
    if (!(dot(hit.arrival_velocity, n) > 0.0))
        throw DegenerateTangency("trajectory reached the boundary without crossing it");
    const Vec2 v = reflect(hit.arrival_velocity, n);
    const double theta_vel = std::atan2(dot(v, perp(n)), -dot(v, n));
    if (std::fabs(theta_vel) > 0.5 * std::numbers::pi - kTangencyMargin)
        throw DegenerateTangency("outgoing direction is tangential to the boundary");
    out.next = {theta_pos, theta_vel};
    return out;
}

}  // namespace magbill
