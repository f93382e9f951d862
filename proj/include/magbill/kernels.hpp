#pragma once
// Batched evaluation of the superellipse implicit function.
//
// Every kernel has a scalar reference version and, on x86-64, an AVX2 version
// selected at runtime. The AVX2 versions perform the same IEEE operations in
// the same order as the scalar ones, so results are bit-identical; for powers
// other than 2 they vectorize the affine part and evaluate |u|^p per lane.

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>

namespace magbill::kernels {

struct ImplicitParams {
    double a = 1.0;
    double b = 1.0;
    double p = 2.0;
};

/// |u|^p with the exact value 0 at u = 0.
inline double abs_pow(double u, double p) {
    if (p == 2.0) return u * u;
    if (u == 0.0) return 0.0;
    return std::pow(std::fabs(u), p);
}

inline double implicit_value(const ImplicitParams& c, double x, double y) {
    const double u = x / c.a;
    const double v = y / c.b;
    return (abs_pow(u, c.p) + abs_pow(v, c.p)) - 1.0;
}

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);

/// ISA used by the dispatching entry points. Defaults to the best available
/// one; the environment variable MAGBILL_ISA=scalar forces the reference path.
Isa active_isa();

/// Returns false (and changes nothing) if the ISA is unavailable.
bool set_active_isa(Isa isa);

// out[i] = F(xs[i], ys[i])
void implicit_values(const ImplicitParams& c, std::span<const double> xs, std::span<const double> ys,
                     std::span<double> out);

// out[i] = F(origin + ts[i] * dir)
void line_implicit_values(const ImplicitParams& c, double ox, double oy, double dx, double dy,
                          std::span<const double> ts, std::span<double> out);

// max_i |F(xs[i], ys[i])|
double max_abs_implicit(const ImplicitParams& c, std::span<const double> xs, std::span<const double> ys);

namespace scalar {
void implicit_values(const ImplicitParams& c, std::span<const double> xs, std::span<const double> ys,
                     std::span<double> out);
void line_implicit_values(const ImplicitParams& c, double ox, double oy, double dx, double dy,
                          std::span<const double> ts, std::span<double> out);
double max_abs_implicit(const ImplicitParams& c, std::span<const double> xs, std::span<const double> ys);
}  // namespace scalar

namespace avx2 {
void implicit_values(const ImplicitParams& c, std::span<const double> xs, std::span<const double> ys,
                     std::span<double> out);
void line_implicit_values(const ImplicitParams& c, double ox, double oy, double dx, double dy,
                          std::span<const double> ts, std::span<double> out);
double max_abs_implicit(const ImplicitParams& c, std::span<const double> xs, std::span<const double> ys);
}  // namespace avx2

}  // namespace magbill::kernels
