#include <atomic>
#include <cstdlib>
#include <string>

#include "magbill/kernels.hpp"

namespace magbill::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(MAGBILL_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa initial_isa() {
    if (const char* env = std::getenv("MAGBILL_ISA"); env != nullptr && std::string(env) == "scalar")
        return Isa::Scalar;
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

#if !defined(MAGBILL_BUILD_AVX2)
// Unreachable stubs: isa_available(Isa::Avx2) is false in this build.
namespace avx2 {
void implicit_values(const ImplicitParams& c, std::span<const double> xs, std::span<const double> ys,
                     std::span<double> out) {
    scalar::implicit_values(c, xs, ys, out);
}
void line_implicit_values(const ImplicitParams& c, double ox, double oy, double dx, double dy,
                          std::span<const double> ts, std::span<double> out) {
    scalar::line_implicit_values(c, ox, oy, dx, dy, ts, out);
}
double max_abs_implicit(const ImplicitParams& c, std::span<const double> xs, std::span<const double> ys) {
    return scalar::max_abs_implicit(c, xs, ys);
}
}  // namespace avx2
#endif

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool set_active_isa(Isa isa) {
    if (!isa_available(isa)) return false;
    current().store(isa, std::memory_order_relaxed);
    return true;
}

void implicit_values(const ImplicitParams& c, std::span<const double> xs, std::span<const double> ys,
                     std::span<double> out) {
    if (active_isa() == Isa::Avx2)
        avx2::implicit_values(c, xs, ys, out);
    else
        scalar::implicit_values(c, xs, ys, out);
}

void line_implicit_values(const ImplicitParams& c, double ox, double oy, double dx, double dy,
                          std::span<const double> ts, std::span<double> out) {
    if (active_isa() == Isa::Avx2)
        avx2::line_implicit_values(c, ox, oy, dx, dy, ts, out);
    else
        scalar::line_implicit_values(c, ox, oy, dx, dy, ts, out);
}

double max_abs_implicit(const ImplicitParams& c, std::span<const double> xs, std::span<const double> ys) {
    return active_isa() == Isa::Avx2 ? avx2::max_abs_implicit(c, xs, ys) : scalar::max_abs_implicit(c, xs, ys);
}

}  // namespace magbill::kernels
