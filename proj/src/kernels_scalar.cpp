#include <algorithm>
#include <cassert>

#include "magbill/kernels.hpp"

namespace magbill::kernels::scalar {

void implicit_values(const ImplicitParams& c, std::span<const double> xs, std::span<const double> ys,
                     std::span<double> out) {
    assert(xs.size() == ys.size() && out.size() >= xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = implicit_value(c, xs[i], ys[i]);
}

void line_implicit_values(const ImplicitParams& c, double ox, double oy, double dx, double dy,
                          std::span<const double> ts, std::span<double> out) {
    assert(out.size() >= ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double x = ox + ts[i] * dx;
        const double y = oy + ts[i] * dy;
        out[i] = implicit_value(c, x, y);
    }
}

double max_abs_implicit(const ImplicitParams& c, std::span<const double> xs, std::span<const double> ys) {
    assert(xs.size() == ys.size());
    double m = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) m = std::max(m, std::fabs(implicit_value(c, xs[i], ys[i])));
    return m;
}

}  // namespace magbill::kernels::scalar
