// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>
#include <cassert>

#include "magbill/kernels.hpp"

namespace magbill::kernels::avx2 {
namespace {

// (|u|^p + |v|^p) - 1 for four lanes, rounding exactly like implicit_value().
inline __m256d implicit4(const ImplicitParams& c, __m256d x, __m256d y) {
    const __m256d u = _mm256_div_pd(x, _mm256_set1_pd(c.a));
    const __m256d v = _mm256_div_pd(y, _mm256_set1_pd(c.b));
    const __m256d one = _mm256_set1_pd(1.0);
    if (c.p == 2.0) {
        const __m256d s = _mm256_add_pd(_mm256_mul_pd(u, u), _mm256_mul_pd(v, v));
        return _mm256_sub_pd(s, one);
    }
    alignas(32) double ul[4];
    alignas(32) double vl[4];
    _mm256_store_pd(ul, u);
    _mm256_store_pd(vl, v);
    for (int k = 0; k < 4; ++k) {
        ul[k] = abs_pow(ul[k], c.p);
        vl[k] = abs_pow(vl[k], c.p);
    }
    const __m256d s = _mm256_add_pd(_mm256_load_pd(ul), _mm256_load_pd(vl));
    return _mm256_sub_pd(s, one);
}

}  // namespace

void implicit_values(const ImplicitParams& c, std::span<const double> xs, std::span<const double> ys,
                     std::span<double> out) {
    assert(xs.size() == ys.size() && out.size() >= xs.size());
    const std::size_t n = xs.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(xs.data() + i);
        const __m256d y = _mm256_loadu_pd(ys.data() + i);
        _mm256_storeu_pd(out.data() + i, implicit4(c, x, y));
    }
    for (; i < n; ++i) out[i] = implicit_value(c, xs[i], ys[i]);
}

void line_implicit_values(const ImplicitParams& c, double ox, double oy, double dx, double dy,
                          std::span<const double> ts, std::span<double> out) {
    assert(out.size() >= ts.size());
    const std::size_t n = ts.size();
    const __m256d vox = _mm256_set1_pd(ox);
    const __m256d voy = _mm256_set1_pd(oy);
    const __m256d vdx = _mm256_set1_pd(dx);
    const __m256d vdy = _mm256_set1_pd(dy);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_loadu_pd(ts.data() + i);
        const __m256d x = _mm256_add_pd(vox, _mm256_mul_pd(t, vdx));
        const __m256d y = _mm256_add_pd(voy, _mm256_mul_pd(t, vdy));
        _mm256_storeu_pd(out.data() + i, implicit4(c, x, y));
    }
    for (; i < n; ++i) out[i] = implicit_value(c, ox + ts[i] * dx, oy + ts[i] * dy);
}

double max_abs_implicit(const ImplicitParams& c, std::span<const double> xs, std::span<const double> ys) {
    assert(xs.size() == ys.size());
    const std::size_t n = xs.size();
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d f = implicit4(c, _mm256_loadu_pd(xs.data() + i), _mm256_loadu_pd(ys.data() + i));
        // NaN lanes keep the accumulator, as std::max(acc, NaN) does.
        acc = _mm256_max_pd(_mm256_andnot_pd(sign, f), acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; i < n; ++i) m = std::max(m, std::fabs(implicit_value(c, xs[i], ys[i])));
    return m;
}

}  // namespace magbill::kernels::avx2
