#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "fif/kernels.hpp"

namespace fif::kernels::omp {

void rb_apply_1d(const Ifs1D &ifs, const GridFunction1D &f, std::span<double> out) {
    const auto count = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i)
        out[i] = detail::rb_sample_1d(ifs, f, f.abscissa(static_cast<std::size_t>(i)));
}

void rb_apply_2d(const Ifs2D &ifs, const GridFunction2D &f, SeamPolicy policy,
                 std::span<const fif::detail::AxisNode> xnodes, std::span<const fif::detail::AxisNode> ynodes,
                 std::span<double> out) {
    const auto rows = static_cast<std::int64_t>(xnodes.size());
    const std::size_t stride = ynodes.size();
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
        const auto &xn = xnodes[static_cast<std::size_t>(i)];
        double *row = out.data() + static_cast<std::size_t>(i) * stride;
        for (std::size_t j = 0; j < stride; ++j)
            row[j] = detail::rb_node_2d(ifs, f, policy, xn, ynodes[j]);
    }
}

void hutchinson(const Ifs1D &ifs, std::span<const Point> in, std::span<Point> out) {
    const auto count = static_cast<std::int64_t>(in.size());
    const auto maps = static_cast<std::int64_t>(ifs.size());
#pragma omp parallel for collapse(2) schedule(static)
    for (std::int64_t n = 0; n < maps; ++n) {
        for (std::int64_t j = 0; j < count; ++j) {
            const auto &l = ifs.lmaps()[n];
            const auto &v = ifs.vmaps()[n];
            const auto &p = in[j];
            out[n * count + j] = {l(p.t), v(p.t, p.x)};
        }
    }
}

double directed_hausdorff(std::span<const Point> a, std::span<const Point> b) {
    const auto count = static_cast<std::int64_t>(a.size());
    double worst = 0.0;
    // max is exact and order independent, so the reduction is bitwise reproducible
#pragma omp parallel for reduction(max : worst) schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
        const auto &p = a[static_cast<std::size_t>(i)];
        double best = std::numeric_limits<double>::infinity();
        for (const auto &q : b)
            best = std::min(best, detail::point_distance_sq(p, q));
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

} // namespace fif::kernels::omp
