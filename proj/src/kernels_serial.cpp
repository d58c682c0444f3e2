#include <algorithm>
#include <cmath>
#include <limits>

#include "fif/kernels.hpp"

namespace fif::kernels::serial {

void rb_apply_1d(const Ifs1D &ifs, const GridFunction1D &f, std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = detail::rb_sample_1d(ifs, f, f.abscissa(i));
}

void rb_apply_2d(const Ifs2D &ifs, const GridFunction2D &f, SeamPolicy policy,
                 std::span<const fif::detail::AxisNode> xnodes, std::span<const fif::detail::AxisNode> ynodes,
                 std::span<double> out) {
    const std::size_t stride = ynodes.size();
    for (std::size_t i = 0; i < xnodes.size(); ++i)
        for (std::size_t j = 0; j < ynodes.size(); ++j)
            out[i * stride + j] = detail::rb_node_2d(ifs, f, policy, xnodes[i], ynodes[j]);
}

void hutchinson(const Ifs1D &ifs, std::span<const Point> in, std::span<Point> out) {
    const std::size_t count = in.size();
    for (std::size_t n = 0; n < ifs.size(); ++n) {
        const auto &l = ifs.lmaps()[n];
        const auto &v = ifs.vmaps()[n];
        for (std::size_t j = 0; j < count; ++j)
            out[n * count + j] = {l(in[j].t), v(in[j].t, in[j].x)};
    }
}

double directed_hausdorff(std::span<const Point> a, std::span<const Point> b) {
    double worst = 0.0;
    for (const auto &p : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto &q : b)
            best = std::min(best, detail::point_distance_sq(p, q));
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

} // namespace fif::kernels::serial
