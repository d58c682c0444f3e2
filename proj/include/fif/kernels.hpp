#pragma once

// Data-parallel inner loops. Every kernel exists twice with identical signatures:
// `serial` is the straightforward reference, `omp` the OpenMP version the library
// calls. Outputs are written per element with no reductions over floating-point sums,
// so both produce bitwise-identical results for any thread count.

#include <span>

#include "fif/fis2d.hpp"
#include "fif/grid.hpp"
#include "fif/ifs1d.hpp"
#include "fif/point.hpp"

namespace fif::kernels {

namespace serial {

// out[i] = F_n(L_n^{-1}(t_i), f(L_n^{-1}(t_i))) on the grid of `f`; out.size() == samples.
void rb_apply_1d(const Ifs1D &ifs, const GridFunction1D &f, std::span<double> out);

// Lattice image of the 2D operator; nodes on interior knots follow `policy`.
void rb_apply_2d(const Ifs2D &ifs, const GridFunction2D &f, SeamPolicy policy,
                 std::span<const detail::AxisNode> xnodes, std::span<const detail::AxisNode> ynodes,
                 std::span<double> out);

// out[n * |in| + j] = w_n(in[j])
void hutchinson(const Ifs1D &ifs, std::span<const Point> in, std::span<Point> out);

// max_{p in a} min_{q in b} |p - q|
double directed_hausdorff(std::span<const Point> a, std::span<const Point> b);

} // namespace serial

namespace omp {

void rb_apply_1d(const Ifs1D &ifs, const GridFunction1D &f, std::span<double> out);
void rb_apply_2d(const Ifs2D &ifs, const GridFunction2D &f, SeamPolicy policy,
                 std::span<const detail::AxisNode> xnodes, std::span<const detail::AxisNode> ynodes,
                 std::span<double> out);
void hutchinson(const Ifs1D &ifs, std::span<const Point> in, std::span<Point> out);
double directed_hausdorff(std::span<const Point> a, std::span<const Point> b);

} // namespace omp

namespace detail {

inline double rb_sample_1d(const Ifs1D &ifs, const GridFunction1D &f, double t) {
    const std::size_t n = ifs.locate(t);
    const double u = ifs.lmaps()[n].inverse(t);
    return ifs.vmaps()[n](u, f(u));
}

inline double branch_2d(const Ifs2D &ifs, const GridFunction2D &f, std::size_t c, std::size_t d, double x,
                        double y) {
    const Rect dom = f.domain();
    const double u = std::clamp(ifs.phis()[c].inverse(x), dom.x0, dom.x1);
    const double v = std::clamp(ifs.psis()[d].inverse(y), dom.y0, dom.y1);
    return ifs.apply(c, d, u, v, f(u, v));
}

// Value of the operator image at lattice node (xn, yn).
inline double rb_node_2d(const Ifs2D &ifs, const GridFunction2D &f, SeamPolicy policy,
                         const fif::detail::AxisNode &xn, const fif::detail::AxisNode &yn) {
    if (policy != SeamPolicy::AverageG || (xn.seam < 0 && yn.seam < 0))
        return branch_2d(ifs, f, xn.cell, yn.cell, xn.coord, yn.coord);

    // Mean over every cell sharing the node: two on a seam, four at an interior grid corner.
    const std::size_t c_lo = xn.seam >= 0 ? xn.cell - 1 : xn.cell;
    const std::size_t d_lo = yn.seam >= 0 ? yn.cell - 1 : yn.cell;
    double sum = 0.0;
    int count = 0;
    for (std::size_t c = c_lo; c <= xn.cell; ++c) {
        for (std::size_t d = d_lo; d <= yn.cell; ++d) {
            sum += branch_2d(ifs, f, c, d, xn.coord, yn.coord);
            ++count;
        }
    }
    return sum / count;
}

inline double point_distance_sq(const Point &p, const Point &q) {
    const double dt = p.t - q.t;
    const double dx = p.x - q.x;
    return dt * dt + dx * dx;
}

} // namespace detail

} // namespace fif::kernels
