#include "fif/fis2d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fif/error.hpp"
#include "fif/kernels.hpp"

namespace fif {

namespace {

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
}

void require_axis(std::span<const double> knots, const char *name) {
    if (knots.size() < 2)
        throw InvalidDataError(std::string("axis ") + name + " needs at least two knots");
    if (!all_finite(knots))
        throw InvalidDataError(std::string("axis ") + name + " contains NaN or infinite entries");
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!(knots[i - 1] < knots[i]))
            throw InvalidDataError(std::string("axis ") + name + " knots must be strictly increasing");
    }
}

// Largest deviation of vals from the chord through its end values, with lambda taken
// from the knot positions.
double chord_deviation(std::span<const double> knots, const std::vector<double> &vals) {
    const double lo = knots.front(), hi = knots.back();
    double worst = 0.0;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const double lambda = (knots[i] - lo) / (hi - lo);
        const double line = (1.0 - lambda) * vals.front() + lambda * vals.back();
        worst = std::max(worst, std::abs(vals[i] - line));
    }
    return worst;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace

GridData2D::GridData2D(std::vector<double> xs, std::vector<double> ys, std::vector<double> zs)
    : xs_(std::move(xs)), ys_(std::move(ys)), zs_(std::move(zs)) {
    require_axis(xs_, "x");
    require_axis(ys_, "y");
    if (zs_.size() != xs_.size() * ys_.size())
        throw InvalidDataError("value matrix must be " + std::to_string(xs_.size()) + " x " +
                               std::to_string(ys_.size()));
    if (!all_finite(zs_))
        throw InvalidDataError("grid values contain NaN or infinite entries");
}

double GridData2D::max_abs_value() const noexcept {
    double m = 0.0;
    for (double z : zs_)
        m = std::max(m, std::abs(z));
    return m;
}

ScalingMatrix::ScalingMatrix(std::size_t x_cells, std::size_t y_cells, std::vector<double> values)
    : nx_(x_cells), ny_(y_cells), values_(std::move(values)) {
    if (values_.size() != nx_ * ny_)
        throw InvalidScalingError("expected " + std::to_string(nx_ * ny_) + " scaling factors, got " +
                                  std::to_string(values_.size()));
    for (double a : values_) {
        if (!std::isfinite(a) || !(std::abs(a) < 1.0))
            throw InvalidScalingError("every cell scaling factor must satisfy |alpha| < 1");
    }
}

ScalingMatrix ScalingMatrix::broadcast(double alpha, std::size_t x_cells, std::size_t y_cells) {
    return ScalingMatrix(x_cells, y_cells, std::vector<double>(x_cells * y_cells, alpha));
}

const char *to_string(SeamPolicy policy) noexcept {
    switch (policy) {
    case SeamPolicy::RawF:
        return "raw";
    case SeamPolicy::AverageG:
        return "average";
    case SeamPolicy::CollinearBoundary:
        return "collinear";
    }
    return "unknown";
}

double CollinearityReport::max_deviation() const noexcept { return std::max({left, right, bottom, top}); }

CollinearityReport check_collinearity(const GridData2D &grid, double tol) {
    const auto xs = grid.xs();
    const auto ys = grid.ys();
    const std::size_t nx = xs.size(), ny = ys.size();
    std::vector<double> left(ny), right(ny), bottom(nx), top(nx);
    for (std::size_t m = 0; m < ny; ++m) {
        left[m] = grid.z(0, m);
        right[m] = grid.z(nx - 1, m);
    }
    for (std::size_t n = 0; n < nx; ++n) {
        bottom[n] = grid.z(n, 0);
        top[n] = grid.z(n, ny - 1);
    }
    CollinearityReport r;
    r.left = chord_deviation(ys, left);
    r.right = chord_deviation(ys, right);
    r.bottom = chord_deviation(xs, bottom);
    r.top = chord_deviation(xs, top);
    r.tol = tol;
    r.pass = r.max_deviation() <= tol;
    return r;
}

Ifs2D::Ifs2D(GridData2D grid, std::vector<AffineMap1D> phis, std::vector<AffineMap1D> psis,
             std::vector<double> alphas, std::vector<BilinearCoeffs> qcoeffs)
    : grid_(std::move(grid)), phis_(std::move(phis)), psis_(std::move(psis)), alphas_(std::move(alphas)),
      qcoeffs_(std::move(qcoeffs)) {
    const std::size_t nx = grid_.x_intervals(), ny = grid_.y_intervals();
    if (phis_.size() != nx || psis_.size() != ny)
        throw InvalidDataError("IFS needs one axis map per grid interval");
    if (alphas_.size() != nx * ny || qcoeffs_.size() != nx * ny)
        throw InvalidDataError("IFS needs one scaling factor and one q per cell");
    for (const auto &m : phis_)
        if (!std::isfinite(m.a) || !std::isfinite(m.b) || m.a == 0.0)
            throw InvalidDataError("x-axis map is not invertible");
    for (const auto &m : psis_)
        if (!std::isfinite(m.a) || !std::isfinite(m.b) || m.a == 0.0)
            throw InvalidDataError("y-axis map is not invertible");
    if (!all_finite(alphas_))
        throw InvalidDataError("non-finite cell scaling factor");
    for (const auto &q : qcoeffs_)
        if (!std::isfinite(q.e) || !std::isfinite(q.f) || !std::isfinite(q.g) || !std::isfinite(q.k))
            throw InvalidDataError("non-finite q coefficient");
    collinearity_ = check_collinearity(grid_, 1e-9 * (1.0 + grid_.max_abs_value()));
}

double Ifs2D::max_abs_alpha() const noexcept {
    double m = 0.0;
    for (double a : alphas_)
        m = std::max(m, std::abs(a));
    return m;
}

std::vector<BilinearCoeffs> solve_qnm(const GridData2D &grid, const ScalingMatrix &alphas) {
    const std::size_t nx = grid.x_intervals(), ny = grid.y_intervals();
    if (alphas.x_cells() != nx || alphas.y_cells() != ny)
        throw InvalidScalingError("scaling matrix shape does not match the grid cells");

    const Rect dom = grid.domain();
    const double w = dom.width(), h = dom.height();
    const double z00 = grid.z(0, 0), z0m = grid.z(0, ny), zn0 = grid.z(nx, 0), znm = grid.z(nx, ny);

    std::vector<BilinearCoeffs> out;
    out.reserve(nx * ny);
    for (std::size_t c = 0; c < nx; ++c) {
        for (std::size_t d = 0; d < ny; ++d) {
            const double a = alphas(c, d);
            // q must hit z_target - alpha * z_corner at the four domain corners: the
            // unique bilinear through those values, expanded into e x + f y + g xy + k
            const double c00 = grid.z(c, d) - a * z00;
            const double c10 = grid.z(c + 1, d) - a * zn0;
            const double c01 = grid.z(c, d + 1) - a * z0m;
            const double c11 = grid.z(c + 1, d + 1) - a * znm;
            const double bu = c10 - c00;
            const double bv = c01 - c00;
            const double buv = c00 - c10 - c01 + c11;
            BilinearCoeffs q;
            q.g = buv / (w * h);
            q.e = bu / w - q.g * dom.y0;
            q.f = bv / h - q.g * dom.x0;
            q.k = c00 - bu * dom.x0 / w - bv * dom.y0 / h + q.g * dom.x0 * dom.y0;
            out.push_back(q);
        }
    }
    return out;
}

Ifs2D build_ifs2d(const GridData2D &grid, const ScalingMatrix &alphas) {
    auto q = solve_qnm(grid, alphas);
    return Ifs2D(grid, build_axis_maps(grid.xs()), build_axis_maps(grid.ys()),
                 {alphas.values().begin(), alphas.values().end()}, std::move(q));
}

double corner_residual(const Ifs2D &ifs) {
    const auto &g = ifs.grid();
    const std::size_t nx = g.x_intervals(), ny = g.y_intervals();
    const Rect dom = g.domain();
    double worst = 0.0;
    for (std::size_t c = 0; c < nx; ++c) {
        for (std::size_t d = 0; d < ny; ++d) {
            worst = std::max({worst, std::abs(ifs.apply(c, d, dom.x0, dom.y0, g.z(0, 0)) - g.z(c, d)),
                              std::abs(ifs.apply(c, d, dom.x1, dom.y1, g.z(nx, ny)) - g.z(c + 1, d + 1)),
                              std::abs(ifs.apply(c, d, dom.x0, dom.y1, g.z(0, ny)) - g.z(c, d + 1)),
                              std::abs(ifs.apply(c, d, dom.x1, dom.y0, g.z(nx, 0)) - g.z(c + 1, d))});
        }
    }
    return worst;
}

namespace detail {

std::vector<AxisNode> axis_nodes(std::span<const double> knots, double lo, double hi, std::size_t intervals) {
    const double span = hi - lo;
    const double snap = 1e-12 * span;
    const std::size_t cells = knots.size() - 1;
    std::vector<AxisNode> nodes(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        AxisNode node;
        node.coord = i == intervals ? hi : lo + span * static_cast<double>(i) / static_cast<double>(intervals);
        const auto it = std::upper_bound(knots.begin(), knots.end(), node.coord);
        std::size_t cell = it == knots.begin() ? 0 : static_cast<std::size_t>(it - knots.begin()) - 1;
        // snap nodes that sit on a knot up to rounding onto it
        if (cell + 1 < knots.size() && knots[cell + 1] - node.coord <= snap) {
            ++cell;
            node.coord = knots[cell];
        } else if (std::abs(node.coord - knots[cell]) <= snap) {
            node.coord = knots[cell];
        }
        if (cell >= 1 && cell < cells && node.coord == knots[cell])
            node.seam = static_cast<std::int32_t>(cell);
        node.cell = static_cast<std::uint32_t>(std::min(cell, cells - 1));
        nodes[i] = node;
    }
    return nodes;
}

} // namespace detail

GridFunction2D bilinear_interpolant(const GridData2D &grid, std::size_t px, std::size_t qy) {
    const auto xs = grid.xs();
    const auto ys = grid.ys();
    const auto xn = detail::axis_nodes(xs, xs.front(), xs.back(), px);
    const auto yn = detail::axis_nodes(ys, ys.front(), ys.back(), qy);
    std::vector<double> s((px + 1) * (qy + 1));
    for (std::size_t i = 0; i <= px; ++i) {
        const std::size_t c = xn[i].cell;
        const double wx = (xn[i].coord - xs[c]) / (xs[c + 1] - xs[c]);
        for (std::size_t j = 0; j <= qy; ++j) {
            const std::size_t d = yn[j].cell;
            const double wy = (yn[j].coord - ys[d]) / (ys[d + 1] - ys[d]);
            const double lo = (1.0 - wy) * grid.z(c, d) + wy * grid.z(c, d + 1);
            const double hi = (1.0 - wy) * grid.z(c + 1, d) + wy * grid.z(c + 1, d + 1);
            s[i * (qy + 1) + j] = (1.0 - wx) * lo + wx * hi;
        }
    }
    return GridFunction2D(grid.domain(), px, qy, std::move(s));
}

namespace {

void require_lattice_domain(const Ifs2D &ifs, const GridFunction2D &f) {
    if (!(f.domain() == ifs.grid().domain()))
        throw DomainError("lattice function does not cover the grid rectangle");
}

// Branch values on every interior seam, sampled at the lattice coordinates along it.
void trace_seams(const Ifs2D &ifs, const GridFunction2D &in, SeamPolicy policy,
                 std::span<const detail::AxisNode> xn, std::span<const detail::AxisNode> yn, GridFunction2D &out) {
    const auto xs = ifs.grid().xs();
    const auto ys = ifs.grid().ys();

    for (std::size_t k = 1; k + 1 < xs.size(); ++k) {
        SeamTrace tr;
        tr.knot = k;
        const detail::AxisNode on_seam{xs[k], static_cast<std::uint32_t>(k), static_cast<std::int32_t>(k)};
        for (const auto &y : yn) {
            tr.positions.push_back(y.coord);
            if (policy == SeamPolicy::AverageG) {
                const double g = kernels::detail::rb_node_2d(ifs, in, policy, on_seam, y);
                tr.lower.push_back(g);
                tr.upper.push_back(g);
            } else {
                tr.lower.push_back(kernels::detail::branch_2d(ifs, in, k - 1, y.cell, xs[k], y.coord));
                tr.upper.push_back(kernels::detail::branch_2d(ifs, in, k, y.cell, xs[k], y.coord));
            }
        }
        out.x_seams.push_back(std::move(tr));
    }
    for (std::size_t k = 1; k + 1 < ys.size(); ++k) {
        SeamTrace tr;
        tr.knot = k;
        const detail::AxisNode on_seam{ys[k], static_cast<std::uint32_t>(k), static_cast<std::int32_t>(k)};
        for (const auto &x : xn) {
            tr.positions.push_back(x.coord);
            if (policy == SeamPolicy::AverageG) {
                const double g = kernels::detail::rb_node_2d(ifs, in, policy, x, on_seam);
                tr.lower.push_back(g);
                tr.upper.push_back(g);
            } else {
                tr.lower.push_back(kernels::detail::branch_2d(ifs, in, x.cell, k - 1, x.coord, ys[k]));
                tr.upper.push_back(kernels::detail::branch_2d(ifs, in, x.cell, k, x.coord, ys[k]));
            }
        }
        out.y_seams.push_back(std::move(tr));
    }
}

} // namespace

GridFunction2D rb2_apply(const Ifs2D &ifs, const GridFunction2D &f, SeamPolicy policy) {
    require_lattice_domain(ifs, f);
    if (policy == SeamPolicy::CollinearBoundary && !ifs.collinear()) {
        const auto &c = ifs.collinearity();
        throw PolicyError("collinear policy needs collinear boundary data (max deviation " +
                          describe(c.max_deviation()) + ")");
    }
    const auto xs = ifs.grid().xs();
    const auto ys = ifs.grid().ys();
    const auto xn = detail::axis_nodes(xs, xs.front(), xs.back(), f.x_intervals());
    const auto yn = detail::axis_nodes(ys, ys.front(), ys.back(), f.y_intervals());

    std::vector<double> out(f.samples().size());
    kernels::omp::rb_apply_2d(ifs, f, policy, xn, yn, out);
    GridFunction2D image(f.domain(), f.x_intervals(), f.y_intervals(), std::move(out));
    trace_seams(ifs, f, policy, xn, yn, image);
    return image;
}

FixedPoint2D fixed_point_2d(const Ifs2D &ifs, SeamPolicy policy, const FixedPointConfig &cfg) {
    cfg.validate();
    if (cfg.resolution < std::max(ifs.x_cells(), ifs.y_cells()))
        throw DomainError("resolution must provide at least one lattice interval per cell");

    FixedPoint2D result{bilinear_interpolant(ifs.grid(), cfg.resolution, cfg.resolution), 0, {}};
    for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
        auto next = rb2_apply(ifs, result.surface, policy);
        const double change = sup_distance(next.samples(), result.surface.samples());
        result.step_norms.push_back(change);
        result.surface = std::move(next);
        result.iterations = it;
        if (change <= cfg.tol)
            return result;
    }
    throw NonConvergenceError("surface iteration did not reach tol " + describe(cfg.tol) + " in " +
                                  std::to_string(cfg.max_iter) + " iterations (last change " +
                                  describe(result.step_norms.back()) + ")",
                              result.step_norms.back(), cfg.max_iter);
}

double knot_residual(const GridFunction2D &f, const GridData2D &grid) {
    double worst = 0.0;
    for (std::size_t n = 0; n < grid.xs().size(); ++n)
        for (std::size_t m = 0; m < grid.ys().size(); ++m)
            worst = std::max(worst, std::abs(f(grid.xs()[n], grid.ys()[m]) - grid.z(n, m)));
    return worst;
}

std::map<std::string, double> seam_jump_report(const GridFunction2D &f, const Ifs2D &ifs) {
    const std::size_t x_seams = ifs.x_cells() - 1, y_seams = ifs.y_cells() - 1;
    if (f.x_seams.size() != x_seams || f.y_seams.size() != y_seams)
        throw DomainError("seam report needs an operator image that retains its seam branches");
    std::map<std::string, double> report;
    const auto add = [&](const char *axis, const SeamTrace &tr) {
        double worst = 0.0;
        for (std::size_t i = 0; i < tr.lower.size(); ++i)
            worst = std::max(worst, std::abs(tr.lower[i] - tr.upper[i]));
        report[std::string(axis) + "=" + std::to_string(tr.knot)] = worst;
    };
    for (const auto &tr : f.x_seams)
        add("x", tr);
    for (const auto &tr : f.y_seams)
        add("y", tr);
    return report;
}

double integrate2d_closed_form(const Ifs2D &ifs, SeamPolicy policy) {
    if (policy == SeamPolicy::RawF)
        throw PolicyError("closed-form integration needs a well-defined operator (average or collinear policy)");
    if (policy == SeamPolicy::CollinearBoundary && !ifs.collinear())
        throw PolicyError("collinear policy needs collinear boundary data");

    const Rect dom = ifs.grid().domain();
    const double w = dom.width(), h = dom.height();
    const double xm = 0.5 * (dom.x0 + dom.x1), ym = 0.5 * (dom.y0 + dom.y1);
    double numerator = 0.0;
    double feedback = 0.0;
    for (std::size_t c = 0; c < ifs.x_cells(); ++c) {
        for (std::size_t d = 0; d < ifs.y_cells(); ++d) {
            const double weight = ifs.phis()[c].a * ifs.psis()[d].a;
            // a bilinear q integrates to area times its value at the centre
            numerator += weight * w * h * ifs.q(c, d)(xm, ym);
            feedback += weight * ifs.alpha(c, d);
        }
    }
    const double denominator = 1.0 - feedback;
    if (!(denominator > 0.0))
        throw Error("internal error: surface integral denominator is not positive");
    return numerator / denominator;
}

double midpoint_integral(const GridFunction2D &f) {
    const std::size_t px = f.x_intervals(), qy = f.y_intervals();
    double sum = 0.0;
    for (std::size_t i = 0; i < px; ++i)
        for (std::size_t j = 0; j < qy; ++j)
            sum += 0.25 * (f.value(i, j) + f.value(i + 1, j) + f.value(i, j + 1) + f.value(i + 1, j + 1));
    const Rect &d = f.domain();
    return sum * (d.width() / static_cast<double>(px)) * (d.height() / static_cast<double>(qy));
}

double integrate2d_quadrature(const Ifs2D &ifs, SeamPolicy policy, const FixedPointConfig &cfg) {
    return midpoint_integral(fixed_point_2d(ifs, policy, cfg).surface);
}

} // namespace fif
