#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fif/grid.hpp"
#include "fif/ifs1d.hpp"

namespace fif {

// Data {(x_n, y_m, z_{n,m})} on a rectangular grid; zs is row-major with the x index outermost.
class GridData2D {
  public:
    GridData2D(std::vector<double> xs, std::vector<double> ys, std::vector<double> zs);

    std::span<const double> xs() const noexcept { return xs_; }
    std::span<const double> ys() const noexcept { return ys_; }
    std::span<const double> zs() const noexcept { return zs_; }
    double z(std::size_t n, std::size_t m) const { return zs_[n * ys_.size() + m]; }

    std::size_t x_intervals() const noexcept { return xs_.size() - 1; }
    std::size_t y_intervals() const noexcept { return ys_.size() - 1; }
    Rect domain() const noexcept { return {xs_.front(), xs_.back(), ys_.front(), ys_.back()}; }
    double max_abs_value() const noexcept;

    bool operator==(const GridData2D &) const = default;

  private:
    std::vector<double> xs_;
    std::vector<double> ys_;
    std::vector<double> zs_;
};

// alpha_{n,m} for every cell, |alpha| < 1; row-major with the x cell index outermost.
class ScalingMatrix {
  public:
    ScalingMatrix(std::size_t x_cells, std::size_t y_cells, std::vector<double> values);
    static ScalingMatrix broadcast(double alpha, std::size_t x_cells, std::size_t y_cells);

    std::size_t x_cells() const noexcept { return nx_; }
    std::size_t y_cells() const noexcept { return ny_; }
    double operator()(std::size_t c, std::size_t d) const { return values_[c * ny_ + d]; }
    std::span<const double> values() const noexcept { return values_; }

  private:
    std::size_t nx_;
    std::size_t ny_;
    std::vector<double> values_;
};

// q(x, y) = e x + f y + g x y + k
struct BilinearCoeffs {
    double e = 0.0;
    double f = 0.0;
    double g = 0.0;
    double k = 0.0;

    double operator()(double x, double y) const noexcept { return e * x + f * y + g * x * y + k; }
    bool operator==(const BilinearCoeffs &) const = default;
};

enum class SeamPolicy { RawF, AverageG, CollinearBoundary };

const char *to_string(SeamPolicy policy) noexcept;

// Per-side maximum deviation of the boundary data from the chord through the side's corners.
struct CollinearityReport {
    double left = 0.0;   // x = x_0
    double right = 0.0;  // x = x_N
    double bottom = 0.0; // y = y_0
    double top = 0.0;    // y = y_M
    double tol = 0.0;
    bool pass = true;

    double max_deviation() const noexcept;
};

CollinearityReport check_collinearity(const GridData2D &grid, double tol);

// The rectangular IFS {(phi_n, psi_m, F_{n,m})}. Cells are indexed 0-based: (c, d) is
// the 1-based cell (c+1, d+1) covering [x_c, x_{c+1}] x [y_d, y_{d+1}].
class Ifs2D {
  public:
    Ifs2D(GridData2D grid, std::vector<AffineMap1D> phis, std::vector<AffineMap1D> psis, std::vector<double> alphas,
          std::vector<BilinearCoeffs> qcoeffs);

    const GridData2D &grid() const noexcept { return grid_; }
    std::span<const AffineMap1D> phis() const noexcept { return phis_; }
    std::span<const AffineMap1D> psis() const noexcept { return psis_; }
    std::span<const double> alphas() const noexcept { return alphas_; }
    std::span<const BilinearCoeffs> qcoeffs() const noexcept { return qcoeffs_; }

    std::size_t x_cells() const noexcept { return phis_.size(); }
    std::size_t y_cells() const noexcept { return psis_.size(); }
    double alpha(std::size_t c, std::size_t d) const { return alphas_[c * psis_.size() + d]; }
    const BilinearCoeffs &q(std::size_t c, std::size_t d) const { return qcoeffs_[c * psis_.size() + d]; }

    // F_{c,d}(u, v, z) with (u, v) in the full domain.
    double apply(std::size_t c, std::size_t d, double u, double v, double z) const {
        const std::size_t idx = c * psis_.size() + d;
        return alphas_[idx] * z + qcoeffs_[idx](u, v);
    }

    double max_abs_alpha() const noexcept;
    bool collinear() const noexcept { return collinearity_.pass; }
    const CollinearityReport &collinearity() const noexcept { return collinearity_; }

    bool operator==(const Ifs2D &o) const {
        return grid_ == o.grid_ && phis_ == o.phis_ && psis_ == o.psis_ && alphas_ == o.alphas_ &&
               qcoeffs_ == o.qcoeffs_;
    }

  private:
    GridData2D grid_;
    std::vector<AffineMap1D> phis_;
    std::vector<AffineMap1D> psis_;
    std::vector<double> alphas_;
    std::vector<BilinearCoeffs> qcoeffs_;
    CollinearityReport collinearity_;
};

std::vector<BilinearCoeffs> solve_qnm(const GridData2D &grid, const ScalingMatrix &alphas);
Ifs2D build_ifs2d(const GridData2D &grid, const ScalingMatrix &alphas);

// Max |F_{c,d}(corner) - target| over the four corner conditions of every cell.
double corner_residual(const Ifs2D &ifs);

// Piecewise-bilinear interpolant of the data sampled on a (P+1) x (Q+1) lattice.
GridFunction2D bilinear_interpolant(const GridData2D &grid, std::size_t px, std::size_t qy);

// One application of the operator. The image carries seam traces for seam_jump_report.
GridFunction2D rb2_apply(const Ifs2D &ifs, const GridFunction2D &f, SeamPolicy policy);

struct FixedPoint2D {
    GridFunction2D surface;
    std::size_t iterations = 0;
    std::vector<double> step_norms; // sup |f_{k+1} - f_k| per iteration
};

// Iterates from the bilinear interpolant on a resolution x resolution lattice.
FixedPoint2D fixed_point_2d(const Ifs2D &ifs, SeamPolicy policy, const FixedPointConfig &cfg);

double knot_residual(const GridFunction2D &f, const GridData2D &grid);

// Maximum branch disagreement along each interior seam, keyed "x=n" / "y=m".
std::map<std::string, double> seam_jump_report(const GridFunction2D &f, const Ifs2D &ifs);

double integrate2d_closed_form(const Ifs2D &ifs, SeamPolicy policy = SeamPolicy::AverageG);
double integrate2d_quadrature(const Ifs2D &ifs, SeamPolicy policy, const FixedPointConfig &cfg);
double midpoint_integral(const GridFunction2D &f);

namespace detail {

// Lattice node along one axis: its coordinate, the half-open cell it falls in, and the
// interior knot it coincides with (or -1).
struct AxisNode {
    double coord = 0.0;
    std::uint32_t cell = 0;
    std::int32_t seam = -1;
};

std::vector<AxisNode> axis_nodes(std::span<const double> knots, double lo, double hi, std::size_t intervals);

} // namespace detail

} // namespace fif
