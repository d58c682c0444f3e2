#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fif/grid.hpp"
#include "fif/ifs1d.hpp"
#include "fif/point.hpp"

namespace fif {

// Continuous piecewise-linear function through (knots[i], values[i]). Reproduces the
// values exactly at the knots and extends the end segments linearly outside.
class PiecewiseLinear {
  public:
    PiecewiseLinear(std::vector<double> knots, std::vector<double> values);

    double operator()(double t) const noexcept;

    std::span<const double> knots() const noexcept { return knots_; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> slopes() const noexcept { return slopes_; }
    std::span<const double> intercepts() const noexcept { return intercepts_; }

  private:
    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> slopes_;
    std::vector<double> intercepts_;
};

// g0: the polyline through the data.
PiecewiseLinear build_g0(const DataSet1D &data);
// r: the chord through (t_0, x_0) and (t_N, x_N).
PiecewiseLinear build_chord(const DataSet1D &data);

// (Tf)(t) = F_n(L_n^{-1}(t), f(L_n^{-1}(t))) on the grid of f.
//
// Throws DomainError when f(t_0) != x_0 or f(t_N) != x_N, or when the two branch
// values at an interior knot disagree; both compared at tol * (1 + max|x|).
GridFunction1D rb_apply(const Ifs1D &ifs, const GridFunction1D &f, double tol = 1e-9);

// Same operator without the membership and continuity checks, for broken systems.
GridFunction1D rb_apply_unchecked(const Ifs1D &ifs, const GridFunction1D &f);

// |F_{k}(L_k^{-1}(t_k), .) - F_{k+1}(L_{k+1}^{-1}(t_k), .)| at every interior knot t_k.
std::vector<double> knot_branch_jumps(const Ifs1D &ifs, const GridFunction1D &f);

struct FixedPoint1D {
    GridFunction1D f;
    std::size_t iterations = 0;
    std::vector<double> step_norms; // sup |f_{k+1} - f_k|
};

// Iterates rb_apply from g0 until the sup-norm change drops to cfg.tol.
// Throws NonConvergenceError carrying the last change when max_iter is exhausted.
FixedPoint1D fixed_point(const Ifs1D &ifs, const FixedPointConfig &cfg);

double knot_residual(const GridFunction1D &f, const DataSet1D &data);

// Exact point of the FIF graph: w_{a_1} o ... o w_{a_k} applied to the data point at
// knot t. Address entries are 0-based map indices; t must be one of the knots.
Point eval_exact(const Ifs1D &ifs, std::span<const std::size_t> address, double t);

// max |q_n(L_n^{-1} t) - g0(t) + alpha_n r(L_n^{-1} t)| over `samples` points per subinterval.
double check_g0_qn_relation(const Ifs1D &ifs, std::size_t samples);

// max |f(t) - g0(t) - alpha_n (f - r)(L_n^{-1} t)| over up to `samples` grid nodes per subinterval.
double check_fixed_point_identity(const Ifs1D &ifs, const GridFunction1D &f, std::size_t samples);

double integrate_closed_form(const Ifs1D &ifs);
double integrate_quadrature(const Ifs1D &ifs, const FixedPointConfig &cfg);

// Composite midpoint rule on the linear reconstruction of the grid samples.
double midpoint_integral(const GridFunction1D &f);

// Largest |f(u) - f(v)| over grid pairs with |u - v| <= h.
double modulus_of_continuity(const GridFunction1D &f, double h);

struct ComparisonReport {
    double sup_diff = 0.0;  // ||FIF - polyline||_inf on the grid
    double w_f = 0.0;       // modulus of continuity of the polyline at the knot step
    double alpha_inf = 0.0;
    double f_inf = 0.0;     // ||polyline||_inf
    double bound_rhs = 0.0;
    bool bound_holds = false;
};

ComparisonReport compare_with_classical(const DataSet1D &data, const Ifs1D &ifs, const FixedPointConfig &cfg);

struct ViolationReport {
    double knot_residual = 0.0;  // of the perturbed system's limit
    double max_jump = 0.0;       // branch disagreement of T(g0) at interior knots
    double integral_shift = 0.0;
};

// Moves q_{n0} of map `map` (0-based) by `delta` and measures what breaks.
ViolationReport endpoint_violation_experiment(const Ifs1D &ifs, std::size_t map, double delta,
                                              const FixedPointConfig &cfg);

} // namespace fif
