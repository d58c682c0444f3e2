#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fif {

// Interpolation data {(t_n, x_n) : n = 0..N}, N >= 2, with strictly increasing knots.
class DataSet1D {
  public:
    DataSet1D(std::vector<double> knots, std::vector<double> values);

    std::span<const double> knots() const noexcept { return knots_; }
    std::span<const double> values() const noexcept { return values_; }

    // Number of subintervals N.
    std::size_t intervals() const noexcept { return knots_.size() - 1; }

    double first_knot() const noexcept { return knots_.front(); }
    double last_knot() const noexcept { return knots_.back(); }
    double first_value() const noexcept { return values_.front(); }
    double last_value() const noexcept { return values_.back(); }
    double span() const noexcept { return knots_.back() - knots_.front(); }
    double max_abs_value() const noexcept;

    bool operator==(const DataSet1D &) const = default;

  private:
    std::vector<double> knots_;
    std::vector<double> values_;
};

// Vertical scaling factors alpha_1..alpha_N, each strictly inside (-1, 1).
class ScalingVector {
  public:
    explicit ScalingVector(std::vector<double> alphas);
    static ScalingVector broadcast(double alpha, std::size_t count);

    std::span<const double> values() const noexcept { return alphas_; }
    std::size_t size() const noexcept { return alphas_.size(); }
    double operator[](std::size_t i) const { return alphas_[i]; }
    double max_abs() const noexcept;

    bool operator==(const ScalingVector &) const = default;

  private:
    std::vector<double> alphas_;
};

struct AffineMap1D {
    double a = 1.0;
    double b = 0.0;

    double operator()(double t) const noexcept { return a * t + b; }
    double inverse(double t) const noexcept { return (t - b) / a; }

    bool operator==(const AffineMap1D &) const = default;
};

// F(t, x) = alpha * x + q1 * t + q0
struct VerticalMap1D {
    double alpha = 0.0;
    double q1 = 0.0;
    double q0 = 0.0;

    double q(double t) const noexcept { return q1 * t + q0; }
    double operator()(double t, double x) const noexcept { return alpha * x + q1 * t + q0; }

    bool operator==(const VerticalMap1D &) const = default;
};

// The IFS {(L_n, F_n) : n = 1..N}. Maps are stored 0-based: lmaps()[i] is L_{i+1}.
//
// The constructor only checks shapes and finiteness so that deliberately broken
// systems (perturbed coefficients, |alpha| >= 1) can be built for experiments.
// Use build_ifs() for the solver path and validate_ifs() to audit any instance.
class Ifs1D {
  public:
    Ifs1D(DataSet1D data, std::vector<AffineMap1D> lmaps, std::vector<VerticalMap1D> vmaps);

    const DataSet1D &data() const noexcept { return data_; }
    std::span<const AffineMap1D> lmaps() const noexcept { return lmaps_; }
    std::span<const VerticalMap1D> vmaps() const noexcept { return vmaps_; }
    std::size_t size() const noexcept { return lmaps_.size(); }

    // s = max_n a_n
    double contractivity() const noexcept;
    // delta = max_n |alpha_n|
    double vertical_contractivity() const noexcept;

    // Subinterval index for t: [t_{i}, t_{i+1}) -> i, with t_N -> N-1. Clamps outside the domain.
    std::size_t locate(double t) const noexcept;

    Ifs1D with_vmap(std::size_t i, const VerticalMap1D &vmap) const;

    bool operator==(const Ifs1D &) const = default;

  private:
    DataSet1D data_;
    std::vector<AffineMap1D> lmaps_;
    std::vector<VerticalMap1D> vmaps_;
};

// Contractions of [k_0, k_K] onto each [k_{i}, k_{i+1}], shared by both axes of the 2D builder.
std::vector<AffineMap1D> build_axis_maps(std::span<const double> knots);

std::vector<AffineMap1D> build_lmaps(const DataSet1D &data);
std::vector<VerticalMap1D> solve_qn(const DataSet1D &data, const ScalingVector &alphas);
Ifs1D build_ifs(const DataSet1D &data, const ScalingVector &alphas);

// Residuals of the endpoint conditions for one pair (L_n, F_n).
struct MapCheck {
    double lmap_first = 0.0;  // |L_n(t_0) - t_{n-1}|
    double lmap_last = 0.0;   // |L_n(t_N) - t_n|
    double vmap_first = 0.0;  // |F_n(t_0, x_0) - x_{n-1}|
    double vmap_last = 0.0;   // |F_n(t_N, x_N) - x_n|
    double domain_factor = 0.0;   // |a_n|
    double vertical_factor = 0.0; // |alpha_n|

    double max_residual() const noexcept;
    bool contractive() const noexcept { return domain_factor < 1.0 && vertical_factor < 1.0; }
};

struct ValidationReport {
    std::vector<MapCheck> maps;
    double tol = 0.0;
    double max_residual = 0.0;
    bool contractive = true;
    bool pass = true;
};

ValidationReport validate_ifs(const Ifs1D &ifs, double tol = 1e-9);

} // namespace fif
