#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "fif/error.hpp"

namespace fif {

// Samples of a function on the uniform grid t_i = t0 + i (tN - t0) / M, i = 0..M.
// Off-grid reads interpolate linearly between neighbouring samples.
class GridFunction1D {
  public:
    GridFunction1D(double t0, double tN, std::vector<double> samples)
        : t0_(t0), tN_(tN), samples_(std::move(samples)) {
        if (!(t0_ < tN_))
            throw DomainError("grid interval must satisfy t0 < tN");
        if (samples_.size() < 2)
            throw DomainError("a grid function needs at least two samples");
    }

    template <class F> static GridFunction1D sample(double t0, double tN, std::size_t intervals, F &&f) {
        GridFunction1D g(t0, tN, std::vector<double>(intervals + 1));
        for (std::size_t i = 0; i <= intervals; ++i)
            g.samples_[i] = f(g.abscissa(i));
        return g;
    }

    double first() const noexcept { return t0_; }
    double last() const noexcept { return tN_; }
    std::size_t intervals() const noexcept { return samples_.size() - 1; }
    double step() const noexcept { return (tN_ - t0_) / static_cast<double>(intervals()); }

    double abscissa(std::size_t i) const noexcept {
        if (i == intervals())
            return tN_;
        return t0_ + (tN_ - t0_) * static_cast<double>(i) / static_cast<double>(intervals());
    }

    std::span<const double> samples() const noexcept { return samples_; }
    std::span<double> samples() noexcept { return samples_; }
    double operator[](std::size_t i) const { return samples_[i]; }

    double operator()(double t) const noexcept {
        const auto m = intervals();
        const double s = (t - t0_) / (tN_ - t0_) * static_cast<double>(m);
        double cell = std::floor(s);
        cell = std::clamp(cell, 0.0, static_cast<double>(m - 1));
        const auto i = static_cast<std::size_t>(cell);
        const double w = std::clamp(s - cell, 0.0, 1.0);
        if (w == 0.0)
            return samples_[i];
        if (w == 1.0)
            return samples_[i + 1];
        return (1.0 - w) * samples_[i] + w * samples_[i + 1];
    }

    bool operator==(const GridFunction1D &) const = default;

  private:
    double t0_;
    double tN_;
    std::vector<double> samples_;
};

// Stopping rule and lattice size for fixed-point iteration of the operators.
struct FixedPointConfig {
    double tol = 1e-10;            // sup-norm change between iterates
    std::size_t max_iter = 200;
    std::size_t resolution = 4096; // grid intervals per axis

    void validate() const {
        if (!(tol > 0.0))
            throw DomainError("fixed-point tolerance must be positive");
        if (max_iter < 1)
            throw DomainError("max_iter must be at least 1");
        if (resolution < 1)
            throw DomainError("resolution must be at least 1");
    }
};

struct Rect {
    double x0 = 0.0, x1 = 1.0;
    double y0 = 0.0, y1 = 1.0;

    double width() const noexcept { return x1 - x0; }
    double height() const noexcept { return y1 - y0; }
    bool operator==(const Rect &) const = default;
};

// Values the two cells adjacent to a seam assign to points on it. For a seam x = x_k,
// `lower` comes from the cell left of the seam and `upper` from the cell right of it.
struct SeamTrace {
    std::size_t knot = 0;           // interior knot index k, 1..N-1
    std::vector<double> positions;  // coordinate along the seam
    std::vector<double> lower;
    std::vector<double> upper;

    bool operator==(const SeamTrace &) const = default;
};

// Samples on the uniform (P+1) x (Q+1) lattice over a rectangle, stored row-major with
// the x index outermost: value(i, j) = f(x_i, y_j). Operator images additionally keep
// per-branch seam traces for diagnostics.
class GridFunction2D {
  public:
    GridFunction2D(Rect domain, std::size_t px, std::size_t qy, std::vector<double> samples)
        : domain_(domain), px_(px), qy_(qy), samples_(std::move(samples)) {
        if (!(domain_.x0 < domain_.x1) || !(domain_.y0 < domain_.y1))
            throw DomainError("lattice rectangle is degenerate");
        if (px_ < 1 || qy_ < 1)
            throw DomainError("lattice needs at least one interval per axis");
        if (samples_.size() != (px_ + 1) * (qy_ + 1))
            throw DomainError("lattice sample count does not match its dimensions");
    }

    template <class F>
    static GridFunction2D sample(Rect domain, std::size_t px, std::size_t qy, F &&f) {
        GridFunction2D g(domain, px, qy, std::vector<double>((px + 1) * (qy + 1)));
        for (std::size_t i = 0; i <= px; ++i)
            for (std::size_t j = 0; j <= qy; ++j)
                g.samples_[i * (qy + 1) + j] = f(g.x(i), g.y(j));
        return g;
    }

    const Rect &domain() const noexcept { return domain_; }
    std::size_t x_intervals() const noexcept { return px_; }
    std::size_t y_intervals() const noexcept { return qy_; }

    double x(std::size_t i) const noexcept {
        return i == px_ ? domain_.x1
                        : domain_.x0 + domain_.width() * static_cast<double>(i) / static_cast<double>(px_);
    }
    double y(std::size_t j) const noexcept {
        return j == qy_ ? domain_.y1
                        : domain_.y0 + domain_.height() * static_cast<double>(j) / static_cast<double>(qy_);
    }

    double value(std::size_t i, std::size_t j) const { return samples_[i * (qy_ + 1) + j]; }
    std::span<const double> samples() const noexcept { return samples_; }
    std::span<double> samples() noexcept { return samples_; }

    // Bilinear interpolation, clamped to the rectangle.
    double operator()(double x, double y) const noexcept {
        const auto [i, wx] = locate(x, domain_.x0, domain_.x1, px_);
        const auto [j, wy] = locate(y, domain_.y0, domain_.y1, qy_);
        const std::size_t stride = qy_ + 1;
        const double *row0 = samples_.data() + i * stride;
        if (wx == 0.0 && wy == 0.0)
            return row0[j];
        const double *row1 = row0 + stride;
        const double lo = wy == 0.0 ? row0[j] : (1.0 - wy) * row0[j] + wy * row0[j + 1];
        if (wx == 0.0)
            return lo;
        const double hi = wy == 0.0 ? row1[j] : (1.0 - wy) * row1[j] + wy * row1[j + 1];
        return (1.0 - wx) * lo + wx * hi;
    }

    std::vector<SeamTrace> x_seams;
    std::vector<SeamTrace> y_seams;

    bool operator==(const GridFunction2D &) const = default;

  private:
    struct Slot {
        std::size_t index;
        double weight;
    };

    static Slot locate(double v, double lo, double hi, std::size_t n) noexcept {
        const double s = (v - lo) / (hi - lo) * static_cast<double>(n);
        const double cell = std::clamp(std::floor(s), 0.0, static_cast<double>(n - 1));
        return {static_cast<std::size_t>(cell), std::clamp(s - cell, 0.0, 1.0)};
    }

    Rect domain_;
    std::size_t px_;
    std::size_t qy_;
    std::vector<double> samples_;
};

} // namespace fif
