#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fif/grid.hpp"
#include "fif/ifs1d.hpp"
#include "fif/point.hpp"

namespace fif {

enum class MapWeighting {
    Uniform,          // every map equally likely
    DomainContraction // map n chosen with probability a_n
};

struct ChaosGameConfig {
    std::uint64_t seed = 0;
    std::size_t iterations = 100000; // per chain, burn-in included
    std::size_t burn_in = 100;
    MapWeighting weighting = MapWeighting::Uniform;
    std::size_t chains = 1;          // independent chains, concatenated in chain order

    void validate() const;
};

struct AttractorOptions {
    bool snap = true;
    std::size_t snap_resolution = 4096;       // cells per axis for deduplication
    std::size_t snap_threshold = 1'000'000;   // snap only once a step yields more points
    std::size_t memory_guard = 50'000'000;    // max points per step without snapping
};

struct Bounds {
    double t0 = 0.0, t1 = 0.0;
    double x0 = 0.0, x1 = 0.0;

    bool operator==(const Bounds &) const = default;
};

// Visit counts on a width x height grid of cells, stored row-major top to bottom:
// row 0 holds the largest x values.
class Raster {
  public:
    Raster(std::size_t width, std::size_t height, Bounds bounds);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    const Bounds &bounds() const noexcept { return bounds_; }

    std::uint32_t at(std::size_t row, std::size_t col) const { return cells_[row * width_ + col]; }
    std::uint32_t &at(std::size_t row, std::size_t col) { return cells_[row * width_ + col]; }
    const std::vector<std::uint32_t> &cells() const noexcept { return cells_; }

    std::size_t occupied() const noexcept;
    std::uint32_t max_count() const noexcept;

    bool operator==(const Raster &) const = default;

  private:
    std::size_t width_;
    std::size_t height_;
    Bounds bounds_;
    std::vector<std::uint32_t> cells_;
};

PointSet data_points(const Ifs1D &ifs);

// w_n(t, x) = (L_n(t), F_n(t, x))
Point apply_map(const Ifs1D &ifs, std::size_t n, const Point &p);

// Union of w_n(B) over all maps, ordered map-major. Throws DomainError on empty input.
PointSet hutchinson_step(const Ifs1D &ifs, const PointSet &b);

// k Hutchinson steps from b0, deduplicating on a snap grid once steps grow large.
PointSet deterministic_attractor(const Ifs1D &ifs, PointSet b0, std::size_t k, const AttractorOptions &opts = {});

// Random iteration from (t_0, x_0); reproducible for a given config.
PointSet chaos_game(const Ifs1D &ifs, const ChaosGameConfig &cfg);

// Symmetric Hausdorff distance in the Euclidean metric, brute force over all pairs.
double hausdorff_distance(const PointSet &a, const PointSet &b);

// Lipschitz bound of the maps in the Euclidean metric: max_n of the spectral norm of
// [[a_n, 0], [q_{n1}, alpha_n]]. Bounds h(F(B), F(C)) / h(B, C) for any B, C.
double euclidean_contraction_factor(const Ifs1D &ifs);

// max(max_n a_n, max_n |alpha_n|)
double product_contraction_factor(const Ifs1D &ifs);

// max |x - f(t)| over the k-th Hutchinson iterate of the data points.
double graph_coincidence_check(const Ifs1D &ifs, const GridFunction1D &f, std::size_t k);

Bounds bounding_box(const PointSet &points);

// Bins over the tight bounding box. A degenerate axis is widened to +-0.5 around its value.
Raster rasterize(const PointSet &points, std::size_t width, std::size_t height);
Raster rasterize(const PointSet &points, std::size_t width, std::size_t height, const Bounds &bounds);

struct OccupancyDiff {
    std::size_t occupied_union = 0;
    std::size_t differing = 0; // occupied in exactly one raster
    double fraction() const noexcept {
        return occupied_union == 0 ? 0.0 : static_cast<double>(differing) / static_cast<double>(occupied_union);
    }
};

OccupancyDiff compare_occupancy(const Raster &a, const Raster &b);

} // namespace fif
