#include "fif/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <unordered_set>

#include "fif/error.hpp"
#include "fif/kernels.hpp"

namespace fif {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// [0, 1) from the top 53 bits; identical on every platform, unlike std distributions
double unit_double(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Bounds widen_degenerate(Bounds b) {
    if (b.t1 == b.t0) {
        b.t0 -= 0.5;
        b.t1 += 0.5;
    }
    if (b.x1 == b.x0) {
        b.x0 -= 0.5;
        b.x1 += 0.5;
    }
    return b;
}

std::size_t bin(double v, double lo, double hi, std::size_t cells) {
    const double s = (v - lo) / (hi - lo) * static_cast<double>(cells);
    if (!(s > 0.0))
        return 0;
    return std::min(static_cast<std::size_t>(s), cells - 1);
}

PointSet snap_dedup(const PointSet &points, std::size_t resolution) {
    const Bounds b = widen_degenerate(bounding_box(points));
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(points.size());
    PointSet kept;
    for (const auto &p : points) {
        const std::uint64_t key = static_cast<std::uint64_t>(bin(p.t, b.t0, b.t1, resolution)) * resolution +
                                  bin(p.x, b.x0, b.x1, resolution);
        if (seen.insert(key).second)
            kept.push_back(p);
    }
    return kept;
}

} // namespace

void ChaosGameConfig::validate() const {
    if (iterations <= burn_in)
        throw DomainError("chaos game needs more iterations than burn-in steps");
    if (chains < 1)
        throw DomainError("chaos game needs at least one chain");
}

Raster::Raster(std::size_t width, std::size_t height, Bounds bounds)
    : width_(width), height_(height), bounds_(bounds), cells_(width * height, 0) {
    if (width_ == 0 || height_ == 0)
        throw DomainError("raster dimensions must be positive");
}

std::size_t Raster::occupied() const noexcept {
    return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [](auto c) { return c != 0; }));
}

std::uint32_t Raster::max_count() const noexcept {
    return cells_.empty() ? 0 : *std::max_element(cells_.begin(), cells_.end());
}

PointSet data_points(const Ifs1D &ifs) {
    PointSet pts;
    const auto &d = ifs.data();
    for (std::size_t i = 0; i < d.knots().size(); ++i)
        pts.push_back({d.knots()[i], d.values()[i]});
    return pts;
}

Point apply_map(const Ifs1D &ifs, std::size_t n, const Point &p) {
    if (n >= ifs.size())
        throw IndexError("map index " + std::to_string(n) + " out of range");
    return {ifs.lmaps()[n](p.t), ifs.vmaps()[n](p.t, p.x)};
}

PointSet hutchinson_step(const Ifs1D &ifs, const PointSet &b) {
    if (b.empty())
        throw DomainError("Hutchinson operator needs a nonempty set");
    PointSet out(b.size() * ifs.size());
    kernels::omp::hutchinson(ifs, b, out);
    return out;
}

PointSet deterministic_attractor(const Ifs1D &ifs, PointSet b0, std::size_t k, const AttractorOptions &opts) {
    if (b0.empty())
        throw DomainError("deterministic iteration needs a nonempty start set");
    PointSet current = std::move(b0);
    for (std::size_t step = 0; step < k; ++step) {
        const std::size_t next_size = current.size() * ifs.size();
        if (!opts.snap && next_size > opts.memory_guard)
            throw ResourceError("Hutchinson step " + std::to_string(step + 1) + " would hold " +
                                std::to_string(next_size) + " points; enable snapping");
        current = hutchinson_step(ifs, current);
        if (opts.snap && current.size() > opts.snap_threshold)
            current = snap_dedup(current, opts.snap_resolution);
    }
    return current;
}

PointSet chaos_game(const Ifs1D &ifs, const ChaosGameConfig &cfg) {
    cfg.validate();
    const std::size_t maps = ifs.size();
    std::vector<double> cumulative;
    if (cfg.weighting == MapWeighting::DomainContraction) {
        double acc = 0.0;
        for (const auto &l : ifs.lmaps())
            cumulative.push_back(acc += std::abs(l.a));
        for (auto &c : cumulative)
            c /= acc;
    }

    const std::size_t kept = cfg.iterations - cfg.burn_in;
    PointSet out(kept * cfg.chains);
    const Point start{ifs.data().first_knot(), ifs.data().first_value()};
    const auto chains = static_cast<std::int64_t>(cfg.chains);

    // each chain is sequential; chains are independent and write disjoint ranges
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < chains; ++c) {
        std::mt19937_64 rng(c == 0 ? cfg.seed : splitmix64(cfg.seed + static_cast<std::uint64_t>(c)));
        Point p = start;
        Point *dst = out.data() + static_cast<std::size_t>(c) * kept;
        for (std::size_t it = 0; it < cfg.iterations; ++it) {
            std::size_t n;
            if (cumulative.empty()) {
                n = static_cast<std::size_t>(rng() % maps);
            } else {
                const double u = unit_double(rng);
                n = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                             cumulative.begin());
                n = std::min(n, maps - 1);
            }
            p = {ifs.lmaps()[n](p.t), ifs.vmaps()[n](p.t, p.x)};
            if (it >= cfg.burn_in)
                dst[it - cfg.burn_in] = p;
        }
    }
    return out;
}

double hausdorff_distance(const PointSet &a, const PointSet &b) {
    if (a.empty() || b.empty())
        throw DomainError("Hausdorff distance needs two nonempty sets");
    return std::max(kernels::omp::directed_hausdorff(a, b), kernels::omp::directed_hausdorff(b, a));
}

double euclidean_contraction_factor(const Ifs1D &ifs) {
    double worst = 0.0;
    for (std::size_t n = 0; n < ifs.size(); ++n) {
        // largest singular value of [[a, 0], [c, d]]
        const double a = ifs.lmaps()[n].a;
        const double c = ifs.vmaps()[n].q1;
        const double d = ifs.vmaps()[n].alpha;
        const double fro = a * a + c * c + d * d;
        const double det = a * d;
        const double disc = std::sqrt(std::max(0.0, fro * fro - 4.0 * det * det));
        worst = std::max(worst, std::sqrt(0.5 * (fro + disc)));
    }
    return worst;
}

double product_contraction_factor(const Ifs1D &ifs) {
    return std::max(ifs.contractivity(), ifs.vertical_contractivity());
}

double graph_coincidence_check(const Ifs1D &ifs, const GridFunction1D &f, std::size_t k) {
    const auto pts = deterministic_attractor(ifs, data_points(ifs), k);
    double worst = 0.0;
    for (const auto &p : pts)
        worst = std::max(worst, std::abs(p.x - f(p.t)));
    return worst;
}

Bounds bounding_box(const PointSet &points) {
    if (points.empty())
        throw DomainError("bounding box of an empty set");
    Bounds b{points[0].t, points[0].t, points[0].x, points[0].x};
    for (const auto &p : points) {
        b.t0 = std::min(b.t0, p.t);
        b.t1 = std::max(b.t1, p.t);
        b.x0 = std::min(b.x0, p.x);
        b.x1 = std::max(b.x1, p.x);
    }
    return b;
}

Raster rasterize(const PointSet &points, std::size_t width, std::size_t height) {
    return rasterize(points, width, height, bounding_box(points));
}

Raster rasterize(const PointSet &points, std::size_t width, std::size_t height, const Bounds &bounds) {
    if (points.empty())
        throw DomainError("cannot rasterize an empty point set");
    Raster r(width, height, widen_degenerate(bounds));
    const Bounds &b = r.bounds();
    for (const auto &p : points) {
        const std::size_t col = bin(p.t, b.t0, b.t1, width);
        const std::size_t row = height - 1 - bin(p.x, b.x0, b.x1, height);
        ++r.at(row, col);
    }
    return r;
}

OccupancyDiff compare_occupancy(const Raster &a, const Raster &b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw DomainError("rasters differ in size");
    OccupancyDiff d;
    for (std::size_t i = 0; i < a.cells().size(); ++i) {
        const bool oa = a.cells()[i] != 0, ob = b.cells()[i] != 0;
        d.occupied_union += (oa || ob) ? 1 : 0;
        d.differing += (oa != ob) ? 1 : 0;
    }
    return d;
}

} // namespace fif
