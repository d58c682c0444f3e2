#pragma once

// Seeded random inputs for property tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "fif/fis2d.hpp"
#include "fif/ifs1d.hpp"
#include "fif/point.hpp"

namespace gen {

class Source {
  public:
    explicit Source(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }

    std::vector<double> increasing(std::size_t count, bool uniform_steps) {
        std::vector<double> ks(count);
        double t = uniform(-2.0, 2.0);
        const double h = uniform(0.2, 1.5);
        for (auto &k : ks) {
            k = t;
            t += uniform_steps ? h : uniform(0.05, 1.5);
        }
        return ks;
    }

    std::vector<double> values(std::size_t count, double amplitude = 2.0) {
        std::vector<double> vs(count);
        for (auto &v : vs)
            v = uniform(-amplitude, amplitude);
        return vs;
    }

    // N subintervals in [min_n, max_n].
    fif::DataSet1D dataset(std::size_t min_n = 2, std::size_t max_n = 5, bool uniform_steps = false) {
        const std::size_t n = index(min_n, max_n);
        return fif::DataSet1D(increasing(n + 1, uniform_steps), values(n + 1));
    }

    // Knots on the uniform M-interval grid over [0, span], so grid functions sample them exactly.
    fif::DataSet1D dataset_on_grid(std::size_t grid, std::size_t min_n = 2, std::size_t max_n = 5) {
        const std::size_t n = index(min_n, max_n);
        const double span = uniform(0.5, 3.0);
        std::vector<std::size_t> idx{0, grid};
        while (idx.size() < n + 1) {
            const std::size_t i = index(1, grid - 1);
            if (std::find(idx.begin(), idx.end(), i) == idx.end())
                idx.push_back(i);
        }
        std::sort(idx.begin(), idx.end());
        std::vector<double> ks;
        for (auto i : idx)
            ks.push_back(i == grid ? span : span * static_cast<double>(i) / static_cast<double>(grid));
        return fif::DataSet1D(std::move(ks), values(n + 1));
    }

    fif::ScalingVector alphas(std::size_t n, double bound) {
        std::vector<double> a(n);
        for (auto &v : a)
            v = uniform(-bound, bound);
        return fif::ScalingVector(std::move(a));
    }

    std::vector<fif::Point> points(std::size_t count, double lo = -1.0, double hi = 1.0) {
        std::vector<fif::Point> p(count);
        for (auto &q : p)
            q = {uniform(lo, hi), uniform(lo, hi)};
        return p;
    }

    fif::GridData2D grid(std::size_t nx, std::size_t ny) {
        auto xs = increasing(nx + 1, false);
        auto ys = increasing(ny + 1, false);
        return fif::GridData2D(std::move(xs), std::move(ys), values((nx + 1) * (ny + 1)));
    }

    std::mt19937_64 &engine() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

} // namespace gen
