#pragma once

#include <vector>

namespace fif {

struct Point {
    double t = 0.0;
    double x = 0.0;

    bool operator==(const Point &) const = default;
    auto operator<=>(const Point &) const = default;
};

using PointSet = std::vector<Point>;

} // namespace fif
