#pragma once

#include <array>
#include <vector>

#include "cms/errors.hpp"
#include "cms/expr.hpp"

namespace cms {

// An axis-aligned box with a per-axis cell count. Evaluation points are the
// cell centers, which keeps boundary loci (and any axis-aligned excluded set
// on a cell edge) out of the sweep by construction.
struct Domain {
    std::array<double, 3> lo{0.0, 0.0, 0.0};
    std::array<double, 3> hi{1.0, 1.0, 1.0};
    std::array<int, 3> cells{2, 2, 2};

    void validate() const {
        for (int a = 0; a < 3; ++a) {
            if (!(lo[a] < hi[a]))
                throw ConfigError("domain: min must be strictly below max on axis " +
                                  std::to_string(a + 1));
            if (cells[a] < 1)
                throw ConfigError("domain: grid must be at least 1 cell on axis " +
                                  std::to_string(a + 1));
        }
    }

    double step(int axis) const { return (hi[axis] - lo[axis]) / cells[axis]; }

    Point3 center(int i, int j, int k) const {
        return {lo[0] + (i + 0.5) * step(0), lo[1] + (j + 0.5) * step(1),
                lo[2] + (k + 0.5) * step(2)};
    }

    std::size_t point_count() const {
        return static_cast<std::size_t>(cells[0]) * cells[1] * cells[2];
    }

    std::vector<Point3> points() const {
        std::vector<Point3> pts;
        pts.reserve(point_count());
        for (int i = 0; i < cells[0]; ++i)
            for (int j = 0; j < cells[1]; ++j)
                for (int k = 0; k < cells[2]; ++k) pts.push_back(center(i, j, k));
        return pts;
    }

    bool contains(const Point3& p) const {
        return p.x1 >= lo[0] && p.x1 <= hi[0] && p.x2 >= lo[1] && p.x2 <= hi[1] &&
               p.x3 >= lo[2] && p.x3 <= hi[2];
    }
};

}  // namespace cms
