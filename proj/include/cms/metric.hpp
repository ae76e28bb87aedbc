#pragma once

#include <array>

#include "cms/domain.hpp"
#include "cms/errors.hpp"
#include "cms/expr.hpp"
#include "cms/linalg.hpp"

namespace cms {

// Symmetric 3x3 matrix of scalar fields.
struct MetricField {
    std::array<std::array<ScalarField, 3>, 3> g;

    const ScalarField& operator()(int i, int j) const { return g[i][j]; }

    Mat3 evaluate(const Point3& p) const {
        Mat3 r{};
        for (int i = 0; i < 3; ++i) {
            r[i][i] = g[i][i](p);
            for (int j = i + 1; j < 3; ++j) r[i][j] = r[j][i] = g[i][j](p);
        }
        return r;
    }

    static MetricField from_entries(ScalarField g11, ScalarField g12, ScalarField g13,
                                    ScalarField g22, ScalarField g23, ScalarField g33) {
        MetricField m;
        m.g[0][0] = std::move(g11);
        m.g[1][1] = std::move(g22);
        m.g[2][2] = std::move(g33);
        m.g[0][1] = m.g[1][0] = std::move(g12);
        m.g[0][2] = m.g[2][0] = std::move(g13);
        m.g[1][2] = m.g[2][1] = std::move(g23);
        return m;
    }

    static MetricField scaled(const MetricField& base, const ScalarField& factor) {
        MetricField m = base;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m.g[i][j] = factor * base.g[i][j];
        return m;
    }
};

// Positive definiteness at a point via leading principal minors; the
// smallest admissible minor is 1e-12.
inline void require_positive_definite(const Mat3& m, const Point3& witness, double tol = 1e-12) {
    auto minors = leading_minors(m);
    for (int k = 0; k < 3; ++k) {
        if (!(minors[k] > tol)) throw NotPositiveDefiniteError(witness, k + 1, minors[k]);
    }
}

inline void require_positive_definite(const MetricField& g, const Domain& domain,
                                      double tol = 1e-12) {
    for (const Point3& p : domain.points()) require_positive_definite(g.evaluate(p), p, tol);
}

}  // namespace cms
