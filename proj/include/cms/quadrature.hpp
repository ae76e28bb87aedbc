#pragma once

#include <cmath>
#include <utility>

#include "cms/errors.hpp"

namespace cms {

// Composite Simpson with a fixed even step count; all integrals of the
// closed-form solution run upward from the same base point, so any constant
// of integration is absorbed into the caller's K(x3).
struct QuadratureConfig {
    int steps = 256;
    double base_x2 = 1.0;

    void validate() const {
        if (steps < 16 || steps % 2 != 0)
            throw ConfigError("quadrature steps must be even and at least 16, got " +
                              std::to_string(steps));
    }
};

// Integral of fn over the signed interval [a, b] with n subintervals
// (n even). Exact for cubics.
template <typename F>
double simpson(F&& fn, double a, double b, int n) {
    if (n < 2 || n % 2 != 0) throw ConfigError("simpson: step count must be even and positive");
    if (a == b) return 0.0;
    const double h = (b - a) / n;
    double acc = fn(a) + fn(b);
    for (int i = 1; i < n; ++i) acc += fn(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace cms
