#pragma once

// Fixed-size 3x3 numeric helpers. Everything here is exact cofactor
// arithmetic; no iterative solver is involved.

#include <array>
#include <cmath>

#include "cms/errors.hpp"

namespace cms {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

inline Mat3 mat3_identity() {
    return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
}

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec3 operator*(double s, const Vec3& a) {
    return {s * a[0], s * a[1], s * a[2]};
}

inline Vec3 mat_vec(const Mat3& m, const Vec3& v) {
    return {dot(m[0], v), dot(m[1], v), dot(m[2], v)};
}

inline Mat3 mat_mul(const Mat3& a, const Mat3& b) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            r[i][j] = 0.0;
            for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

inline Mat3 transpose(const Mat3& m) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = m[j][i];
    return r;
}

inline double det3(const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Adjugate: adj[i][j] is the cofactor of m[j][i], so m * adj = det * I.
inline Mat3 adjugate3(const Mat3& m) {
    Mat3 a{};
    a[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    a[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
    a[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
    a[1][0] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    a[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
    a[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
    a[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    a[2][1] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
    a[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return a;
}

inline Mat3 inverse3(const Mat3& m, const Point3& witness, double tol = 0.0) {
    double d = det3(m);
    if (std::abs(d) <= tol || d == 0.0) throw SingularMatrixError(witness, d);
    Mat3 a = adjugate3(m);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] /= d;
    return a;
}

// Leading principal minors (orders 1, 2, 3).
inline std::array<double, 3> leading_minors(const Mat3& m) {
    double m1 = m[0][0];
    double m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    double m3 = det3(m);
    return {m1, m2, m3};
}

inline double max_abs(const Mat3& m) {
    double r = 0.0;
    for (const auto& row : m)
        for (double v : row) r = std::max(r, std::abs(v));
    return r;
}

inline double max_abs(const Vec3& v) {
    return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

}  // namespace cms
