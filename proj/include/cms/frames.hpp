#pragma once

// Frame fields over a coordinate patch: the simplified B-matrix, its frame,
// Lie brackets and structure functions.

#include <array>
#include <string>
#include <utility>

#include "cms/domain.hpp"
#include "cms/errors.hpp"
#include "cms/expr.hpp"
#include "cms/linalg.hpp"

namespace cms {

using VectorField = std::array<ScalarField, 3>;
using OneForm = std::array<ScalarField, 3>;

// 3x3 matrix of scalar fields with pointwise evaluation and exact cofactor
// inverse on the symbolic side.
struct MatrixField {
    std::array<std::array<ScalarField, 3>, 3> m;

    const ScalarField& operator()(int i, int j) const { return m[i][j]; }
    ScalarField& operator()(int i, int j) { return m[i][j]; }

    Mat3 evaluate(const Point3& p) const {
        Mat3 r{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r[i][j] = m[i][j](p);
        return r;
    }

    static MatrixField identity() {
        MatrixField f;
        for (int i = 0; i < 3; ++i) f.m[i][i] = ScalarField::literal(1.0);
        return f;
    }
};

inline ScalarField symbolic_det(const MatrixField& b) {
    const auto& m = b.m;
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline MatrixField symbolic_adjugate(const MatrixField& b) {
    const auto& m = b.m;
    MatrixField a;
    a.m[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    a.m[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
    a.m[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
    a.m[1][0] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    a.m[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
    a.m[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
    a.m[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    a.m[2][1] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
    a.m[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return a;
}

inline MatrixField symbolic_inverse(const MatrixField& b) {
    ScalarField det = symbolic_det(b);
    MatrixField inv = symbolic_adjugate(b);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) inv.m[i][j] = inv.m[i][j] / det;
    return inv;
}

// X(f) = X^i d_i f
inline ScalarField directional_derivative(const VectorField& x, const ScalarField& f) {
    ScalarField acc;
    for (int i = 0; i < 3; ++i) acc = acc + x[i] * f.differentiate(i + 1);
    return acc;
}

// [X,Y]^j = X^i d_i Y^j - Y^i d_i X^j
inline VectorField lie_bracket(const VectorField& x, const VectorField& y) {
    VectorField r;
    for (int j = 0; j < 3; ++j)
        r[j] = directional_derivative(x, y[j]) - directional_derivative(y, x[j]);
    return r;
}

inline Vec3 evaluate(const VectorField& v, const Point3& p) {
    return {v[0](p), v[1](p), v[2](p)};
}

// Orthonormal frame written in coordinate components; row a of the B-matrix
// holds the components of e_a.
struct Frame {
    VectorField e1, e2, e3;

    const VectorField& field(int a) const {
        switch (a) {
            case 1: return e1;
            case 2: return e2;
        }
        return e3;
    }

    MatrixField b_matrix() const {
        MatrixField b;
        for (int j = 0; j < 3; ++j) {
            b.m[0][j] = e1[j];
            b.m[1][j] = e2[j];
            b.m[2][j] = e3[j];
        }
        return b;
    }
};

enum class ZetaProvenance { UserGiven, LinearBranch, RiccatiBranch };

inline const char* to_string(ZetaProvenance p) {
    switch (p) {
        case ZetaProvenance::UserGiven: return "user-given";
        case ZetaProvenance::LinearBranch: return "linear branch";
        case ZetaProvenance::RiccatiBranch: return "riccati branch";
    }
    return "?";
}

// Generators of the B-matrix in simplifying coordinates:
//
//       [ alpha  beta   0    ]
//   B = [ delta  eps    zeta ]
//       [ 1      0      0    ]
//
// with delta = alpha*eps/beta + F derived, and alpha, beta, zeta, F free of
// x1. det B = beta*zeta.
struct SimplifiedB {
    ScalarField alpha, beta, epsilon, zeta, F;
    ScalarField delta;  // alpha*eps/beta + F
    ZetaProvenance zeta_provenance = ZetaProvenance::UserGiven;
    std::string zeta_note;

    MatrixField matrix() const {
        MatrixField b;
        b.m[0] = {alpha, beta, ScalarField::literal(0.0)};
        b.m[1] = {delta, epsilon, zeta};
        b.m[2] = {ScalarField::literal(1.0), ScalarField::literal(0.0),
                  ScalarField::literal(0.0)};
        return b;
    }
};

namespace detail {

inline void require_x1_free(const ScalarField& f, const char* name) {
    if (f.depends_on(1))
        throw FieldConstraintError(std::string("field '") + name +
                                   "' must not reference x1, got: " + f.str());
}

inline void require_nonzero_on(const ScalarField& f, const char* name, const Domain& domain,
                               double tol = 1e-12) {
    for (const Point3& p : domain.points()) {
        double v = f(p);
        if (std::abs(v) <= tol) throw ZeroOnDomainError(name, p);
    }
}

}  // namespace detail

inline SimplifiedB build_simplified_b(const ScalarField& alpha, const ScalarField& beta,
                                      const ScalarField& epsilon, const ScalarField& F,
                                      const ScalarField& zeta, const Domain& domain,
                                      ZetaProvenance provenance = ZetaProvenance::UserGiven,
                                      std::string zeta_note = {}) {
    detail::require_x1_free(alpha, "alpha");
    detail::require_x1_free(beta, "beta");
    detail::require_x1_free(zeta, "zeta");
    detail::require_x1_free(F, "F");
    detail::require_nonzero_on(beta, "beta", domain);
    detail::require_nonzero_on(zeta, "zeta", domain);
    SimplifiedB b;
    b.alpha = alpha;
    b.beta = beta;
    b.epsilon = epsilon;
    b.zeta = zeta;
    b.F = F;
    b.delta = alpha * epsilon / beta + F;
    b.zeta_provenance = provenance;
    b.zeta_note = std::move(zeta_note);
    return b;
}

// Rows of the B-matrix as vector fields: e1 = alpha d1 + beta d2,
// e2 = delta d1 + eps d2 + zeta d3, e3 = d1.
inline Frame frame_fields(const SimplifiedB& b) {
    Frame f;
    f.e1 = {b.alpha, b.beta, ScalarField::literal(0.0)};
    f.e2 = {b.delta, b.epsilon, b.zeta};
    f.e3 = {ScalarField::literal(1.0), ScalarField::literal(0.0), ScalarField::literal(0.0)};
    return f;
}

inline Mat3 invert_b(const MatrixField& b, const Point3& p) {
    return inverse3(b.evaluate(p), p);
}

inline Mat3 invert_b(const SimplifiedB& b, const Point3& p) {
    return invert_b(b.matrix(), p);
}

// c^gamma_{alpha beta} with exact antisymmetry in (alpha, beta); indices are
// 1-based frame labels.
struct StructureFunctions {
    double data[3][3][3] = {};

    double c(int gamma, int alpha, int beta) const {
        return data[gamma - 1][alpha - 1][beta - 1];
    }
};

// c^gamma_{ab} = (b^-1)^gamma_j (b^i_a d_i b^j_b - b^i_b d_i b^j_a)(p).
// (b^-1)^gamma_j is row j, column gamma of B^-1.
inline StructureFunctions structure_functions(const MatrixField& b, const Point3& p) {
    Mat3 binv = invert_b(b, p);
    StructureFunctions sf;
    for (int a = 0; a < 3; ++a) {
        for (int bb = a + 1; bb < 3; ++bb) {
            for (int j = 0; j < 3; ++j) {
                double acc = 0.0;
                for (int i = 0; i < 3; ++i) {
                    acc += b.m[a][i](p) * b.m[bb][j].differentiate(i + 1)(p) -
                           b.m[bb][i](p) * b.m[a][j].differentiate(i + 1)(p);
                }
                for (int gamma = 0; gamma < 3; ++gamma) {
                    sf.data[gamma][a][bb] += binv[j][gamma] * acc;
                }
            }
            for (int gamma = 0; gamma < 3; ++gamma)
                sf.data[gamma][bb][a] = -sf.data[gamma][a][bb];
        }
    }
    return sf;
}

inline StructureFunctions structure_functions(const SimplifiedB& b, const Point3& p) {
    return structure_functions(b.matrix(), p);
}

inline StructureFunctions structure_functions(const Frame& frame, const Point3& p) {
    return structure_functions(frame.b_matrix(), p);
}

// Coefficients of v in the frame at p: v = coeff_a e_a.
inline Vec3 frame_coefficients(const MatrixField& b, const Point3& p, const Vec3& v) {
    Mat3 binv = invert_b(b, p);
    Vec3 r{};
    for (int gamma = 0; gamma < 3; ++gamma) {
        r[gamma] = 0.0;
        for (int j = 0; j < 3; ++j) r[gamma] += binv[j][gamma] * v[j];
    }
    return r;
}

// Pointwise invariants of a phi-eigenbasis candidate, read off the structure
// functions with f = c^3_12:
//
//   lambda = (c^2_31 - c^1_23) / f      a = -1 + (c^2_31 + c^1_23) / f
//   b      = -2 c^1_12 / f              c = 2 c^2_12 / f
struct FrameInvariants {
    double lambda = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double f = 0.0;
};

inline FrameInvariants frame_invariants(const Frame& frame, const Point3& p) {
    StructureFunctions sf = structure_functions(frame, p);
    double f = sf.c(3, 1, 2);
    if (std::abs(f) < 1e-8)
        throw FrameDegenerateError("c^3_12 vanishes at " + point_str(p) +
                                       "; the frame invariants are undefined there",
                                   p);
    FrameInvariants inv;
    inv.f = f;
    inv.lambda = (sf.c(2, 3, 1) - sf.c(1, 2, 3)) / f;
    inv.a = -1.0 + (sf.c(2, 3, 1) + sf.c(1, 2, 3)) / f;
    inv.b = -2.0 * sf.c(1, 1, 2) / f;
    inv.c = 2.0 * sf.c(2, 1, 2) / f;
    return inv;
}

}  // namespace cms
