#pragma once

// Branch analysis and solution of the reduced contact system: the linear
// formula for zeta when F vanishes, and the closed-form Riccati solution by
// nested quadrature when it does not.

#include <array>
#include <cmath>
#include <functional>
#include <string>

#include "cms/domain.hpp"
#include "cms/errors.hpp"
#include "cms/expr.hpp"
#include "cms/frames.hpp"
#include "cms/quadrature.hpp"

namespace cms {

enum class BranchTag { LinearSolvable, ZetaFree, NoSolution, Riccati };

inline const char* to_string(BranchTag t) {
    switch (t) {
        case BranchTag::LinearSolvable: return "linear-solvable";
        case BranchTag::ZetaFree: return "zeta-free";
        case BranchTag::NoSolution: return "no-solution";
        case BranchTag::Riccati: return "riccati";
    }
    return "?";
}

struct BranchDecision {
    BranchTag tag;
    std::string rationale;
};

namespace detail {

inline bool vanishes_on(const ScalarField& f, const Domain& domain, double tol = 1e-12) {
    if (f.is_literal_zero()) return true;
    for (const Point3& p : domain.points())
        if (std::abs(f(p)) > tol) return false;
    return true;
}

}  // namespace detail

// The branch depends only on whether F and (alpha/beta)_3 vanish on the
// domain grid.
inline BranchDecision decide_branch(const ScalarField& alpha, const ScalarField& beta,
                                    const ScalarField& F, const Domain& domain) {
    ScalarField ratio_d3 = (alpha / beta).differentiate(3);
    bool f_zero = detail::vanishes_on(F, domain);
    bool ratio_zero = detail::vanishes_on(ratio_d3, domain);
    if (!f_zero) {
        return {BranchTag::Riccati,
                "F does not vanish on the grid; zeta solves the Riccati equation in x2"};
    }
    if (!ratio_zero) {
        return {BranchTag::LinearSolvable,
                "F vanishes and (alpha/beta)_3 does not; the x2-equation is linear in zeta"};
    }
    return {BranchTag::NoSolution,
            "F and (alpha/beta)_3 both vanish on the grid: the remaining equation forces "
            "2/beta = 0, impossible for nonzero beta. (A free choice of zeta would need "
            "F_2 = 2/beta != 0, contradicting F = 0, so that sub-case is unreachable.)"};
}

// zeta = (F_2 - 2/beta) / (alpha/beta)_3, the solution of the linear branch.
inline ScalarField solve_zeta_linear(const ScalarField& alpha, const ScalarField& beta,
                                     const ScalarField& F, const Domain& domain) {
    ScalarField ratio_d3 = (alpha / beta).differentiate(3);
    for (const Point3& p : domain.points()) {
        if (std::abs(ratio_d3(p)) <= 1e-12) throw ZeroOnDomainError("(alpha/beta)_3", p);
    }
    ScalarField two = ScalarField::literal(2.0);
    return (F.differentiate(2) - two / beta) / ratio_d3;
}

// Closed-form Riccati solution evaluated at p:
//
//   zeta(p) = F e^(-2 I(x2)) / ( J(x2) - K(x3) )
//   I(x)    = integral of 1/(beta F) dx2 from base to x
//   J(x)    = integral of e^(-2 I) * (alpha/beta)_3 dx2 from base to x
//
// Both integrals run at fixed x3 = p.x3; the result is a function of
// (x2, x3) only.
inline double solve_zeta_riccati(const ScalarField& alpha, const ScalarField& beta,
                                 const ScalarField& F, const ScalarField& K, const Point3& p,
                                 const QuadratureConfig& q) {
    q.validate();
    detail::require_x1_free(alpha, "alpha");
    detail::require_x1_free(beta, "beta");
    detail::require_x1_free(F, "F");
    detail::require_x1_free(K, "K");
    if (K.depends_on(2))
        throw FieldConstraintError("K must be a function of x3 only, got: " + K.str());

    const double x3 = p.x3;
    auto at = [x3](double t) { return Point3{0.0, t, x3}; };

    auto inner_integrand = [&](double t) {
        double den;
        try {
            den = beta(at(t)) * F(at(t));
        } catch (const EvalError& e) {
            throw QuadratureDomainError(
                "integrand of the inner x2-integral is singular at x2 = " +
                    ScalarField::format_double(t) + ": " + e.what(),
                at(t));
        }
        if (den == 0.0)
            throw QuadratureDomainError("beta*F vanishes inside the integration range at x2 = " +
                                            ScalarField::format_double(t),
                                        at(t));
        return 1.0 / den;
    };

    if (F(at(p.x2)) == 0.0)
        throw QuadratureDomainError("F vanishes at the evaluation point " + point_str(p), p);

    // A sign change of beta*F between nodes proves a zero of the inner
    // denominator inside the integration range.
    {
        double prev = 0.0, prev_t = q.base_x2;
        for (int i = 0; i <= q.steps; ++i) {
            double t = q.base_x2 + i * (p.x2 - q.base_x2) / q.steps;
            double den = 1.0 / inner_integrand(t);
            if (i > 0 && (den > 0.0) != (prev > 0.0))
                throw QuadratureDomainError(
                    "beta*F changes sign between x2 = " + ScalarField::format_double(prev_t) +
                        " and x2 = " + ScalarField::format_double(t) +
                        "; the inner integrand is singular inside [base_x2, x2]",
                    at(t));
            prev = den;
            prev_t = t;
        }
    }

    auto inner = [&](double x) { return simpson(inner_integrand, q.base_x2, x, q.steps); };

    ScalarField ratio_d3 = (alpha / beta).differentiate(3);
    double outer = 0.0;
    if (!ratio_d3.is_literal_zero()) {
        auto outer_integrand = [&](double t) {
            double r;
            try {
                r = ratio_d3(at(t));
            } catch (const EvalError& e) {
                throw QuadratureDomainError(
                    "integrand of the outer x2-integral is singular at x2 = " +
                        ScalarField::format_double(t) + ": " + e.what(),
                    at(t));
            }
            return std::exp(-2.0 * inner(t)) * r;
        };
        outer = simpson(outer_integrand, q.base_x2, p.x2, q.steps);
    }

    double k_value = K(at(p.x2));
    double denom = outer - k_value;
    if (std::abs(denom) <= 1e-14 * (1.0 + std::abs(k_value)))
        throw VanishingDenominatorError(p, denom);
    return F(at(p.x2)) * std::exp(-2.0 * inner(p.x2)) / denom;
}

namespace detail {

inline double riccati_residual_impl(double zeta, double zeta2, const ScalarField& alpha,
                                    const ScalarField& beta, const ScalarField& F,
                                    const Point3& p) {
    double f = F(p);
    double ratio_d3 = (alpha / beta).differentiate(3)(p);
    double f2 = F.differentiate(2)(p);
    return zeta2 + (ratio_d3 / f) * zeta * zeta - (f2 / f - 2.0 / (f * beta(p))) * zeta;
}

}  // namespace detail

// Residual of zeta_2 + (1/F)(alpha/beta)_3 zeta^2 - (F_2/F - 2/(F beta)) zeta
// with a symbolic zeta.
inline double riccati_residual(const ScalarField& zeta, const ScalarField& alpha,
                               const ScalarField& beta, const ScalarField& F, const Point3& p) {
    return detail::riccati_residual_impl(zeta(p), zeta.differentiate(2)(p), alpha, beta, F, p);
}

// Same residual for a sampled zeta(x2, x3); zeta_2 uses the five-point
// central difference.
inline double riccati_residual(const std::function<double(double, double)>& zeta,
                               const ScalarField& alpha, const ScalarField& beta,
                               const ScalarField& F, const Point3& p, double h = 1e-3) {
    double zm2 = zeta(p.x2 - 2.0 * h, p.x3);
    double zm1 = zeta(p.x2 - h, p.x3);
    double zp1 = zeta(p.x2 + h, p.x3);
    double zp2 = zeta(p.x2 + 2.0 * h, p.x3);
    double zeta2 = (zm2 - 8.0 * zm1 + 8.0 * zp1 - zp2) / (12.0 * h);
    return detail::riccati_residual_impl(zeta(p.x2, p.x3), zeta2, alpha, beta, F, p);
}

// Left-minus-right residuals of the five equations of the full contact
// system for an arbitrary 3x3 matrix of fields (rows are frame components).
inline std::array<double, 5> contact_residuals(const MatrixField& b9, const Point3& p) {
    Mat3 bv = b9.evaluate(p);
    double det = det3(bv);
    if (det == 0.0) throw SingularMatrixError(p, det);

    // d[a][j][i] = d_i b_a^j at p
    double d[3][3][3];
    for (int a = 0; a < 3; ++a)
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) d[a][j][i] = b9.m[a][j].differentiate(i + 1)(p);

    // bracket combination (b_a^i d_i b_c^j - b_c^i d_i b_a^j) for rows a, c
    auto combo = [&](int a, int c, int j) {
        double acc = 0.0;
        for (int i = 0; i < 3; ++i) acc += bv[a][i] * d[c][j][i] - bv[c][i] * d[a][j][i];
        return acc;
    };

    // cofactor row gamma of the adjugate (so that sum_j cof[gamma][j] * v^j
    // equals det * (coefficient of e_gamma in v))
    Mat3 adj = adjugate3(bv);
    auto cof = [&](int gamma, int j) { return adj[j][gamma]; };

    std::array<double, 5> r{};
    for (int j = 0; j < 3; ++j) {
        r[0] += cof(2, j) * combo(2, 0, j);  // [e3,e1] against the e3-row
        r[1] += cof(2, j) * combo(2, 1, j);  // [e3,e2] against the e3-row
        r[2] += cof(2, j) * combo(0, 1, j);  // [e1,e2] against the e3-row
        r[3] += cof(0, j) * combo(2, 0, j);  // [e3,e1] against the e1-row
        r[4] += cof(1, j) * combo(2, 1, j);  // [e3,e2] against the e2-row
    }
    r[2] -= 2.0 * det;
    return r;
}

// (c^3_12 - 2, c^3_31, c^3_32, c^2_32, c^1_31): all five must vanish for a
// phi-eigenbasis.
inline std::array<double, 5> check_easy_conditions(const SimplifiedB& b, const Point3& p) {
    StructureFunctions sf = structure_functions(b, p);
    return {sf.c(3, 1, 2) - 2.0, sf.c(3, 3, 1), sf.c(3, 3, 2), sf.c(2, 3, 2), sf.c(1, 3, 1)};
}

inline std::array<double, 5> check_easy_conditions(const Frame& frame, const Point3& p) {
    StructureFunctions sf = structure_functions(frame, p);
    return {sf.c(3, 1, 2) - 2.0, sf.c(3, 3, 1), sf.c(3, 3, 2), sf.c(2, 3, 2), sf.c(1, 3, 1)};
}

}  // namespace cms
