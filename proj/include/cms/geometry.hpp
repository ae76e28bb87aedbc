#pragma once

// Levi-Civita connection and curvature. Christoffel symbols come from
// symbolic first derivatives of the metric; curvature additionally uses
// symbolic second derivatives. A finite-difference route exists solely as an
// independent cross-check.
//
// Conventions (pinned here and in the docs):
//   Gamma^k_ij = (1/2) g^kl (d_i g_jl + d_j g_il - d_l g_ij)
//   R^l_ijk    = d_i Gamma^l_jk - d_j Gamma^l_ik
//                + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik
//   Rm ijkl    = g(R(d_i, d_j) d_k, d_l)
//   K(X,Y)     = Rm(X,Y,Y,X) / (|X|^2 |Y|^2 - g(X,Y)^2)
// so the unit round sphere has K = +1.

#include <array>
#include <cmath>
#include <utility>

#include "cms/frames.hpp"
#include "cms/metric.hpp"

namespace cms {

struct ChristoffelAtPoint {
    double gamma[3][3][3] = {};  // gamma[k][i][j], symmetric in (i, j)
};

struct RiemannAtPoint {
    double rm[3][3][3][3] = {};  // Rm[i][j][k][l]

    double sectional(const Mat3& g_at, const Vec3& x, const Vec3& y) const {
        double num = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l)
                        num += x[i] * y[j] * y[k] * x[l] * rm[i][j][k][l];
        double xx = dot(x, mat_vec(g_at, x));
        double yy = dot(y, mat_vec(g_at, y));
        double xy = dot(x, mat_vec(g_at, y));
        return num / (xx * yy - xy * xy);
    }

    // max violation of Rm_ijkl = -Rm_jikl = -Rm_ijlk = Rm_klij
    double symmetry_residual() const {
        double r = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l) {
                        r = std::max(r, std::abs(rm[i][j][k][l] + rm[j][i][k][l]));
                        r = std::max(r, std::abs(rm[i][j][k][l] + rm[i][j][l][k]));
                        r = std::max(r, std::abs(rm[i][j][k][l] - rm[k][l][i][j]));
                    }
        return r;
    }
};

class LeviCivita {
public:
    explicit LeviCivita(MetricField metric) : g_(std::move(metric)) {
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = i; j < 3; ++j) {
                    dg_[k][i][j] = g_.g[i][j].differentiate(k + 1);
                    dg_[k][j][i] = dg_[k][i][j];
                    for (int l = 0; l < 3; ++l) {
                        ddg_[l][k][i][j] = dg_[k][i][j].differentiate(l + 1);
                        ddg_[l][k][j][i] = ddg_[l][k][i][j];
                    }
                }
    }

    const MetricField& metric() const { return g_; }

    Mat3 metric_at(const Point3& p) const { return g_.evaluate(p); }

    Mat3 inverse_metric_at(const Point3& p) const { return inverse3(g_.evaluate(p), p); }

    ChristoffelAtPoint christoffel(const Point3& p) const {
        double dg[3][3][3];
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = i; j < 3; ++j) dg[k][i][j] = dg[k][j][i] = dg_[k][i][j](p);
        return christoffel_from(inverse_metric_at(p), dg);
    }

    // Same formula with first derivatives of g taken by central differences
    // of metric evaluations; used only as a cross-check.
    ChristoffelAtPoint christoffel_fd(const Point3& p, double h = 1e-4) const {
        double dg[3][3][3];
        metric_derivatives_fd(p, h, dg);
        return christoffel_from(inverse_metric_at(p), dg);
    }

    // Exact derivatives of the Christoffel symbols:
    //   d_m Gamma^k_ij uses d_m g^-1 = -g^-1 (d_m g) g^-1 and the symbolic
    //   second derivatives of g.
    void christoffel_with_derivative(const Point3& p, ChristoffelAtPoint& gamma,
                                     std::array<ChristoffelAtPoint, 3>& dgamma) const {
        Mat3 ginv = inverse_metric_at(p);
        double dg[3][3][3], ddg[3][3][3][3];
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = i; j < 3; ++j) {
                    dg[k][i][j] = dg[k][j][i] = dg_[k][i][j](p);
                    for (int l = 0; l < 3; ++l)
                        ddg[l][k][i][j] = ddg[l][k][j][i] = ddg_[l][k][i][j](p);
                }
        gamma = christoffel_from(ginv, dg);

        for (int m = 0; m < 3; ++m) {
            // d_m g^-1
            Mat3 dginv{};
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    dginv[a][b] = 0.0;
                    for (int c = 0; c < 3; ++c)
                        for (int d = 0; d < 3; ++d)
                            dginv[a][b] -= ginv[a][c] * dg[m][c][d] * ginv[d][b];
                }
            for (int k = 0; k < 3; ++k)
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) {
                        double acc = 0.0;
                        for (int l = 0; l < 3; ++l) {
                            acc += 0.5 * dginv[k][l] *
                                   (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                            acc += 0.5 * ginv[k][l] *
                                   (ddg[m][i][j][l] + ddg[m][j][i][l] - ddg[m][l][i][j]);
                        }
                        dgamma[m].gamma[k][i][j] = acc;
                    }
        }
    }

    // (nabla_X Y)^k = X^i d_i Y^k + Gamma^k_ij X^i Y^j at p.
    Vec3 covariant_derivative(const VectorField& x, const VectorField& y, const Point3& p) const {
        return covariant_derivative(x, y, p, christoffel(p));
    }

    Vec3 covariant_derivative(const VectorField& x, const VectorField& y, const Point3& p,
                              const ChristoffelAtPoint& c) const {
        Vec3 xv = cms::evaluate(x, p);
        Vec3 yv = cms::evaluate(y, p);
        Vec3 r{};
        for (int k = 0; k < 3; ++k) {
            r[k] = 0.0;
            for (int i = 0; i < 3; ++i) {
                r[k] += xv[i] * y[k].differentiate(i + 1)(p);
                for (int j = 0; j < 3; ++j) r[k] += c.gamma[k][i][j] * xv[i] * yv[j];
            }
        }
        return r;
    }

    // max |d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il| at p
    double compatibility_residual(const Point3& p) const {
        ChristoffelAtPoint c = christoffel(p);
        Mat3 g_at = metric_at(p);
        double worst = 0.0;
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    double r = dg_[k][i][j](p);
                    for (int l = 0; l < 3; ++l)
                        r -= c.gamma[l][k][i] * g_at[l][j] + c.gamma[l][k][j] * g_at[i][l];
                    worst = std::max(worst, std::abs(r));
                }
        return worst;
    }

    RiemannAtPoint riemann(const Point3& p) const {
        ChristoffelAtPoint gamma;
        std::array<ChristoffelAtPoint, 3> dgamma;
        christoffel_with_derivative(p, gamma, dgamma);
        return riemann_from(gamma, dgamma, metric_at(p));
    }

    // Fully finite-difference route: Gamma by christoffel_fd, its derivative
    // by five-point differences of christoffel_fd.
    RiemannAtPoint riemann_fd(const Point3& p, double h = 1e-4) const {
        ChristoffelAtPoint gamma = christoffel_fd(p, h);
        std::array<ChristoffelAtPoint, 3> dgamma;
        for (int m = 0; m < 3; ++m) {
            ChristoffelAtPoint stencil[4];
            const double offsets[4] = {-2.0 * h, -h, h, 2.0 * h};
            for (int si = 0; si < 4; ++si) {
                Point3 q = p;
                shift(q, m, offsets[si]);
                stencil[si] = christoffel_fd(q, h);
            }
            for (int k = 0; k < 3; ++k)
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        dgamma[m].gamma[k][i][j] =
                            (stencil[0].gamma[k][i][j] - 8.0 * stencil[1].gamma[k][i][j] +
                             8.0 * stencil[2].gamma[k][i][j] - stencil[3].gamma[k][i][j]) /
                            (12.0 * h);
        }
        return riemann_from(gamma, dgamma, metric_at(p));
    }

    static double scalar_curvature(const RiemannAtPoint& rm, const Mat3& ginv) {
        Mat3 ric = ricci_from(rm, ginv);
        double r = 0.0;
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r += ginv[j][k] * ric[j][k];
        return r;
    }

    // Ric_jk contracted from the (1,3) tensor recovered with g^-1.
    static Mat3 ricci_from(const RiemannAtPoint& rm, const Mat3& ginv) {
        Mat3 ric{};
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                ric[j][k] = 0.0;
                for (int i = 0; i < 3; ++i)
                    for (int l = 0; l < 3; ++l) ric[j][k] += ginv[i][l] * rm.rm[i][j][k][l];
            }
        return ric;
    }

private:
    static void shift(Point3& p, int axis, double h) {
        switch (axis) {
            case 0: p.x1 += h; break;
            case 1: p.x2 += h; break;
            case 2: p.x3 += h; break;
        }
    }

    static ChristoffelAtPoint christoffel_from(const Mat3& ginv, const double dg[3][3][3]) {
        ChristoffelAtPoint c;
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = i; j < 3; ++j) {
                    double acc = 0.0;
                    for (int l = 0; l < 3; ++l)
                        acc += ginv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                    c.gamma[k][i][j] = c.gamma[k][j][i] = 0.5 * acc;
                }
        return c;
    }

    static RiemannAtPoint riemann_from(const ChristoffelAtPoint& gamma,
                                       const std::array<ChristoffelAtPoint, 3>& dgamma,
                                       const Mat3& g_at) {
        double r_up[3][3][3][3];  // R^l_ijk
        for (int l = 0; l < 3; ++l)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k) {
                        double acc = dgamma[i].gamma[l][j][k] - dgamma[j].gamma[l][i][k];
                        for (int m = 0; m < 3; ++m)
                            acc += gamma.gamma[l][i][m] * gamma.gamma[m][j][k] -
                                   gamma.gamma[l][j][m] * gamma.gamma[m][i][k];
                        r_up[l][i][j][k] = acc;
                    }
        RiemannAtPoint rm;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l) {
                        double acc = 0.0;
                        for (int m = 0; m < 3; ++m) acc += g_at[l][m] * r_up[m][i][j][k];
                        rm.rm[i][j][k][l] = acc;
                    }
        return rm;
    }

    MetricField g_;
    ScalarField dg_[3][3][3];
    ScalarField ddg_[3][3][3][3];

    void metric_derivatives_fd(const Point3& p, double h, double dg[3][3][3]) const {
        for (int k = 0; k < 3; ++k) {
            Mat3 s[4];
            const double offsets[4] = {-2.0 * h, -h, h, 2.0 * h};
            for (int si = 0; si < 4; ++si) {
                Point3 q = p;
                shift(q, k, offsets[si]);
                s[si] = g_.evaluate(q);
            }
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    dg[k][i][j] =
                        (s[0][i][j] - 8.0 * s[1][i][j] + 8.0 * s[2][i][j] - s[3][i][j]) /
                        (12.0 * h);
        }
    }
};

inline ChristoffelAtPoint christoffel(const MetricField& g, const Point3& p) {
    require_positive_definite(g.evaluate(p), p);
    return LeviCivita(g).christoffel(p);
}

struct CurvatureReport {
    double scalar = 0.0;
    Mat3 ricci{};
    double xi_sectional = 0.0;   // K(e1, e3)
    double phi_sectional = 0.0;  // K(e1, e2)
    double scalar_fd = 0.0;
    double route_delta = 0.0;
    double riemann_symmetry_residual = 0.0;
};

inline CurvatureReport curvature(const LeviCivita& conn, const Frame& frame, const Point3& p,
                                 double fd_step = 1e-4) {
    Mat3 g_at = conn.metric_at(p);
    require_positive_definite(g_at, p);
    Mat3 ginv = inverse3(g_at, p);

    RiemannAtPoint rm = conn.riemann(p);
    CurvatureReport rep;
    rep.ricci = LeviCivita::ricci_from(rm, ginv);
    rep.scalar = LeviCivita::scalar_curvature(rm, ginv);
    rep.xi_sectional = rm.sectional(g_at, evaluate(frame.e1, p), evaluate(frame.e3, p));
    rep.phi_sectional = rm.sectional(g_at, evaluate(frame.e1, p), evaluate(frame.e2, p));
    rep.scalar_fd = LeviCivita::scalar_curvature(conn.riemann_fd(p, fd_step), ginv);
    rep.route_delta = std::abs(rep.scalar - rep.scalar_fd);
    rep.riemann_symmetry_residual = rm.symmetry_residual();
    return rep;
}

inline CurvatureReport curvature(const MetricField& g, const Frame& frame, const Point3& p,
                                 double fd_step = 1e-4) {
    return curvature(LeviCivita(g), frame, p, fd_step);
}

// Residuals of the eight connection relations of a phi-eigenbasis, with
// lambda, a, b, c from the structure functions:
//
//   nabla_e e      =  b phi-e                nabla_phie e    = -c phi-e + (lambda-1) xi
//   nabla_e phi-e  = -b e + (lambda+1) xi    nabla_phie phie =  c e
//   nabla_e xi     = -(lambda+1) phi-e       nabla_phie xi   = (1-lambda) e
//   nabla_xi e     =  a phi-e                nabla_xi phi-e  = -a e
struct ConnectionReport {
    struct Entry {
        const char* name;
        double residual;
    };
    std::array<Entry, 8> relations{};
    double max_residual = 0.0;
    FrameInvariants invariants;
};

inline ConnectionReport verify_connection_relations(const LeviCivita& conn, const Frame& frame, const Point3& p) {
    FrameInvariants inv = frame_invariants(frame, p);
    ChristoffelAtPoint gamma = conn.christoffel(p);
    const VectorField& e = frame.e1;
    const VectorField& fe = frame.e2;
    const VectorField& xi = frame.e3;
    Vec3 ev = evaluate(e, p), fev = evaluate(fe, p), xiv = evaluate(xi, p);

    auto resid = [&](const VectorField& x, const VectorField& y, const Vec3& expect) {
        return max_abs(conn.covariant_derivative(x, y, p, gamma) - expect);
    };

    ConnectionReport rep;
    rep.invariants = inv;
    rep.relations[0] = {"nabla_e e = b phie", resid(e, e, inv.b * fev)};
    rep.relations[1] = {"nabla_e phie = -b e + (lambda+1) xi",
                        resid(e, fe, (-inv.b) * ev + (inv.lambda + 1.0) * xiv)};
    rep.relations[2] = {"nabla_e xi = -(lambda+1) phie",
                        resid(e, xi, (-(inv.lambda + 1.0)) * fev)};
    rep.relations[3] = {"nabla_phie e = -c phie + (lambda-1) xi",
                        resid(fe, e, (-inv.c) * fev + (inv.lambda - 1.0) * xiv)};
    rep.relations[4] = {"nabla_phie phie = c e", resid(fe, fe, inv.c * ev)};
    rep.relations[5] = {"nabla_phie xi = (1-lambda) e", resid(fe, xi, (1.0 - inv.lambda) * ev)};
    rep.relations[6] = {"nabla_xi e = a phie", resid(xi, e, inv.a * fev)};
    rep.relations[7] = {"nabla_xi phie = -a e", resid(xi, fe, (-inv.a) * ev)};
    for (const auto& entry : rep.relations)
        rep.max_residual = std::max(rep.max_residual, entry.residual);
    return rep;
}

inline ConnectionReport verify_connection_relations(const MetricField& g, const Frame& frame, const Point3& p) {
    return verify_connection_relations(LeviCivita(g), frame, p);
}

}  // namespace cms
