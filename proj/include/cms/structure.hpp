#pragma once

// Assembly of the contact metric structure from a simplified B-matrix, the
// axiom checker, the h tensor, and the two deformations (orthonormal-frame
// deformation and the general metric deformation).
//
// Convention pinned for the whole library: d-omega(X,Y) = X w(Y) - Y w(X)
// - w([X,Y]), i.e. (d-omega)_ij = d_i w_j - d_j w_i with no 1/2 factor.
// Under it the compatibility identity reads d-eta(X,Y) = 2 g(X, phi Y), and
// the volume coefficient (eta ^ d-eta)(d1,d2,d3) equals -2/(beta zeta).

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cms/domain.hpp"
#include "cms/errors.hpp"
#include "cms/expr.hpp"
#include "cms/frames.hpp"
#include "cms/geometry.hpp"
#include "cms/linalg.hpp"
#include "cms/metric.hpp"

namespace cms {

// Closed-form associated metric of a simplified B-matrix:
//   g11 = 1                      g12 = -alpha/beta        g13 = -F/zeta
//   g22 = (1+alpha^2)/beta^2     g23 = (a b F - eps)/(b^2 z)
//   g33 = (b^2 (1+F^2) + eps^2)/(b^2 z^2)
// with det g = 1/(beta^2 zeta^2).
inline MetricField metric_closed_form(const SimplifiedB& b) {
    ScalarField one = ScalarField::literal(1.0);
    ScalarField beta2 = b.beta * b.beta;
    ScalarField g11 = one;
    ScalarField g12 = -(b.alpha / b.beta);
    ScalarField g13 = -(b.F / b.zeta);
    ScalarField g22 = (one + b.alpha * b.alpha) / beta2;
    ScalarField g23 = (b.alpha * b.beta * b.F - b.epsilon) / (beta2 * b.zeta);
    ScalarField g33 =
        (beta2 * (one + b.F * b.F) + b.epsilon * b.epsilon) / (beta2 * b.zeta * b.zeta);
    return MetricField::from_entries(g11, g12, g13, g22, g23, g33);
}

// The same metric through the frame route: g_ij = (b^-1)_i^m (b^-1)_j^n d_mn.
inline Mat3 metric_from_frame(const MatrixField& b, const Point3& p) {
    Mat3 binv = invert_b(b, p);
    Mat3 g{};
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            g[i][j] = g[j][i] = dot(binv[i], binv[j]);
        }
    return g;
}

inline Mat3 metric_from_frame(const SimplifiedB& b, const Point3& p) {
    return metric_from_frame(b.matrix(), p);
}

// Symbolic frame metric, used when a whole field is needed (deformations).
inline MetricField metric_field_from_frame(const MatrixField& b) {
    MatrixField binv = symbolic_inverse(b);
    MetricField g;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            ScalarField acc;
            for (int m = 0; m < 3; ++m) acc = acc + binv.m[i][m] * binv.m[j][m];
            g.g[i][j] = g.g[j][i] = acc;
        }
    return g;
}

// eta = dx1 - (alpha/beta) dx2 - (F/zeta) dx3; equals g(., e3).
inline OneForm contact_form(const SimplifiedB& b) {
    return {ScalarField::literal(1.0), -(b.alpha / b.beta), -(b.F / b.zeta)};
}

// (d-omega)_ij = d_i w_j - d_j w_i, returned as the antisymmetric component
// matrix.
inline MatrixField exterior_derivative(const OneForm& omega) {
    MatrixField d;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            d.m[i][j] = omega[j].differentiate(i + 1) - omega[i].differentiate(j + 1);
    return d;
}

// (eta ^ d-eta)(d1, d2, d3) = eta_1 deta(d2,d3) - eta_2 deta(d1,d3)
// + eta_3 deta(d1,d2), with no factorial normalisation.
inline ScalarField wedge_volume_coefficient(const OneForm& eta) {
    MatrixField d = exterior_derivative(eta);
    return eta[0] * d.m[1][2] - eta[1] * d.m[0][2] + eta[2] * d.m[0][1];
}

struct ContactStructure {
    MetricField g;
    OneForm eta;
    VectorField xi;
    MatrixField phi;  // phi.m[j][i] is the j-th component of phi(d_i)
    Frame frame;
    std::optional<SimplifiedB> generators;  // present when built from generators
    std::string provenance;
    std::vector<std::string> notes;
};

namespace detail {

// phi = omega^1 (x) e2 - omega^2 (x) e1 written on the coordinate basis.
inline MatrixField phi_matrix(const MatrixField& b, const MatrixField& binv) {
    MatrixField phi;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            phi.m[j][i] = binv.m[i][0] * b.m[1][j] - binv.m[i][1] * b.m[0][j];
    return phi;
}

}  // namespace detail

inline ContactStructure build_contact_structure(const SimplifiedB& b) {
    ContactStructure s;
    MatrixField bm = b.matrix();
    MatrixField binv = symbolic_inverse(bm);
    s.g = metric_closed_form(b);
    s.eta = contact_form(b);
    s.xi = {ScalarField::literal(1.0), ScalarField::literal(0.0), ScalarField::literal(0.0)};
    s.phi = detail::phi_matrix(bm, binv);
    s.frame = frame_fields(b);
    s.generators = b;
    s.provenance = std::string("simplified generators, zeta ") + to_string(b.zeta_provenance);
    if (!b.zeta_note.empty()) s.notes.push_back(b.zeta_note);
    return s;
}

inline Mat3 phi_in_coordinates(const ContactStructure& s, const Point3& p) {
    double det = det3(s.frame.b_matrix().evaluate(p));
    if (det == 0.0) throw SingularMatrixError(p, det);
    return s.phi.evaluate(p);
}

// h = (1/2) L_xi phi on coordinate fields:
//   2 h^j_k = xi^i d_i phi^j_k - phi^i_k d_i xi^j + phi^j_m d_k xi^m
inline MatrixField h_tensor_field(const ContactStructure& s) {
    MatrixField h;
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j) {
            ScalarField acc;
            for (int i = 0; i < 3; ++i) {
                acc = acc + s.xi[i] * s.phi.m[j][k].differentiate(i + 1);
                acc = acc - s.phi.m[i][k] * s.xi[j].differentiate(i + 1);
                acc = acc + s.phi.m[j][i] * s.xi[i].differentiate(k + 1);
            }
            h.m[j][k] = ScalarField::literal(0.5) * acc;
        }
    return h;
}

inline Mat3 h_tensor(const ContactStructure& s, const Point3& p) {
    return h_tensor_field(s).evaluate(p);
}

// Eigenvalue of h on span(e1): the e1-coefficient of h(e1) in the frame.
inline double h_eigenvalue_on_e1(const ContactStructure& s, const Mat3& h, const Point3& p) {
    Vec3 he1 = mat_vec(h, evaluate(s.frame.e1, p));
    return frame_coefficients(s.frame.b_matrix(), p, he1)[0];
}

// Pointwise checks of the algebraic h identities.
struct HTensorChecks {
    double trace_h;
    double trace_h_phi;
    double anticommutator;  // max |(h phi + phi h)^j_k|
    double h_xi;            // max |(h xi)^j|
};

inline HTensorChecks h_tensor_checks(const Mat3& h, const Mat3& phi, const Vec3& xi) {
    HTensorChecks c{};
    Mat3 hp = mat_mul(h, phi);
    Mat3 ph = mat_mul(phi, h);
    for (int i = 0; i < 3; ++i) {
        c.trace_h += h[i][i];
        c.trace_h_phi += hp[i][i];
    }
    Mat3 anti{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) anti[i][j] = hp[i][j] + ph[i][j];
    c.anticommutator = max_abs(anti);
    c.h_xi = max_abs(mat_vec(h, xi));
    return c;
}

inline FrameInvariants frame_invariants(const ContactStructure& s, const Point3& p) {
    return frame_invariants(s.frame, p);
}

struct AxiomReport {
    struct Entry {
        const char* name;
        double residual;
    };
    std::array<Entry, 5> checks{};
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

inline AxiomReport verify_axioms(const ContactStructure& s, const Point3& p, double tol) {
    Mat3 phi = s.phi.evaluate(p);
    Mat3 g = s.g.evaluate(p);
    Vec3 xi = evaluate(s.xi, p);
    Vec3 eta{s.eta[0](p), s.eta[1](p), s.eta[2](p)};
    Mat3 deta = exterior_derivative(s.eta).evaluate(p);

    AxiomReport rep;
    rep.tolerance = tol;

    rep.checks[0] = {"eta(xi) = 1", std::abs(dot(eta, xi) - 1.0)};

    Mat3 phi2 = mat_mul(phi, phi);
    double r_phi2 = 0.0;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            double id = (j == k) ? 1.0 : 0.0;
            r_phi2 = std::max(r_phi2, std::abs(phi2[j][k] + id - xi[j] * eta[k]));
        }
    rep.checks[1] = {"phi^2 = -I + eta (x) xi", r_phi2};

    Mat3 gphi = mat_mul(g, phi);  // gphi[i][j] = g(d_i, phi d_j)
    Mat3 compat = mat_mul(transpose(phi), gphi);
    double r_compat = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r_compat = std::max(r_compat,
                                std::abs(compat[i][j] - g[i][j] + eta[i] * eta[j]));
    rep.checks[2] = {"g(phi X, phi Y) = g(X,Y) - eta(X) eta(Y)", r_compat};

    double r_deta = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r_deta = std::max(r_deta, std::abs(deta[i][j] - 2.0 * gphi[i][j]));
    rep.checks[3] = {"d-eta(X,Y) = 2 g(X, phi Y)", r_deta};

    double r_reeb = 0.0;
    for (int j = 0; j < 3; ++j) {
        double acc = 0.0;
        for (int i = 0; i < 3; ++i) acc += xi[i] * deta[i][j];
        r_reeb = std::max(r_reeb, std::abs(acc));
    }
    rep.checks[4] = {"d-eta(xi, .) = 0", r_reeb};

    for (const auto& e : rep.checks) rep.max_residual = std::max(rep.max_residual, e.residual);
    rep.pass = rep.max_residual <= tol;
    return rep;
}

// Input of the frame deformation: three vector fields declared orthonormal
// (the metric is the one that makes them so).
struct DeformationInput {
    Frame frame;
};

// Deformation of a declared-orthonormal frame into an associated structure:
//   eta = (f/2) omega^3,  e3 -> (2/f) e3,  g -> (f^2/4) g,
//   e1 -> (2/f) e1,       e2 -> (2/f) e2,  phi unchanged,
// where f = omega^3([e1, e2]). Requires on the domain grid:
//   (1) f nonzero, (2) nabla_{e3} e3 = 0, (3) e3(f) = 0.
inline ContactStructure deform_to_associated(const DeformationInput& input, const Domain& domain,
                                             double tol = 1e-8) {
    const Frame& fr = input.frame;
    MatrixField b = fr.b_matrix();
    for (const Point3& p : domain.points()) {
        double det = det3(b.evaluate(p));
        if (std::abs(det) <= 1e-12) throw SingularMatrixError(p, det);
    }

    MatrixField binv = symbolic_inverse(b);
    MetricField g = metric_field_from_frame(b);
    OneForm omega3{binv.m[0][2], binv.m[1][2], binv.m[2][2]};
    VectorField bracket12 = lie_bracket(fr.e1, fr.e2);
    ScalarField f;
    for (int j = 0; j < 3; ++j) f = f + omega3[j] * bracket12[j];

    std::vector<int> violated;
    std::vector<Point3> witnesses;
    std::string message;
    for (const Point3& p : domain.points()) {
        if (std::abs(f(p)) <= tol) {
            violated.push_back(1);
            witnesses.push_back(p);
            message += "(1) f = omega^3([e1,e2]) vanishes at " + point_str(p) + "; ";
            break;
        }
    }
    {
        LeviCivita conn(g);
        for (const Point3& p : domain.points()) {
            if (max_abs(conn.covariant_derivative(fr.e3, fr.e3, p)) > tol) {
                violated.push_back(2);
                witnesses.push_back(p);
                message += "(2) nabla_{e3} e3 != 0 at " + point_str(p) + "; ";
                break;
            }
        }
    }
    {
        ScalarField e3f = directional_derivative(fr.e3, f);
        for (const Point3& p : domain.points()) {
            if (std::abs(e3f(p)) > tol) {
                violated.push_back(3);
                witnesses.push_back(p);
                message += "(3) e3(f) != 0 at " + point_str(p) + "; ";
                break;
            }
        }
    }
    if (!violated.empty())
        throw HypothesisViolatedError(violated, witnesses,
                                      "deformation hypotheses violated: " + message);

    ScalarField two = ScalarField::literal(2.0);
    ScalarField scale = two / f;

    ContactStructure s;
    for (int j = 0; j < 3; ++j) {
        s.frame.e1[j] = scale * fr.e1[j];
        s.frame.e2[j] = scale * fr.e2[j];
        s.frame.e3[j] = scale * fr.e3[j];
    }
    s.g = MetricField::scaled(g, f * f / ScalarField::literal(4.0));
    for (int j = 0; j < 3; ++j) s.eta[j] = (f / two) * omega3[j];
    s.xi = s.frame.e3;
    s.phi = detail::phi_matrix(b, binv);
    s.provenance = "deformation of a declared-orthonormal frame";

    bool f_constant = true;
    double f0 = f(domain.center(0, 0, 0));
    for (const Point3& p : domain.points()) {
        if (std::abs(f(p) - f0) > 1e-12 * (1.0 + std::abs(f0))) {
            f_constant = false;
            break;
        }
    }
    if (f_constant) s.notes.push_back("the vector field e3-bar is divergence free");

    // post-conditions of the deformation
    double check_tol = std::max(tol, 1e-8);
    for (const Point3& p : domain.points()) {
        StructureFunctions sf = structure_functions(s.frame, p);
        if (std::abs(sf.c(3, 1, 2) - 2.0) > check_tol)
            throw Error("deformed frame fails c^3_12 = 2 at " + point_str(p) + " (got " +
                        ScalarField::format_double(sf.c(3, 1, 2)) + ")");
        AxiomReport rep = verify_axioms(s, p, check_tol);
        if (!rep.pass) {
            // the usual culprit: f varying along e1 or e2 perturbs the
            // deformed connection by conformal terms, and the Reeb
            // condition picks up d-eta(e_i-bar, e3-bar) = (2/f^2) e_i(f)
            std::string hint;
            double e1f = std::abs(directional_derivative(fr.e1, f)(p));
            double e2f = std::abs(directional_derivative(fr.e2, f)(p));
            if (std::max(e1f, e2f) > check_tol)
                hint = "; note f is not constant along e1/e2 at this point (|e1(f)| = " +
                       ScalarField::format_double(e1f) + ", |e2(f)| = " +
                       ScalarField::format_double(e2f) +
                       "), which obstructs the compatibility identities";
            throw Error("deformed structure fails the axiom checks at " + point_str(p) +
                        " (max residual " + ScalarField::format_double(rep.max_residual) + ")" +
                        hint);
        }
    }
    return s;
}

// Parameters of the general metric deformation gamma = g + t.
struct TTensorParams {
    ScalarField iota, kappa, nu, rho, sigma, upsilon;
};

// gamma_11 = e^iota, gamma_12 = -alpha/beta + rho, gamma_13 = -F/zeta + sigma,
// gamma_22 = e^kappa, gamma_23 = (a b F - eps)/(b^2 z) + upsilon,
// gamma_33 = e^nu; positive definiteness is checked on the domain grid.
inline MetricField deform_metric_general(const SimplifiedB& b, const TTensorParams& t,
                                         const Domain& domain) {
    using U = ScalarField::UnaryOp;
    ScalarField beta2 = b.beta * b.beta;
    MetricField gamma = MetricField::from_entries(
        ScalarField::apply(U::Exp, t.iota), -(b.alpha / b.beta) + t.rho,
        -(b.F / b.zeta) + t.sigma, ScalarField::apply(U::Exp, t.kappa),
        (b.alpha * b.beta * b.F - b.epsilon) / (beta2 * b.zeta) + t.upsilon,
        ScalarField::apply(U::Exp, t.nu));
    require_positive_definite(gamma, domain);
    return gamma;
}

inline CurvatureReport curvature(const ContactStructure& s, const Point3& p,
                                 double fd_step = 1e-4) {
    return curvature(s.g, s.frame, p, fd_step);
}

inline ConnectionReport verify_connection_relations(const ContactStructure& s, const Point3& p) {
    return verify_connection_relations(s.g, s.frame, p);
}

}  // namespace cms
