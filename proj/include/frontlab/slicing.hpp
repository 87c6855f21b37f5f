#pragma once

#include <cmath>
#include <vector>

#include "frontlab/errors.hpp"
#include "frontlab/frontal.hpp"
#include "frontlab/invariants.hpp"

namespace frontlab {

/// Intersection of the surface with the plane P through f(p) orthogonal to
/// the singular direction, as Taylor jets.
struct SliceCurve {
    Point2 p;
    Vec3 origin;          // f(p)
    Vec3 normal;          // unit γ̂'(0), normal of P
    Vec3 e1, e2;          // orthonormal basis of P
    Vec3 f_u, f_vv, f_vvv, f_uv;  // at p, in coordinates (u, v) with η = ∂_v
    std::vector<double> u_of_t;   // u(t) Taylor coefficients, t = v
    std::vector<double> x, y;     // σ(t) in the (e1, e2) basis, Taylor coefficients
    double u2_expected = 0.0;     // −⟨f_u, f_vv⟩/|f_u|², the value u''(0) must take
};

struct SliceCheck {
    double kappa_c_surface = 0.0;
    double tau_slice = 0.0;
    double rel_diff = 0.0;
};

namespace detail {

// Whitney: det(f_ξ, f_ηη, f_ξη) ≠ 0 at a corank-one point means a cross cap,
// which admits no unit normal.
inline void whitney_guard(const FrontalSurface& F, Point2 p) {
    const Vec3J f = F.map_jet(p, 2);
    const Vec3 fu = values(partial(f, Axis::u)), fv = values(partial(f, Axis::v));
    // kernel direction of [f_u f_v]: smaller eigenvector of the Gram matrix
    const double a = dot(fu, fu), b = dot(fu, fv), d = dot(fv, fv);
    const double lmin = 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + b * b);
    Vec2 eta = std::abs(b) > 1e-300 ? Vec2{b, lmin - a} : (a <= d ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0});
    eta = (1.0 / norm2(eta)) * eta;
    const Vec2 xi{-eta.v, eta.u};
    auto second = [&](Vec2 x, Vec2 y) {
        Vec3 r{};
        for (std::size_t k = 0; k < 3; ++k)
            r[k] = 2 * f[k].coeff(2, 0) * x.u * y.u + f[k].coeff(1, 1) * (x.u * y.v + x.v * y.u) +
                   2 * f[k].coeff(0, 2) * x.v * y.v;
        return r;
    };
    const Vec3 f_xi = add(scale(xi.u, fu), scale(xi.v, fv));
    const Vec3 f_ee = second(eta, eta), f_xe = second(xi, eta);
    const double det = det3(f_xi, f_ee, f_xe);
    if (std::abs(det) > 1e-8 * std::max(1.0, norm(f_xi) * norm(f_ee) * norm(f_xe)))
        throw DomainError("Whitney cross cap criterion holds at p: no unit normal, not a frontal");
}

} // namespace detail

inline SliceCurve orthogonal_slice(const FrontalSurface& F, Point2 p, int order = 5) {
    if (!F.chart().is_euclidean()) throw DomainError("slicing is defined for the Euclidean ambient only");
    if (order < 3) throw DomainError("slice needs order >= 3");
    detail::whitney_guard(F, p);
    const LocalChart c(F, p, LocalChart::internal_order(order));
    if (c.kind() != SingularKind::first) throw DomainError("slice needs a point of the first kind");

    // Coordinates (a, b) with (s, w) = (a + b ρ(a), b): the a-axis is the
    // singular curve and ∂_b is the null direction on it.
    const int n = c.F()[0].order();
    const Point2 o{0.0, 0.0};
    const Jet2 A = Jet2::offset(Axis::u, n, o);
    const Jet2 B = Jet2::offset(Axis::v, n, o);
    const Jet2 rho = c.eta_s().along(Axis::u) / c.eta_w().along(Axis::u);
    const Jet2 ds = A + B * rho.truncated(n);
    const Vec3J G = compose(c.F(), ds, B);

    SliceCurve sc;
    sc.p = c.point();
    sc.origin = values(G);
    auto coeffs = [&](std::size_t k, int i, int j) { return G[k].coeff(i, j); };
    for (std::size_t k = 0; k < 3; ++k) {
        sc.f_u[k] = coeffs(k, 1, 0);
        sc.f_vv[k] = 2 * coeffs(k, 0, 2);
        sc.f_vvv[k] = 6 * coeffs(k, 0, 3);
        sc.f_uv[k] = coeffs(k, 1, 1);
    }
    const double fu2 = dot(sc.f_u, sc.f_u);
    if (!(fu2 > 0.0)) throw DomainError("f_u vanishes: the singular direction is undefined");
    sc.normal = scale(1.0 / std::sqrt(fu2), sc.f_u);
    sc.u2_expected = -dot(sc.f_u, sc.f_vv) / fu2;

    // Solve ⟨G(u(t), t) − G(0), f_u⟩ = 0 order by order.
    const Jet2 h = dot(sub(G, constant_vec(G[0], sc.origin)), constant_vec(G[0], sc.f_u));
    const double hu = h.coeff(1, 0);
    Jet2 U(n, 0.0, o);
    for (int k = 1; k <= n; ++k) {
        const Jet2 r = compose(h, U, A);
        U.at(k, 0) = -r.coeff(k, 0) / hu;
    }
    const Vec3J sigma = sub(compose(G, U, A), constant_vec(A, sc.origin));

    Vec3 e1 = sub(sc.f_vv, scale(dot(sc.f_vv, sc.normal), sc.normal));
    const double l1 = norm(e1);
    if (!(l1 > 1e-12 * std::max(1.0, norm(sc.f_vv)))) throw DomainError("f_vv is parallel to f_u: degenerate slice");
    e1 = scale(1.0 / l1, e1);
    sc.e1 = e1;
    sc.e2 = cross(sc.normal, e1);
    for (int k = 0; k <= n; ++k) {
        sc.u_of_t.push_back(U.coeff(k, 0));
        const Vec3 ck{sigma[0].coeff(k, 0), sigma[1].coeff(k, 0), sigma[2].coeff(k, 0)};
        sc.x.push_back(dot(ck, sc.e1));
        sc.y.push_back(dot(ck, sc.e2));
    }
    return sc;
}

inline SliceCheck slice_cusp_check(const FrontalSurface& F, Point2 p) {
    const SliceCurve sc = orthogonal_slice(F, p);
    const LocalChart c = chart_at(F, sc.p);
    SliceCheck r;
    r.kappa_c_surface = first_kind_invariants(c).kappa_c;
    if (std::abs(r.kappa_c_surface) <= 1e-10) throw DomainError("κ_c(p) = 0: the slice is not a 3/2-cusp");
    r.tau_slice = planar_cusp_curvature(sc.x, sc.y);
    r.rel_diff = std::abs(r.tau_slice - r.kappa_c_surface) / std::abs(r.kappa_c_surface);
    return r;
}

} // namespace frontlab
