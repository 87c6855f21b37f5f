#pragma once

#include <cmath>
#include <random>
#include <string>

#include "frontlab/catalog.hpp"
#include "frontlab/frontal.hpp"

namespace testing {

using namespace frontlab;

inline FrontalSurface catalog_surface(const std::string& name, const Params& overrides = {}) {
    return resolve_normal(catalog_spec(name, overrides));
}

inline FrontalSurface surface_from(const std::string& text) { return resolve_normal(parse_surface_spec(text)); }

/// Pull a spec back along (s, t) -> p + A(s, t) + q(s, t), with det A = 1
/// and q quadratic, so p corresponds to the origin of the new chart.
struct Reparam {
    double a, b, c, d;  // A = [[a, b], [c, d]]
    double q1, q2;      // u += q1 s t, v += q2 s^2
};

inline Reparam random_unimodular(std::mt19937_64& rng, bool quadratic) {
    std::uniform_real_distribution<double> ang(-M_PI, M_PI), logs(-0.5, 0.5), shear(-1.0, 1.0), qd(-0.8, 0.8);
    // rotation * diag(e^k, e^-k) * shear keeps det = 1
    const double th = ang(rng), k = std::exp(logs(rng)), sh = shear(rng);
    const double c = std::cos(th), s = std::sin(th);
    const double m00 = k, m01 = k * sh, m10 = 0.0, m11 = 1.0 / k;
    Reparam r;
    r.a = c * m00 - s * m10;
    r.b = c * m01 - s * m11;
    r.c = s * m00 + c * m10;
    r.d = s * m01 + c * m11;
    r.q1 = quadratic ? qd(rng) : 0.0;
    r.q2 = quadratic ? qd(rng) : 0.0;
    return r;
}

inline SurfaceSpec reparametrize(SurfaceSpec spec, Point2 p, const Reparam& r, double half_width = 0.15) {
    const Expression s = Expression::variable(0, "u"), t = Expression::variable(1, "v");
    auto num = [](double x) { return Expression::constant(x); };
    const Expression U = num(p.u) + num(r.a) * s + num(r.b) * t + num(r.q1) * s * t;
    const Expression V = num(p.v) + num(r.c) * s + num(r.d) * t + num(r.q2) * s * s;
    const std::vector<Expression> sub{U, V};
    for (std::size_t i = 0; i < 3; ++i) {
        spec.f[i] = spec.f[i].substitute(sub);
        spec.f_text[i] = spec.f[i].str();
        if (spec.normal) {
            (*spec.normal)[i] = (*spec.normal)[i].substitute(sub);
            spec.normal_text[i] = (*spec.normal)[i].str();
        }
    }
    spec.domain = Domain{-half_width, half_width, -half_width, half_width};
    spec.seed = Point2{0.0, 0.0};
    return spec;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace testing
