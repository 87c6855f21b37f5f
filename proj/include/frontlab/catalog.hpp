#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "frontlab/errors.hpp"
#include "frontlab/surface_spec.hpp"

namespace frontlab {

struct CatalogEntry {
    std::string_view name;
    std::string_view summary;
    std::vector<std::pair<std::string_view, std::string_view>> golden;
    std::string_view text;  // surface document
};

/// Built-in example surfaces. data/catalog holds the same documents as files.
inline const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = {
        {"cuspidal_edge", "standard cuspidal edge (u, v^2, v^3)", {{"kappa_c(0,0)", "3/sqrt(2)"}, {"kappa_nu", "0"}, {"kappa_s", "0"}},
         R"toml(# Standard cuspidal edge. The adjugate normal is (0, -3v, 2)/sqrt(9v^2 + 4).
[surface]
name = "cuspidal_edge"
f = ["u", "v^2", "v^3"]

[domain]
u = [-1, 1]
v = [-1, 1]

[analysis]
seed = [0, 0.1]
)toml"},
        {"f1", "second-kind front, not a swallowtail", {{"class(0,0)", "SecondKindFrontNonSwallowtail"}, {"singular set", "v = -10u^3"}},
         R"toml(# Second-kind front that is not a swallowtail; singular set 10u^3 + v = 0.
[surface]
name = "f1"
f = ["5*u^4 + 2*u*v", "v", "4*u^5 + u^2*v - v^2"]

[domain]
u = [-0.3, 0.3]
v = [-0.5, 0.5]

[analysis]
seed = [0.05, 0]
)toml"},
        {"f2", "second-kind frontal, not a front", {{"class(0,0)", "SecondKindNonFront"}, {"kappa_H(0,0)", "0"}},
         R"toml(# Frontal, not a front at the origin; null field d/du - u d/dv on v = 0.
[surface]
name = "f2"
f = ["u^2 + 2*v", "u^3 + 3*u*v", "u^5 + 5*u^3*v"]

[domain]
u = [-0.5, 0.5]
v = [-0.5, 0.5]

[analysis]
seed = [0.1, 0]
)toml"},
        {"cone", "cone over a circle", {{"kappa_nu(u,0)", "1/sqrt(2)"}},
         R"toml(# Cone with apex f(u, 0) = 0; limiting normal curvature 1/sqrt(2) on v = 0.
[surface]
name = "cone"
f = ["v*cos(u)", "v*sin(u)", "v^2 + v"]
normal = [
  "-(1 + 2*v)*cos(u)/sqrt((1 + 2*v)^2 + 1)",
  "-(1 + 2*v)*sin(u)/sqrt((1 + 2*v)^2 + 1)",
  "1/sqrt((1 + 2*v)^2 + 1)",
]

[domain]
u = [-3.14159, 3.14159]
v = [-0.4, 0.4]

[analysis]
seed = [1.0, 0]
)toml"},
        {"swallowtail_family", "swallowtail family in a, b", {{"kappa_nu(0,0)", "8a"}, {"d kappa_nu/du(0)", "-64b/3"}},
         R"toml(# Swallowtail at the origin with limiting normal curvature 8a there.
[surface]
name = "swallowtail_family"
f = [
  "u^4 - 4*u^2*v + a*(u^2 - 2*v)^2",
  "u^3 - 3*u*v + b*(u^2 - 2*v)^2",
  "u^2/2 - v",
]
normal = [
  "3/sqrt(9 + 64*u^2 + 16*(3*(a - 1)*u^2 - 8*b*u^3 - 6*a*v + 16*b*u*v)^2)",
  "-8*u/sqrt(9 + 64*u^2 + 16*(3*(a - 1)*u^2 - 8*b*u^3 - 6*a*v + 16*b*u*v)^2)",
  "-4*(3*(a - 1)*u^2 - 8*b*u^3 - 6*a*v + 16*b*u*v)/sqrt(9 + 64*u^2 + 16*(3*(a - 1)*u^2 - 8*b*u^3 - 6*a*v + 16*b*u*v)^2)",
]

[params]
a = 0.5
b = 1

[domain]
u = [-0.5, 0.5]
v = [-0.5, 0.5]

[analysis]
seed = [0.1, 0]
)toml"},
        {"ccr", "cuspidal cross cap with prescribed ks, kn, c", {{"class(0,0)", "CuspidalCrossCap"}, {"kappa_s(0,0)", "ks"}, {"kappa_nu(0,0)", "kn"}, {"kappa_c(u,0)", "c u (1+(kn^2+ks^2)u^2)^(3/4)/(1+kn^2 u^2)^(5/4)"}},
         R"toml(# Cuspidal cross cap at the origin with prescribed singular curvature ks and
# limiting normal curvature kn.
[surface]
name = "ccr"
f = ["u", "ks*u^2/2 + v^2/2", "c*u*v^3/6 + kn*u^2/2"]
normal = [
  "(3*c*ks*u^2*v - c*v^3 - 6*kn*u)/sqrt(9*c^2*u^2*v^2 + (c*v*(v^2 - 3*ks*u^2) + 6*kn*u)^2 + 36)",
  "-3*c*u*v/sqrt(9*c^2*u^2*v^2 + (c*v*(v^2 - 3*ks*u^2) + 6*kn*u)^2 + 36)",
  "6/sqrt(9*c^2*u^2*v^2 + (c*v*(v^2 - 3*ks*u^2) + 6*kn*u)^2 + 36)",
]

[params]
ks = 2
kn = 0
c = 6

[domain]
u = [-0.5, 0.5]
v = [-0.5, 0.5]

[analysis]
seed = [0, 0]
)toml"},
        {"s52", "5/2-cuspidal edges along the u-axis", {{"kappa_s(0,0)", "2a"}, {"kappa_nu(0,0)", "2c"}, {"K, H", "bounded near (0,0)"}},
         R"toml(# 5/2-cuspidal edges along the u-axis; K and H stay bounded.
[surface]
name = "s52"
f = ["u", "a*u^2 + v^2", "c*u^2 + b*v^5"]
normal = [
  "(10*a*b*u*v^3 - 4*c*u)/sqrt((4*c*u - 10*a*b*u*v^3)^2 + 25*b^2*v^6 + 4)",
  "-5*b*v^3/sqrt((4*c*u - 10*a*b*u*v^3)^2 + 25*b^2*v^6 + 4)",
  "2/sqrt((4*c*u - 10*a*b*u*v^3)^2 + 25*b^2*v^6 + 4)",
]

[params]
a = 1
b = 1
c = 1

[domain]
u = [-0.5, 0.5]
v = [-0.5, 0.5]

[analysis]
seed = [0, 0]
)toml"},
        {"cusp_k", "cuspidal edge (u, v^2, v^3 + a u^k)", {{"K", "rationally bounded iff k >= 3, rationally continuous iff k >= 4"}},
         R"toml(# Cuspidal edge perturbed by a*u^k; K is rationally bounded for k >= 3 and
# rationally continuous for k >= 4.
[surface]
name = "cusp_k"
f = ["u", "v^2", "v^3 + a*u^k"]

[params]
a = 1
k = 3

[domain]
u = [-0.5, 0.5]
v = [-0.5, 0.5]

[analysis]
seed = [0, 0]
)toml"},
        {"ccr2", "cuspidal cross cap (u, v^2, u v^3 + u^2)", {{"kappa_nu(0,0)", "2"}, {"K", "rationally bounded"}},
         R"toml(# Cuspidal cross cap with nonzero limiting normal curvature (2) whose K is
# still rationally bounded; not a front at the origin.
[surface]
name = "ccr2"
f = ["u", "v^2", "u*v^3 + u^2"]
normal = [
  "-2*(2*u + v^3)/sqrt(4 + 4*(2*u + v^3)^2 + 9*u^2*v^2)",
  "-3*u*v/sqrt(4 + 4*(2*u + v^3)^2 + 9*u^2*v^2)",
  "2/sqrt(4 + 4*(2*u + v^3)^2 + 9*u^2*v^2)",
]

[domain]
u = [-0.5, 0.5]
v = [-0.5, 0.5]

[analysis]
seed = [0, 0]
)toml"},
        {"developable", "developable cuspidal edge over a latitude circle", {{"kappa_c(u,0)", "-2 z0/(sqrt(1-z0^2) sqrt(a))"}},
         R"toml(# Developable cuspidal edge built on the latitude circle at height z0 of the
# unit sphere: f = v*xi(u) + a * integral of xi. The geodesic curvature of
# the circle is z0/rho, so kappa_c = -2*z0/(rho*sqrt(a)).
[surface]
name = "developable"
f = [
  "v*sqrt(1 - z0^2)*cos(u/sqrt(1 - z0^2)) + a*(1 - z0^2)*sin(u/sqrt(1 - z0^2))",
  "v*sqrt(1 - z0^2)*sin(u/sqrt(1 - z0^2)) + a*(1 - z0^2)*(1 - cos(u/sqrt(1 - z0^2)))",
  "v*z0 + a*z0*u",
]

[params]
a = 1
z0 = 0.5

[domain]
u = [-1, 1]
v = [-0.5, 0.5]

[analysis]
seed = [0.3, 0]
)toml"},
        {"sw2", "swallowtail with kappa_H = c/b^2", {{"class(0,0)", "Swallowtail"}, {"kappa_H(0,0)", "c/b^2"}, {"tau_s", "2b"}, {"tau_c", "sqrt(2) c/b^(3/2)"}, {"2 hatH(0,0)", "c/b^2"}, {"hatK(0,0)", "-c^2/b^2"}},
         R"toml(# Swallowtail at the origin with kappa_H = c/b^2, tau_s = 2b and
# tau_c = sqrt(2)*c/b^(3/2).
[surface]
name = "sw2"
f = ["v + u^2/2 - b^2*u^2*v/2 - b^2*u^4/8", "b*u^3/3 + b*u*v", "c*v^2/2"]
normal = [
  "2*b*c*(u^2 + v)/sqrt(b^6*u^4 + b^4*u^2*(c^2*(u^2 + 2*v)^2 + 4) + 4*b^2*(c^2*v^2 + 1) + 4*c^2*u^2)",
  "c*u*(b^2*(u^2 + 2*v) - 2)/sqrt(b^6*u^4 + b^4*u^2*(c^2*(u^2 + 2*v)^2 + 4) + 4*b^2*(c^2*v^2 + 1) + 4*c^2*u^2)",
  "-b*(b^2*u^2 + 2)/sqrt(b^6*u^4 + b^4*u^2*(c^2*(u^2 + 2*v)^2 + 4) + 4*b^2*(c^2*v^2 + 1) + 4*c^2*u^2)",
]

[params]
b = 1
c = 1

[domain]
u = [-1, 1]
v = [-0.5, 0.5]

[analysis]
seed = [0.3, 0]
)toml"},
        {"normal_form", "cuspidal edge normal form with linear coefficient functions", {{"kappa_s(0,0)", "a0"}, {"kappa_nu(0,0)", "b00"}, {"kappa_c(0,0)", "b30"}, {"d kappa_s", "b00*b2 + 3*a1"}, {"d kappa_nu", "-a0*b2 + 3*b01"}, {"d kappa_c", "b3u"}},
         R"toml(# Cuspidal edge normal form with a(u) = a0 + a1*u, b0(u) = b00 + b01*u,
# b2 constant and b3(u, v) = b30 + b3u*u + b3v*v. At the origin
# kappa_s = a0, kappa_nu = b00, kappa_c = b30.
[surface]
name = "normal_form"
f = [
  "u",
  "((a0 + a1*u)*u^2 + v^2)/2",
  "((b00 + b01*u)*u^2 + b2*u*v^2)/2 + (b30 + b3u*u + b3v*v)*v^3/6",
]

[params]
a0 = 0.7
a1 = -0.4
b00 = 0.3
b01 = 0.5
b2 = 1.2
b30 = 1.5
b3u = -0.8
b3v = 0.6

[domain]
u = [-0.5, 0.5]
v = [-0.5, 0.5]

[analysis]
seed = [0, 0]
)toml"},
    };
    return entries;
}

inline const CatalogEntry& catalog_entry(std::string_view name) {
    for (const auto& e : catalog())
        if (e.name == name) return e;
    throw Error("unknown catalog entry '" + std::string(name) + "'");
}

/// Override parameter bindings; every name must already be declared.
inline void apply_params(SurfaceSpec& spec, const Params& overrides) {
    for (const auto& [k, v] : overrides) {
        auto it = spec.params.find(k);
        if (it == spec.params.end()) throw ArgumentError("unknown parameter '" + k + "'");
        it->second = v;
    }
}

inline SurfaceSpec catalog_spec(std::string_view name, const Params& overrides = {}) {
    SurfaceSpec s = parse_surface_spec(catalog_entry(name).text);
    apply_params(s, overrides);
    return s;
}

} // namespace frontlab
