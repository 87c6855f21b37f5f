#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "frontlab/expr.hpp"
#include "frontlab/surface_spec.hpp"

using namespace frontlab;
using Catch::Approx;

namespace {

Expression parse_uv(const std::string& s, const std::set<std::string>& params = {}) {
    return parse_expression(s, surface_variables(), params);
}

} // namespace

TEST_CASE("cuspidal edge document parses", "[expr][spec]") {
    const SurfaceSpec s = parse_surface_spec(R"toml(
[surface]
f = ["u", "v^2", "v^3"]
)toml");
    std::vector<double> x{0.5, -2.0};
    CHECK(s.f[0].evaluate(x, s.params) == 0.5);
    CHECK(s.f[1].evaluate(x, s.params) == 4.0);
    CHECK(s.f[2].evaluate(x, s.params) == -8.0);
    CHECK_FALSE(s.normal.has_value());
    CHECK(s.chart.is_euclidean());
}

TEST_CASE("cone document parses with the expected map", "[expr][spec]") {
    const SurfaceSpec s = parse_surface_spec(R"toml(
[surface]
f = ["v*cos(u)", "v*sin(u)", "v^2+v"]
)toml");
    std::vector<double> x{0.3, 0.7};
    CHECK(s.f[0].evaluate(x, s.params) == Approx(0.7 * std::cos(0.3)));
    CHECK(s.f[1].evaluate(x, s.params) == Approx(0.7 * std::sin(0.3)));
    CHECK(s.f[2].evaluate(x, s.params) == Approx(0.49 + 0.7));
}

TEST_CASE("non-smooth functions are rejected", "[expr][errors]") {
    CHECK_THROWS_AS(parse_surface_spec("[surface]\nf = [\"abs(u)\", \"v\", \"0\"]\n"), ParseError);
    CHECK_THROWS_AS(parse_uv("sign(u)"), ParseError);
    CHECK_THROWS_AS(parse_uv("floor(v)"), ParseError);
}

TEST_CASE("parse errors carry positions", "[expr][errors]") {
    try {
        parse_uv("u + * v");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 5);
    }
    CHECK_THROWS_AS(parse_uv("u + w"), ParseError);   // unknown identifier
    CHECK_THROWS_AS(parse_uv("(u + v"), ParseError);
    CHECK_THROWS_AS(parse_uv("u^v"), ParseError);     // only constant exponents
}

TEST_CASE("spec documents report structural errors", "[spec][errors]") {
    CHECK_THROWS_AS(parse_surface_spec("[surface]\nname = \"x\"\n"), ParseError);               // no f
    CHECK_THROWS_AS(parse_surface_spec("[surface]\nf = [\"u\", \"v\"]\n"), ParseError);         // two components
    CHECK_THROWS_AS(parse_surface_spec("[surface]\nf = [\"u\", \"v\", \"a*u\"]\n"), ParseError); // undeclared a
    CHECK_THROWS_AS(parse_surface_spec("[surface]\nf = [\"u\",\"v\",\"0\"]\n[domain]\nu = [1, 0]\n"), ParseError);
    CHECK_THROWS_AS(parse_surface_spec("[surface]\nf = [\"u\",\"v\",\"0\"]\n[metric]\ntype = \"torus\"\n"), ParseError);
    CHECK_THROWS_AS(parse_surface_spec("[surface]\nf = [\"u\",\"v\",\"0\"]\n[params]\nu = 1\n"), ParseError);
}

TEST_CASE("parameters are late bound", "[expr][spec]") {
    const SurfaceSpec s = parse_surface_spec(R"toml(
[surface]
f = ["u", "v^2", "v^3 + a*u^k"]
[params]
a = 2
k = 3
)toml");
    std::vector<double> x{0.5, 0.0};
    CHECK(s.f[2].evaluate(x, s.params) == Approx(0.25));
    Params p = s.params;
    p["k"] = 2;
    CHECK(s.f[2].evaluate(x, p) == Approx(0.5));
    p.erase("a");
    CHECK_THROWS_AS(s.f[2].evaluate(x, p), DomainError);
}

TEST_CASE("evaluate_jet examples", "[expr][jet]") {
    const Jet2 c = evaluate_jet(parse_uv("v^3"), {0, 0}, 4);
    CHECK(c.size() == 15);
    CHECK(c.coeff(0, 3) == 1.0);
    const Jet2 s = evaluate_jet(parse_uv("v*sin(u)"), {0, 0}, 3);
    CHECK(s.coeff(1, 1) == Approx(1.0));
    CHECK(s.coeff(3, 0) == 0.0);
    const Jet2 r = evaluate_jet(parse_uv("sqrt(1+u)"), {0, 0}, 2);
    CHECK(r.coeff(0, 0) == Approx(1.0));
    CHECK(r.coeff(1, 0) == Approx(0.5));
    CHECK(r.coeff(2, 0) == Approx(-0.125));
}

TEST_CASE("evaluate_jet domain and order errors", "[expr][jet][errors]") {
    CHECK_THROWS_AS(evaluate_jet(parse_uv("log(u)"), {0, 0}, 2), DomainError);
    CHECK_THROWS_AS(evaluate_jet(parse_uv("sqrt(u - 1)"), {0, 0}, 2), DomainError);
    CHECK_THROWS_AS(evaluate_jet(parse_uv("u"), {0, 0}, 7), DomainError);
    CHECK_NOTHROW(evaluate_jet(parse_uv("u"), {0, 0}, 7, {}, 8));
}

TEST_CASE("deflate examples", "[expr][jet]") {
    const Jet2 psi = evaluate_jet(parse_uv("exp(u)*cos(v) + u*v"), {0, 0}, 5);
    const Jet2 v = Jet2::offset(Axis::v, 5);
    const Jet2 back = (v * psi).deflate(Axis::v);
    for (int i = 0; i + 0 <= 4; ++i)
        for (int j = 0; i + j <= 4; ++j) CHECK(back.coeff(i, j) == Approx(psi.coeff(i, j)).margin(1e-14));
    CHECK_THROWS_AS(evaluate_jet(parse_uv("u + v"), {0, 0}, 3).deflate(Axis::v), DomainError);

    // λ of the standard cuspidal edge: v·sqrt(9v² + 4)
    const Jet2 lam = evaluate_jet(parse_uv("v*sqrt(9*v^2 + 4)"), {0, 0}, 4);
    CHECK(lam.deflate(Axis::v).value() == Approx(2.0));
}

TEST_CASE("symbolic derivatives agree with jets", "[expr]") {
    const Expression e = parse_uv("sin(u*v) + exp(u)/(2 + v^2) - log(3 + u)");
    const Point2 p{0.3, -0.4};
    const Jet2 j = evaluate_jet(e, p, 3);
    std::vector<double> x{p.u, p.v};
    CHECK(e.derivative(0).evaluate(x, {}) == Approx(j.coeff(1, 0)).epsilon(1e-13));
    CHECK(e.derivative(1).evaluate(x, {}) == Approx(j.coeff(0, 1)).epsilon(1e-13));
    CHECK(e.derivative(0).derivative(1).evaluate(x, {}) == Approx(j.coeff(1, 1)).epsilon(1e-12));
    CHECK(e.derivative(1).derivative(1).derivative(1).evaluate(x, {}) == Approx(6 * j.coeff(0, 3)).epsilon(1e-12));
}

TEST_CASE("jet arithmetic is associative and distributive", "[jet]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-1, 1);
    auto rnd = [&] {
        Jet2 j(5);
        for (int i = 0; i <= 5; ++i)
            for (int k = 0; i + k <= 5; ++k) j.at(i, k) = U(rng);
        return j;
    };
    for (int t = 0; t < 100; ++t) {
        const Jet2 a = rnd(), b = rnd(), c = rnd();
        const Jet2 l = (a * b) * c, r = a * (b * c);
        const Jet2 d1 = a * (b + c), d2 = a * b + a * c;
        for (int i = 0; i <= 5; ++i)
            for (int k = 0; i + k <= 5; ++k) {
                REQUIRE(l.coeff(i, k) == Approx(r.coeff(i, k)).margin(1e-13));
                REQUIRE(d1.coeff(i, k) == Approx(d2.coeff(i, k)).margin(1e-13));
            }
    }
}

TEST_CASE("substitution composes maps", "[expr]") {
    const Expression e = parse_uv("u^2*v + sin(v)");
    const Expression s = Expression::variable(0, "u"), t = Expression::variable(1, "v");
    const Expression g = e.substitute({s + t, s - t});
    std::vector<double> x{0.2, 0.1};
    std::vector<double> y{0.3, 0.1};
    CHECK(g.evaluate(x, {}) == Approx(e.evaluate(y, {})));
}
