#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "frontlab/expr.hpp"
#include "frontlab/jet.hpp"

using namespace frontlab;
using Catch::Approx;

TEST_CASE("jet of v^3 has a single coefficient", "[jet]") {
    const Jet2 j = evaluate_jet(parse_expression("v^3", surface_variables()), {0.0, 0.0}, 4);
    REQUIRE(j.size() == 15);
    for (int d = 0; d <= 4; ++d)
        for (int k = 0; k <= d; ++k) CHECK(j.coeff(d - k, k) == (d - k == 0 && k == 3 ? 1.0 : 0.0));
}

TEST_CASE("jet of v*sin(u) through order 3", "[jet]") {
    const Jet2 j = evaluate_jet(parse_expression("v*sin(u)", surface_variables()), {0.0, 0.0}, 3);
    for (int d = 0; d <= 3; ++d)
        for (int k = 0; k <= d; ++k) CHECK(j.coeff(d - k, k) == Approx(d - k == 1 && k == 1 ? 1.0 : 0.0).margin(1e-15));
    CHECK(j.coeff(3, 1) == 0.0);
}

TEST_CASE("binomial series of sqrt(1+u)", "[jet]") {
    const Jet2 j = evaluate_jet(parse_expression("sqrt(1+u)", surface_variables()), {0.0, 0.0}, 2);
    CHECK(j.coeff(0, 0) == Approx(1.0));
    CHECK(j.coeff(1, 0) == Approx(0.5));
    CHECK(j.coeff(2, 0) == Approx(-0.125));
}

TEST_CASE("deflation", "[jet]") {
    const auto uv = surface_variables();
    SECTION("v * psi deflates to psi") {
        const Jet2 psi = evaluate_jet(parse_expression("exp(u) + u*v^2 - 3", uv), {0.2, 0.1}, 5);
        const Jet2 vpsi = psi.times_increment(Axis::v);
        const Jet2 back = vpsi.deflate(Axis::v);
        REQUIRE(back.order() == psi.order());
        for (int d = 0; d <= 5; ++d)
            for (int k = 0; k <= d; ++k) CHECK(back.coeff(d - k, k) == psi.coeff(d - k, k));
    }
    SECTION("u + v is not divisible by v") {
        const Jet2 j = evaluate_jet(parse_expression("u + v", uv), {0.0, 0.0}, 3);
        CHECK_THROWS_AS(j.deflate(Axis::v), DomainError);
    }
    SECTION("lambda of the standard cuspidal edge") {
        const Jet2 lam = evaluate_jet(parse_expression("v*sqrt(9*v^2+4)", uv), {0.0, 0.0}, 5);
        CHECK(lam.value() == 0.0);
        CHECK(lam.deflate(Axis::v).value() == Approx(2.0));
    }
}

TEST_CASE("jet evaluation errors", "[jet]") {
    const auto uv = surface_variables();
    CHECK_THROWS_AS(evaluate_jet(parse_expression("sqrt(u)", uv), {0.0, 0.0}, 2), DomainError);
    CHECK_THROWS_AS(evaluate_jet(parse_expression("log(u-1)", uv), {0.0, 0.0}, 2), DomainError);
    CHECK_THROWS_AS(evaluate_jet(parse_expression("u", uv), {0.0, 0.0}, 7), DomainError);
    CHECK_NOTHROW(evaluate_jet(parse_expression("u", uv), {0.0, 0.0}, 7, {}, 12));
}

TEST_CASE("elementary functions agree with closed-form derivatives", "[jet]") {
    const Point2 b{0.3, -0.2};
    const auto u = Jet2::variable(Axis::u, 4, b);
    const auto v = Jet2::variable(Axis::v, 4, b);
    const Jet2 e = exp(u * v);
    // ∂^2/∂u∂v exp(uv) = (1 + uv) exp(uv)
    CHECK(e.derivative(1, 1) == Approx((1 + b.u * b.v) * std::exp(b.u * b.v)));
    const Jet2 t = tan(u);
    CHECK(t.derivative(1, 0) == Approx(1.0 / std::pow(std::cos(b.u), 2)));
    const Jet2 l = log(1.0 + u * u);
    CHECK(l.derivative(2, 0) == Approx(2 * (1 - b.u * b.u) / std::pow(1 + b.u * b.u, 2)));
    const Jet2 s = sin(v) * cos(v);
    CHECK(s.derivative(0, 3) == Approx(-4 * std::cos(2 * b.v)));
    CHECK(pow_int(u, -2).derivative(1, 0) == Approx(-2 / std::pow(b.u, 3)));
}

TEST_CASE("composition with increments", "[jet]") {
    const auto uv = surface_variables();
    const Jet2 f = evaluate_jet(parse_expression("sin(u) * exp(v)", uv), {0.0, 0.0}, 6);
    const Jet2 ds = Jet2::offset(Axis::u, 6);
    const Jet2 dw = Jet2::offset(Axis::v, 6);
    // (s, w) -> (s + w^2, 2w)
    const Jet2 g = compose(f, ds + dw * dw, 2.0 * dw);
    const Jet2 direct = evaluate_jet(parse_expression("sin(u + v^2) * exp(2*v)", uv), {0.0, 0.0}, 6);
    for (int d = 0; d <= 6; ++d)
        for (int k = 0; k <= d; ++k) CHECK(g.coeff(d - k, k) == Approx(direct.coeff(d - k, k)).margin(1e-13));
}
