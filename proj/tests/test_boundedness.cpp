#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "frontlab/boundedness.hpp"
#include "frontlab/classify.hpp"
#include "support.hpp"

using namespace frontlab;
using namespace testing;
using Catch::Approx;

namespace {

FrontalSurface cusp_k(int k) { return catalog_surface("cusp_k", {{"k", double(k)}}); }

void check_hierarchy(const FunctionVerdict& v) {
    if (v.rationally_continuous) CHECK(v.rationally_bounded);
    if (v.bounded_near) CHECK(v.rationally_bounded);
}

} // namespace

TEST_CASE("S_k family verdicts", "[boundedness]") {
    const BoundednessVerdict k2 = boundedness_report(cusp_k(2), {0, 0});
    CHECK(k2.method == VerdictMethod::Theorem);
    CHECK_FALSE(k2.K.rationally_bounded);
    CHECK_FALSE(k2.K.bounded_near);

    const BoundednessVerdict k3 = boundedness_report(cusp_k(3), {0, 0});
    CHECK(k3.K.rationally_bounded);
    CHECK_FALSE(k3.K.rationally_continuous);
    CHECK_FALSE(k3.K.bounded_near);

    const BoundednessVerdict k4 = boundedness_report(cusp_k(4), {0, 0});
    CHECK(k4.K.rationally_bounded);
    CHECK(k4.K.rationally_continuous);
    CHECK_FALSE(k4.K.bounded_near);
}

TEST_CASE("S_k family probes agree with the verdicts", "[boundedness][probe]") {
    const BlowupProbe p2 = blowup_probe(cusp_k(2), ProbeScalar::K, {0, 0});
    CHECK_FALSE(p2.bounded);
    const BlowupProbe p3 = blowup_probe(cusp_k(3), ProbeScalar::K, {0, 0});
    CHECK(p3.bounded);
    CHECK_FALSE(p3.continuous);
    const BlowupProbe p4 = blowup_probe(cusp_k(4), ProbeScalar::K, {0, 0});
    CHECK(p4.bounded);
    CHECK(p4.continuous);
    REQUIRE(p4.limit);
    CHECK(*p4.limit == Approx(0.0).margin(1e-3));
}

TEST_CASE("5/2-cuspidal edge: K and H bounded near the point", "[boundedness]") {
    const FrontalSurface F = catalog_surface("s52");
    const BoundednessVerdict v = boundedness_report(F, {0, 0});
    CHECK(v.K.bounded_near);
    CHECK(v.H.bounded_near);
    CHECK(v.K.rationally_bounded);
    CHECK(v.H.rationally_bounded);
    const BlowupProbe pk = blowup_probe(F, ProbeScalar::K, {0, 0});
    CHECK(pk.bounded);
    REQUIRE(pk.decade_max.size() >= 4);
    for (std::size_t i = 1; i < pk.decade_max.size(); ++i)
        CHECK(pk.decade_max[i] <= 1.5 * pk.decade_max[i - 1] + 1e-9);
}

TEST_CASE("cuspidal cross caps", "[boundedness]") {
    const BoundednessVerdict a = boundedness_report(catalog_surface("ccr2"), {0, 0});
    CHECK(a.K.rationally_bounded);
    CHECK_FALSE(a.K.rationally_continuous);
    CHECK(a.H.rationally_bounded);
    CHECK_FALSE(a.H.rationally_continuous);

    const BoundednessVerdict b = boundedness_report(catalog_surface("ccr"), {0, 0});
    CHECK(b.K.rationally_bounded);
    CHECK(b.K.rationally_continuous);
    CHECK(b.K.bounded_near);
    CHECK(b.H.rationally_bounded);
    CHECK_FALSE(b.H.rationally_continuous);
    CHECK_FALSE(b.H.bounded_near);
}

TEST_CASE("cuspidal edge with nonzero invariants", "[boundedness]") {
    const BoundednessVerdict v = boundedness_report(catalog_surface("normal_form"), {0, 0});
    CHECK_FALSE(v.K.rationally_bounded);
    CHECK_FALSE(v.H.rationally_bounded);
    CHECK_FALSE(v.K.bounded_near);
    REQUIRE(v.witnesses.size() >= 2);
    CHECK(v.witnesses[0].first == "kappa_pi");
    CHECK(v.witnesses[0].second == Approx(0.45));
}

TEST_CASE("probes", "[boundedness][probe]") {
    const BlowupProbe flat = blowup_probe(catalog_surface("cuspidal_edge"), ProbeScalar::K, {0, 0});
    CHECK(flat.empirical_max == Approx(0.0).margin(1e-9));
    CHECK(flat.bounded);

    const BlowupProbe vk = blowup_probe(catalog_surface("sw2"), ProbeScalar::vK, {0, 0});
    CHECK(vk.bounded);
    CHECK(vk.continuous);
    REQUIRE(vk.limit);
    CHECK(*vk.limit == Approx(-1.0).margin(1e-3));

    ProbeConfig bad;
    bad.r_min = 1.0;
    CHECK_THROWS_AS(blowup_probe(catalog_surface("sw2"), ProbeScalar::K, {0, 0}, bad), ArgumentError);
    CHECK_THROWS_AS(parse_probe_scalar("Q"), ArgumentError);
    CHECK(parse_probe_scalar("vH") == ProbeScalar::vH);
}

TEST_CASE("Gauss map test", "[boundedness][gauss]") {
    const GaussMapTest c = gauss_map_singular(catalog_surface("cuspidal_edge"), {0, 0});
    REQUIRE(c.gauss_singular);
    CHECK(*c.gauss_singular);
    CHECK(c.kappa_nu_zero);
    CHECK(c.KdA_zero);
    CHECK(c.agree());

    for (const char* name : {"cone", "swallowtail_family"}) {
        const FrontalSurface F = catalog_surface(name);
        const GaussMapTest g = gauss_map_singular(F, *F.spec().seed);
        INFO(name);
        REQUIRE(g.gauss_singular);
        CHECK_FALSE(*g.gauss_singular);
        CHECK_FALSE(g.kappa_nu_zero);
        CHECK_FALSE(g.KdA_zero);
        CHECK(g.agree());
    }
}

TEST_CASE("second kind verdicts", "[boundedness]") {
    const BoundednessVerdict sw = boundedness_report(catalog_surface("sw2"), {0, 0});
    CHECK(sw.method == VerdictMethod::Theorem);
    CHECK_FALSE(sw.K.rationally_bounded);  // κ_ν(0) = -1
    CHECK_FALSE(sw.H.rationally_bounded);  // κ_H(0) = 1

    const BoundednessVerdict f2 = boundedness_report(catalog_surface("f2"), {0, 0});
    CHECK(f2.method == VerdictMethod::Empirical);
    CHECK_FALSE(f2.note.empty());
}

TEST_CASE("regular and degenerate points", "[boundedness]") {
    const FrontalSurface F = catalog_surface("cuspidal_edge");
    const BoundednessVerdict r = boundedness_report(F, {0.1, 0.3});
    CHECK(r.K.bounded_near);
    CHECK(r.H.rationally_continuous);
    const FrontalSurface R = surface_from("[surface]\nf = [\"u^2\", \"v^2\", \"u*v\"]\n");
    CHECK_THROWS_AS(boundedness_report(R, {0, 0}), DegenerateError);
}

TEST_CASE("verdict hierarchy", "[boundedness]") {
    const std::pair<const char*, Point2> cases[] = {
        {"cuspidal_edge", {0, 0}}, {"ccr", {0, 0}},   {"ccr2", {0, 0}},      {"s52", {0, 0}},
        {"sw2", {0, 0}},           {"sw2", {0.3, 0}}, {"developable", {0.3, 0}}, {"f1", {0, 0}},
    };
    for (const auto& [name, p] : cases) {
        INFO(name);
        const BoundednessVerdict v = boundedness_report(catalog_surface(name), p);
        check_hierarchy(v.K);
        check_hierarchy(v.H);
    }
}
