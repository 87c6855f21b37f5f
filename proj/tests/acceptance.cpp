// Acceptance checks, one line per criterion:  acceptance [--criterion N]
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frontlab/boundedness.hpp"
#include "frontlab/catalog.hpp"
#include "frontlab/classify.hpp"
#include "frontlab/invariants.hpp"
#include "frontlab/slicing.hpp"
#include "support.hpp"

using namespace frontlab;
using namespace testing;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

/// Collects named checks; the first failures end up in the detail line.
class Checks {
public:
    void expect(bool ok, const std::string& what) {
        ++count_;
        if (!ok) {
            pass_ = false;
            if (failed_.size() < 4) failed_.push_back(what);
        }
    }
    void near(double got, double want, double tol, const std::string& what) {
        std::ostringstream s;
        s.precision(10);
        s << what << " = " << got << " (want " << want << ", tol " << tol << ")";
        expect(std::abs(got - want) <= tol, s.str());
    }
    void note(const std::string& s) { notes_.push_back(s); }
    Outcome done() const {
        Outcome o;
        o.pass = pass_;
        std::ostringstream s;
        s << count_ << " checks";
        for (const auto& n : notes_) s << "; " << n;
        for (const auto& f : failed_) s << "; failed: " << f;
        o.detail = s.str();
        return o;
    }

private:
    bool pass_ = true;
    int count_ = 0;
    std::vector<std::string> failed_, notes_;
};

std::string fmt(double x) {
    char b[40];
    std::snprintf(b, sizeof b, "%.10g", x);
    return b;
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
double signed_between(std::mt19937_64& rng, double lo, double hi) {
    return (rng() & 1 ? 1.0 : -1.0) * uniform(rng, lo, hi);
}

// 1. cone
Outcome cone_normal_curvature() {
    Checks c;
    const FrontalSurface F = catalog_surface("cone");
    const TraceResult tr = trace_singular_curve(F, {1.0, 0.0});
    const std::size_t n = tr.samples.size();
    c.expect(n >= 20, "at least 20 samples");
    double worst = 0;
    for (std::size_t i = 0; i < 20 && n >= 20; ++i) {
        const auto& s = tr.samples[i * (n - 1) / 19];
        worst = std::max(worst, std::abs(kappa_nu(F, s.p) - 1 / std::sqrt(2.0)));
    }
    c.expect(worst <= 1e-9, "max |kappa_nu - 1/sqrt(2)| = " + fmt(worst));
    c.note("max error " + fmt(worst));
    return c.done();
}

// 2. swallowtail family
Outcome swallowtail_family() {
    Checks c;
    const FrontalSurface F = catalog_surface("swallowtail_family", {{"a", 0.5}, {"b", 1.0}});
    const SecondKindInvariants s = second_kind_invariants(chart_at(F, {0, 0}));
    c.near(s.kappa_nu, 4.0, 1e-8, "kappa_nu(0)");
    c.expect(s.parametrization == "u", "derivative taken in u");
    c.near(s.d_kappa_nu_du, -64.0 / 3, 1e-4, "d kappa_nu/du(0)");
    return c.done();
}

// 3. sw2 with b = c = 1
Outcome sw2_swallowtail() {
    Checks c;
    const FrontalSurface F = catalog_surface("sw2", {{"b", 1.0}, {"c", 1.0}});
    c.expect(classify_point(F, {0, 0}).label == Classification::Swallowtail, "classification Swallowtail");
    const SecondKindInvariants s = second_kind_invariants(chart_at(F, {0, 0}));
    c.near(s.kappa_H, 1.0, 1e-6, "kappa_H");
    c.expect(s.tau_s && s.tau_c, "tau_s and tau_c present");
    if (s.tau_s && s.tau_c) {
        c.near(*s.tau_s, 2.0, 1e-6, "tau_s");
        c.near(*s.tau_c, std::sqrt(2.0), 1e-6, "tau_c");
        c.near(*s.tau_c, std::sqrt(std::abs(*s.tau_s)) * std::abs(s.kappa_H), 1e-9, "tau_c - sqrt|tau_s| |kappa_H|");
        const double lhs = (s.kappa_H > 0 ? 1.0 : -1.0) * s.kappa_nu * *s.tau_c;
        const double rhs = std::sqrt(std::abs(*s.tau_s)) * s.hat_K;
        c.near(lhs, -std::sqrt(2.0), 1e-6, "sgn(kappa_H) kappa_nu tau_c");
        c.near(rhs, -std::sqrt(2.0), 1e-6, "sqrt|tau_s| hat_K");
    }
    c.near(2 * s.hat_H, 1.0, 1e-6, "2 hat_H(0)");
    c.near(s.hat_K, -1.0, 1e-6, "hat_K(0)");
    return c.done();
}

// 4. limit of |κ_c| / (2 sqrt|κ_s|) at the swallowtail
Outcome swallowtail_limit() {
    Checks c;
    const FrontalSurface F = catalog_surface("sw2", {{"b", 1.0}, {"c", 1.0}});
    std::vector<double> x, y;
    for (double u : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const FirstKindInvariants inv = first_kind_invariants(chart_at(F, {u, 0}));
        x.push_back(u);
        y.push_back(std::abs(inv.kappa_c) / (2 * std::sqrt(std::abs(inv.kappa_s))));
    }
    const double lim = extrapolate_to_zero(x, y);
    const double kH = std::abs(kappa_H(F, {0, 0}));
    c.note("extrapolated " + fmt(lim) + ", |kappa_H(0)| = " + fmt(kH) + ", |lim - |kappa_H|| = " + fmt(std::abs(lim - kH)));
    c.near(lim, 2.0, 1e-3, "extrapolated ratio against the stated target 2c/b^2");
    return c.done();
}

// 5. cuspidal cross cap with κ_s = 2, κ_ν = 0, c = 6
Outcome ccr_example() {
    Checks c;
    const double ks = 2, kn = 0, cc = 6;
    const FrontalSurface F = catalog_surface("ccr", {{"ks", ks}, {"kn", kn}, {"c", cc}});
    c.expect(classify_point(F, {0, 0}).label == Classification::CuspidalCrossCap, "classification CuspidalCrossCap");
    const FirstKindInvariants inv = first_kind_invariants(chart_at(F, {0, 0}));
    c.near(inv.kappa_s, 2.0, 1e-8, "kappa_s(0)");
    c.near(inv.kappa_nu, 0.0, 1e-8, "kappa_nu(0)");
    double worst_printed = 0, worst_def = 0;
    for (double u : {0.1, -0.1, 0.2, -0.2}) {
        const double got = kappa_c(F, {u, 0});
        const double g2 = 1 + (kn * kn + ks * ks) * u * u, c2 = 1 + kn * kn * u * u;
        const double printed = cc * u * std::pow(g2, 1.5) / std::pow(c2, 2.5);
        const double definition = cc * u * std::pow(g2, 0.75) / std::pow(c2, 1.25);
        worst_printed = std::max(worst_printed, std::abs(got - printed) / std::abs(printed));
        worst_def = std::max(worst_def, std::abs(got - definition) / std::abs(definition));
    }
    c.note("rel err vs exponents 3/4, 5/4 " + fmt(worst_def));
    c.expect(worst_printed <= 1e-8, "rel err vs printed closed form = " + fmt(worst_printed));
    return c.done();
}

// 6. 5/2-cuspidal edge
Outcome s52_example() {
    Checks c;
    const FrontalSurface F = catalog_surface("s52", {{"a", 1.0}, {"b", 1.0}, {"c", 1.0}});
    const FirstKindInvariants inv = first_kind_invariants(chart_at(F, {0, 0}));
    c.near(inv.kappa_s, 2.0, 1e-8, "kappa_s(0)");
    c.near(inv.kappa_nu, 2.0, 1e-8, "kappa_nu(0)");
    const BoundednessVerdict v = boundedness_report(F, {0, 0});
    c.expect(v.K.bounded_near, "K bounded_near");
    c.expect(v.H.bounded_near, "H bounded_near");
    ProbeConfig cfg;
    cfg.r_min = 1e-5;
    cfg.r_max = 1e-1;
    cfg.sector_halfwidth = 0.0;
    for (ProbeScalar s : {ProbeScalar::K, ProbeScalar::H}) {
        const BlowupProbe p = blowup_probe(F, s, {0, 0}, cfg);
        c.expect(p.bounded, std::string("probe max stable for ") + to_string(s));
        c.note(std::string("max |") + to_string(s) + "| " + fmt(p.empirical_max));
    }
    return c.done();
}

// 7. S_k family
Outcome sk_family() {
    Checks c;
    struct Want {
        int k;
        bool bounded, continuous;
    };
    for (const Want w : {Want{2, false, false}, Want{3, true, false}, Want{4, true, true}}) {
        const FrontalSurface F = catalog_surface("cusp_k", {{"a", 1.0}, {"k", double(w.k)}});
        const BoundednessVerdict v = boundedness_report(F, {0, 0});
        const BlowupProbe p = blowup_probe(F, ProbeScalar::K, {0, 0});
        const std::string k = "k=" + std::to_string(w.k);
        c.expect(v.K.rationally_bounded == w.bounded, k + " theorem bounded");
        c.expect(v.K.rationally_continuous == w.continuous, k + " theorem continuous");
        c.expect(p.bounded == w.bounded, k + " probe bounded");
        c.expect(p.continuous == w.continuous, k + " probe continuous");
    }
    return c.done();
}

// 8. slices
Outcome slices() {
    Checks c;
    const std::pair<const char*, Point2> pts[] = {
        {"cuspidal_edge", {0.0, 0}}, {"cuspidal_edge", {0.3, 0}}, {"cuspidal_edge", {-0.5, 0}},
        {"sw2", {0.1, 0}},           {"sw2", {-0.2, 0}},          {"sw2", {0.4, 0}},
        {"normal_form", {0.0, 0}},   {"normal_form", {0.1, 0}},   {"normal_form", {-0.2, 0}},
        {"ccr", {0.1, 0}},
    };
    double worst = 0;
    for (const auto& [name, p] : pts) {
        const SliceCheck k = slice_cusp_check(catalog_surface(name), p);
        worst = std::max(worst, k.rel_diff);
    }
    c.expect(worst < 1e-6, "max rel_diff = " + fmt(worst));
    const SliceCheck e = slice_cusp_check(catalog_surface("cuspidal_edge"), {0, 0});
    c.near(e.kappa_c_surface, 3 / std::sqrt(2.0), 1e-9, "cuspidal edge kappa_c");
    c.near(e.tau_slice, 3 / std::sqrt(2.0), 1e-9, "cuspidal edge slice curvature");
    c.note("max rel_diff " + fmt(worst));
    return c.done();
}

// 9. Gauss map, κ_ν and K dÂ at rank-one front points
Outcome gauss_map_agreement() {
    Checks c;
    int fronts = 0, others = 0, other_disagree = 0;
    for (const auto& e : catalog()) {
        const FrontalSurface F = catalog_surface(std::string(e.name));
        if (!F.chart().is_euclidean() || !F.spec().seed) continue;
        TraceOptions o;
        o.max_samples = 40;
        TraceResult tr;
        try {
            tr = trace_singular_curve(F, *F.spec().seed, o);
        } catch (const Error&) {
            continue;
        }
        for (std::size_t i = 0; i < tr.samples.size(); i += 4) {
            const Point2 p = tr.samples[i].p;
            GaussMapTest g;
            bool front;
            try {
                front = is_front_at(F, p);
                g = gauss_map_singular(F, p);
            } catch (const DegenerateError&) {
                continue;
            }
            if (front) {
                ++fronts;
                c.expect(g.agree(), std::string(e.name) + " at (" + fmt(p.u) + ", " + fmt(p.v) + ")");
            } else {
                ++others;
                if (!g.agree()) ++other_disagree;
            }
        }
    }
    c.expect(fronts >= 30, "at least 30 front points, got " + std::to_string(fronts));
    c.note(std::to_string(fronts) + " front points");
    c.note("non-front points (outside the hypothesis) " + std::to_string(others) + ", disagreeing " +
           std::to_string(other_disagree));
    return c.done();
}

// 10. property suites
Outcome properties() {
    Checks c;
    constexpr int trials = 100;
    std::mt19937_64 rng(2024);
    auto normal_form = [&] {
        return catalog_surface("normal_form", {{"a0", uniform(rng, -1, 1)}, {"a1", uniform(rng, -1, 1)},
                                               {"b00", uniform(rng, -1, 1)}, {"b01", uniform(rng, -1, 1)},
                                               {"b2", uniform(rng, -1, 1)}, {"b30", signed_between(rng, 0.5, 2)},
                                               {"b3u", uniform(rng, -1, 1)}, {"b3v", uniform(rng, -1, 1)}});
    };
    auto sw2 = [&] { return catalog_surface("sw2", {{"b", uniform(rng, 0.5, 2)}, {"c", signed_between(rng, 0.5, 2)}}); };
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };

    int bad = 0;
    for (int t = 0; t < trials; ++t) {  // κ_s² + κ_ν² = |γ̂''|²
        const FrontalSurface F = normal_form();
        const Point2 p{uniform(rng, -0.3, 0.3), 0};
        const FirstKindInvariants inv = first_kind_invariants(chart_at(F, p));
        const Vec3J g = singular_curve_jets(F, p, 4).f_gamma;
        const Vec3 d1{g[0].coeff(1, 0), g[1].coeff(1, 0), g[2].coeff(1, 0)};
        const Vec3 d2{2 * g[0].coeff(2, 0), 2 * g[1].coeff(2, 0), 2 * g[2].coeff(2, 0)};
        const Vec3 x = cross(d1, d2);
        const double k2 = dot(x, x) / std::pow(dot(d1, d1), 3);
        bad += rel(inv.kappa_s * inv.kappa_s + inv.kappa_nu * inv.kappa_nu, k2) > 1e-8;
    }
    c.expect(bad == 0, "k3 identity failures " + std::to_string(bad));

    bad = 0;
    for (int t = 0; t < trials; ++t) {  // 4Ĥ = κ_c, 2K̂ = κ_Π
        const bool s = t % 2;
        const FrontalSurface F = s ? sw2() : normal_form();
        const Point2 p{s ? signed_between(rng, 0.05, 0.5) : uniform(rng, -0.3, 0.3), 0};
        const CurveJets j = curve_jets(chart_at(F, p));
        bad += rel(4 * j.hat_H.value(), j.kappa_c.value()) > 1e-7;
        bad += rel(2 * j.hat_K.value(), j.kappa_nu.value() * j.kappa_c.value()) > 1e-7;
    }
    c.expect(bad == 0, "expansion identity failures " + std::to_string(bad));

    bad = 0;
    for (int t = 0; t < trials; ++t) {  // K̂ = 2Ĥκ_ν on second-kind curves
        std::ostringstream s;
        s.precision(17);
        s << "[surface]\nf = [\"v*cos(u) + " << uniform(rng, -1, 1) << "*v^2\", \"v*sin(u) + " << uniform(rng, -1, 1)
          << "*v^2\", \"" << signed_between(rng, 0.5, 2) << "*v + " << uniform(rng, -1, 1) << "*u*v\"]\n";
        const FrontalSurface F = surface_from(s.str());
        const SecondKindInvariants k = second_kind_invariants(chart_at(F, {uniform(rng, -2, 2), 0}));
        bad += rel(k.hat_K, 2 * k.hat_H * k.kappa_nu) > 1e-7;
    }
    c.expect(bad == 0, "HK identity failures " + std::to_string(bad));

    bad = 0;
    const std::pair<const char*, Point2> items[] = {
        {"cuspidal_edge", {0.2, 0}}, {"sw2", {0, 0}}, {"ccr", {0, 0}},  {"s52", {0, 0}},
        {"f1", {0, 0}},              {"cone", {1, 0}}, {"cusp_k", {0, 0}}, {"normal_form", {0, 0}},
    };
    for (int t = 0; t < trials; ++t) {  // coordinate invariance
        const auto& [name, p] = items[t % 8];
        const FrontalSurface A = catalog_surface(name);
        const FrontalSurface B = resolve_normal(reparametrize(catalog_spec(name), p, random_unimodular(rng, t % 2)));
        const Classification la = classify_point(A, p).label, lb = classify_point(B, {0, 0}).label;
        const BoundednessVerdict va = boundedness_report(A, p, la), vb = boundedness_report(B, {0, 0}, lb);
        bad += la != lb;
        bad += va.K.rationally_bounded != vb.K.rationally_bounded || va.K.rationally_continuous != vb.K.rationally_continuous;
        bad += va.H.rationally_bounded != vb.H.rationally_bounded || va.H.rationally_continuous != vb.H.rationally_continuous;
        bad += std::abs(kappa_nu(A, p) - kappa_nu(B, {0, 0})) > 1e-7;
    }
    c.expect(bad == 0, "coordinate invariance failures " + std::to_string(bad));

    bad = 0;
    for (int t = 0; t < trials; ++t) {  // ν -> -ν
        const Params prm{{"ks", uniform(rng, -2, 2)}, {"kn", uniform(rng, -2, 2)}, {"c", signed_between(rng, 0.5, 6)}};
        SurfaceSpec flipped = catalog_spec("ccr", prm);
        for (std::size_t i = 0; i < 3; ++i) (*flipped.normal)[i] = -(*flipped.normal)[i];
        const Point2 p{uniform(rng, -0.3, 0.3), 0};
        const auto a = first_kind_invariants(chart_at(catalog_surface("ccr", prm), p));
        const auto b = first_kind_invariants(chart_at(resolve_normal(flipped), p));
        bad += std::abs(a.kappa_c - b.kappa_c) > 1e-10 || std::abs(a.kappa_nu + b.kappa_nu) > 1e-10;
    }
    c.expect(bad == 0, "normal flip failures " + std::to_string(bad));

    bad = 0;
    const double fact[] = {1, 1, 2, 6, 24, 120};
    for (int t = 0; t < trials; ++t) {  // jets against symbolic derivatives
        std::ostringstream s;
        s.precision(17);
        s << "0";
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; i + j <= 4; ++j) s << " + " << uniform(rng, -2, 2) << "*u^" << i << "*v^" << j;
        const Expression e = parse_expression(s.str(), surface_variables());
        const Point2 p{uniform(rng, -1, 1), uniform(rng, -1, 1)};
        const Jet2 jet = evaluate_jet(e, p, 5);
        const std::vector<double> x{p.u, p.v};
        for (int i = 0; i <= 5; ++i)
            for (int j = 0; i + j <= 5; ++j) {
                Expression d = e;
                for (int k = 0; k < i; ++k) d = d.derivative(0);
                for (int k = 0; k < j; ++k) d = d.derivative(1);
                bad += rel(jet.coeff(i, j), d.evaluate(x, {}) / (fact[i] * fact[j])) > 1e-12;
            }
    }
    c.expect(bad == 0, "jet vs symbolic failures " + std::to_string(bad));
    c.note("6 suites x " + std::to_string(trials) + " trials");
    return c.done();
}

// 11. ambient metric sanity
Outcome ambient_sanity() {
    Checks c;
    std::mt19937_64 rng(11);
    const std::pair<AmbientChart, double> forms[] = {
        {AmbientChart::euclidean(), 0.0}, {AmbientChart::sphere(), 1.0}, {AmbientChart::hyperbolic(), -1.0}};
    double worst_k = 0;
    for (int t = 0; t < 30; ++t) {
        const auto& [ch, K] = forms[t % 3];
        const Vec3 x{uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5), uniform(rng, -0.3, 0.3)};
        const Vec3 a{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
        const Vec3 b{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
        worst_k = std::max(worst_k, std::abs(sectional_curvature(ch, x, a, b) - K));
    }
    c.expect(worst_k <= 1e-8, "sectional curvature error " + fmt(worst_k));

    auto random_jet = [&](int order, double spread) {
        Vec3J f;
        for (auto& comp : f) {
            comp = Jet2(order);
            for (int i = 0; i <= order; ++i)
                for (int j = 0; i + j <= order; ++j) comp.at(i, j) = uniform(rng, -spread, spread);
        }
        return f;
    };
    double worst_m = 0, worst_t = 0;
    for (int t = 0; t < 100; ++t) {
        const AmbientChart& ch = forms[t % 3].first;
        const Vec3J f = random_jet(3, 0.3), X = random_jet(2, 1), Y = random_jet(2, 1);
        const Vec3J f2 = truncated(f, 2), f1 = truncated(f, 1);
        const double dg = inner_product(ch, f2, X, Y).coeff(1, 0);
        const double rhs = inner_product(ch, f1, covariant_derivative(ch, f2, X, Axis::u), truncated(Y, 1)).value() +
                           inner_product(ch, f1, truncated(X, 1), covariant_derivative(ch, f2, Y, Axis::u)).value();
        worst_m = std::max(worst_m, std::abs(dg - rhs));
        const Vec3 a = values(covariant_derivative(ch, f, partial(f, Axis::v), Axis::u));
        const Vec3 b = values(covariant_derivative(ch, f, partial(f, Axis::u), Axis::v));
        worst_t = std::max(worst_t, norm(sub(a, b)));
    }
    c.expect(worst_m <= 1e-9, "metric compatibility error " + fmt(worst_m));
    c.expect(worst_t <= 1e-9, "torsion error " + fmt(worst_t));
    c.note("sectional " + fmt(worst_k) + ", compatibility " + fmt(worst_m) + ", torsion " + fmt(worst_t));
    return c.done();
}

struct Criterion {
    const char* title;
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {"cone kappa_nu = 1/sqrt(2) at 20 samples", cone_normal_curvature},
        {"swallowtail family kappa_nu(0) = 8a and slope -64b/3", swallowtail_family},
        {"sw2 swallowtail invariants", sw2_swallowtail},
        {"sw2 limit of |kappa_c|/(2 sqrt|kappa_s|) equals 2", swallowtail_limit},
        {"cuspidal cross cap example", ccr_example},
        {"5/2-cuspidal edge example", s52_example},
        {"S_k rational boundedness", sk_family},
        {"slice cuspidal curvature", slices},
        {"Gauss map, kappa_nu and K dA agree at front points", gauss_map_agreement},
        {"property suites", properties},
        {"ambient metric sanity", ambient_sanity},
    };
    return all;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    int which = 0;
    app.add_option("--criterion", which, "run only criterion N (1-11)")->check(CLI::Range(1, 11));
    CLI11_PARSE(app, argc, argv);

    bool all_pass = true;
    for (int n = 1; n <= 11; ++n) {
        if (which != 0 && n != which) continue;
        const Criterion& cr = criteria()[static_cast<std::size_t>(n - 1)];
        Outcome o;
        try {
            o = cr.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        all_pass = all_pass && o.pass;
        std::printf("criterion %2d %s  %s (%s)\n", n, o.pass ? "PASS" : "FAIL", cr.title, o.detail.c_str());
    }
    return all_pass ? 0 : 1;
}
