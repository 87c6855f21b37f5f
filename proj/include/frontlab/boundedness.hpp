#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frontlab/classify.hpp"
#include "frontlab/frontal.hpp"
#include "frontlab/invariants.hpp"

namespace frontlab {

enum class VerdictMethod { Theorem, Empirical };
inline const char* to_string(VerdictMethod m) { return m == VerdictMethod::Theorem ? "Theorem" : "Empirical"; }

struct FunctionVerdict {
    bool bounded_near = false;
    bool rationally_bounded = false;
    bool rationally_continuous = false;
};

struct BoundednessVerdict {
    FunctionVerdict K, H;
    VerdictMethod method = VerdictMethod::Theorem;
    std::vector<std::pair<std::string, double>> witnesses;
    std::string note;
};

// ---------------------------------------------------------------------------
// Blow-up probe

enum class ProbeScalar { K, H, vK, vH };

inline const char* to_string(ProbeScalar s) {
    switch (s) {
    case ProbeScalar::K: return "K";
    case ProbeScalar::H: return "H";
    case ProbeScalar::vK: return "vK";
    case ProbeScalar::vH: return "vH";
    }
    return "?";
}

inline ProbeScalar parse_probe_scalar(const std::string& s) {
    if (s == "K") return ProbeScalar::K;
    if (s == "H") return ProbeScalar::H;
    if (s == "vK") return ProbeScalar::vK;
    if (s == "vH") return ProbeScalar::vH;
    throw ArgumentError("unknown probe scalar '" + s + "' (expected K, H, vK or vH)");
}

struct ProbeConfig {
    double r_max = 1e-1;
    double r_min = 1e-5;
    int per_decade = 9;
    int n_theta = 720;
    double sector_halfwidth = 0.05;  // radians, around the singular directions
};

struct ProbeSample {
    double r = 0, theta = 0, value = 0;
};

struct BlowupProbe {
    ProbeScalar scalar = ProbeScalar::K;
    Point2 p;
    std::vector<double> radii;           // decreasing
    int n_theta = 0;
    std::vector<double> excluded;        // centres of the excluded sectors
    double sector_halfwidth = 0.0;
    std::vector<ProbeSample> samples;
    std::vector<double> max_per_radius;  // max |value| on each circle
    std::vector<double> decade_max;      // max |value| per decade, from r_max down
    std::size_t failures = 0;
    double empirical_max = 0.0;
    bool bounded = false;
    bool continuous = false;
    std::optional<double> limit;
};

namespace detail {

/// K, H and the transverse coordinate at a regular point q near p.
struct LocalCurvature {
    double K = 0, H = 0;
};

inline LocalCurvature curvature_at(const FrontalSurface& F, Point2 q, const Vec3& n_ref) {
    const Vec3J f = F.map_jet(q, 2);
    const Vec3J fu = partial(f, Axis::u), fv = partial(f, Axis::v);
    const auto m = F.metric_along(truncated(f, 1), true);
    const Vec3J fuu = covariant(m, fu, fu, Axis::u);
    const Vec3J fuv = covariant(m, fv, fu, Axis::v);
    const Vec3J fvv = covariant(m, fv, fv, Axis::v);
    const auto m0 = metric_at<double>(F.chart(), values(f), F.params(), false);
    const Vec3 a = values(fu), b = values(fv);
    const Vec3 C = cross_metric(m0, a, b);
    const double area2 = inner(m0, C, C);
    if (!(area2 > 0.0)) throw DomainError("point on the singular set");
    Vec3 nu = F.normal_mode() == NormalMode::supplied ? F.normal_value(q) : scale(1.0 / std::sqrt(area2), C);
    if (F.normal_mode() == NormalMode::adjugate && inner(m0, nu, n_ref) < 0) nu = neg(nu);
    const double E = inner(m0, a, a), Fm = inner(m0, a, b), G = inner(m0, b, b);
    const double L = inner(m0, values(fuu), nu), M = inner(m0, values(fuv), nu), N = inner(m0, values(fvv), nu);
    LocalCurvature r;
    r.K = (L * N - M * M) / area2;
    if (!F.chart().is_euclidean()) r.K += sectional_curvature(F.chart(), values(f), a, b, F.params());
    r.H = (E * N - 2.0 * Fm * M + G * L) / (2.0 * area2);
    return r;
}

inline double horner(const Jet2& g, double x) {
    double s = 0.0;
    for (int k = g.order(); k >= 0; --k) s = s * x + g.coeff(k, 0);
    return s;
}

inline double decade_ratio_ok(const std::vector<double>& m, double floor) {
    double worst = 0.0;
    for (std::size_t i = 1; i < m.size(); ++i) worst = std::max(worst, (m[i] + floor) / (m[i - 1] + floor));
    return worst;
}

} // namespace detail

/// Sample a curvature function on circles around the singular point p,
/// skipping thin sectors around the singular-curve directions.
inline BlowupProbe blowup_probe(const FrontalSurface& F, ProbeScalar scalar, Point2 p, const ProbeConfig& cfg = {}) {
    if (!(cfg.r_min > 0 && cfg.r_max > cfg.r_min) || cfg.per_decade < 1 || cfg.n_theta < 4)
        throw ArgumentError("invalid probe configuration");
    const LocalChart chart = chart_at(F, p);
    const Point2 c = chart.point();
    const Vec3 n_ref = chart.normal_at_point();
    const Vec2 t = chart.tangent_uv();
    const double th0 = std::atan2(t.v, t.u);

    BlowupProbe out;
    out.scalar = scalar;
    out.p = c;
    out.n_theta = cfg.n_theta;
    out.sector_halfwidth = cfg.sector_halfwidth;
    out.excluded = {std::remainder(th0, 2 * M_PI), std::remainder(th0 + M_PI, 2 * M_PI)};

    const double decades = std::log10(cfg.r_max / cfg.r_min);
    const int nr = static_cast<int>(std::lround(decades * cfg.per_decade)) + 1;
    for (int i = 0; i < nr; ++i) out.radii.push_back(cfg.r_max * std::pow(10.0, -double(i) / cfg.per_decade));

    auto w_of = [&](Point2 q) {
        const double a = chart.graph_over_u() ? q.u - c.u : q.v - c.v;
        const double b = chart.graph_over_u() ? q.v - c.v : q.u - c.u;
        return b - detail::horner(chart.graph(), a);
    };
    auto excluded = [&](double th) {
        for (double e : out.excluded)
            if (std::abs(std::remainder(th - e, 2 * M_PI)) < cfg.sector_halfwidth) return true;
        return false;
    };

    std::vector<double> osc;
    std::vector<double> mean;
    for (double r : out.radii) {
        double mx = 0.0, lo = INFINITY, hi = -INFINITY, sum = 0.0;
        int n = 0;
        for (int k = 0; k < cfg.n_theta; ++k) {
            const double th = -M_PI + 2 * M_PI * (k + 0.5) / cfg.n_theta;
            if (excluded(th)) continue;
            const Point2 q{c.u + r * std::cos(th), c.v + r * std::sin(th)};
            double val;
            try {
                const auto lc = detail::curvature_at(F, q, n_ref);
                switch (scalar) {
                case ProbeScalar::K: val = lc.K; break;
                case ProbeScalar::H: val = lc.H; break;
                case ProbeScalar::vK: val = w_of(q) * lc.K; break;
                case ProbeScalar::vH: val = w_of(q) * lc.H; break;
                default: val = NAN;
                }
                if (!std::isfinite(val)) throw NumericError("non-finite value");
            } catch (const Error&) {
                ++out.failures;
                continue;
            }
            out.samples.push_back({r, th, val});
            mx = std::max(mx, std::abs(val));
            lo = std::min(lo, val);
            hi = std::max(hi, val);
            sum += val;
            ++n;
        }
        out.max_per_radius.push_back(mx);
        osc.push_back(n ? hi - lo : INFINITY);
        mean.push_back(n ? sum / n : NAN);
    }
    for (std::size_t i = 0; i < out.max_per_radius.size(); ++i) {
        out.empirical_max = std::max(out.empirical_max, out.max_per_radius[i]);
        const std::size_t d = i / static_cast<std::size_t>(cfg.per_decade);
        if (i == out.max_per_radius.size() - 1 && d == out.decade_max.size() && d > 0) {
            out.decade_max.back() = std::max(out.decade_max.back(), out.max_per_radius[i]);
            continue;
        }
        if (d >= out.decade_max.size()) out.decade_max.push_back(0.0);
        out.decade_max[d] = std::max(out.decade_max[d], out.max_per_radius[i]);
    }
    const double floor = 1e-12 * std::max(1.0, out.max_per_radius.front());
    out.bounded = std::isfinite(out.empirical_max) && detail::decade_ratio_ok(out.decade_max, floor) < 2.0;
    if (out.bounded) {
        const double o_max = osc.front(), o_min = osc.back();
        const double lim = mean.back();
        out.continuous = o_min <= 1e-2 * o_max || o_min <= 1e-6 * std::max(1.0, std::abs(lim));
        if (out.continuous) out.limit = lim;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Gauss map

struct GaussMapTest {
    std::optional<bool> gauss_singular;  // Euclidean ambient only
    bool kappa_nu_zero = false;
    bool KdA_zero = false;
    double kappa_nu = 0.0;
    double KdA = 0.0;                    // coefficient of K dÂ at p
    std::optional<double> gauss_sigma_min;  // smaller singular value of dν
    bool agree() const {
        return kappa_nu_zero == KdA_zero && (!gauss_singular || *gauss_singular == kappa_nu_zero);
    }
};

inline GaussMapTest gauss_map_singular(const LocalChart& c, double tol = 1e-8) {
    GaussMapTest r;
    const CurveJets j = curve_jets(c);
    r.kappa_nu = j.kappa_nu.value();
    const double nscale = std::max(1.0, c.nu_derivative_scale());
    r.kappa_nu_zero = std::abs(r.kappa_nu) <= tol * nscale;

    const auto sf = detail::w_curvatures(c);
    r.KdA = sf.wK.value() * c.Lambda().value();
    // K dÂ = det_g(ν, ∇ν, ∇ν) du∧dv at p, so |dν|² sets the scale.
    r.KdA_zero = std::abs(r.KdA) <= tol * nscale * nscale;

    if (c.surface().chart().is_euclidean()) {
        const Vec3J nu = c.to_uv(c.nu());
        const Vec3 nu_u{nu[0].coeff(1, 0), nu[1].coeff(1, 0), nu[2].coeff(1, 0)};
        const Vec3 nu_v{nu[0].coeff(0, 1), nu[1].coeff(0, 1), nu[2].coeff(0, 1)};
        // singular values of the 3x2 matrix [ν_u ν_v]
        const double a = dot(nu_u, nu_u), b = dot(nu_u, nu_v), d = dot(nu_v, nu_v);
        const double tr = a + d, det = std::max(0.0, a * d - b * b);
        const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
        const double s_max = std::sqrt(0.5 * tr + disc);
        const double s_min = s_max > 0 ? std::sqrt(det) / s_max : 0.0;
        r.gauss_sigma_min = s_min;
        r.gauss_singular = s_min <= tol * std::max(1.0, s_max);
    }
    return r;
}

inline GaussMapTest gauss_map_singular(const FrontalSurface& F, Point2 p, double tol = 1e-8) {
    return gauss_map_singular(chart_at(F, p), tol);
}

// ---------------------------------------------------------------------------
// Verdicts

struct BoundednessOptions {
    double tolerance = 1e-8;
    const std::vector<SingularSample>* arc = nullptr;  // traced samples around p
    bool run_probe_for_nonfront = true;
    ProbeConfig probe;
};

namespace detail {

inline bool near_zero(double x, double scale, double tol) { return std::abs(x) <= tol * std::max(1.0, scale); }

inline std::vector<SingularSample> local_arc(const FrontalSurface& F, Point2 p) {
    TraceOptions o;
    o.step = 0.02;
    o.max_samples = 21;
    try {
        return trace_singular_curve(F, p, o).samples;
    } catch (const Error&) {
        return {};
    }
}

inline FunctionVerdict empirical_verdict(const FrontalSurface& F, ProbeScalar s, Point2 p, const ProbeConfig& cfg) {
    FunctionVerdict v;
    const BlowupProbe pr = blowup_probe(F, s, p, cfg);
    v.rationally_bounded = pr.bounded;
    v.rationally_continuous = pr.continuous;
    ProbeConfig all = cfg;
    all.sector_halfwidth = 0.0;
    const BlowupProbe full = blowup_probe(F, s, p, all);
    v.bounded_near = pr.bounded && full.bounded;
    return v;
}

} // namespace detail

inline BoundednessVerdict boundedness_report(const FrontalSurface& F, Point2 p, Classification cls,
                                             const BoundednessOptions& opt = {}) {
    BoundednessVerdict v;
    const double tol = opt.tolerance;
    switch (cls) {
    case Classification::Regular:
        v.K = v.H = {true, true, true};
        v.note = "regular point";
        return v;
    case Classification::DegenerateSingular:
        throw DegenerateError("no verdict at a degenerate singular point");
    default:
        break;
    }
    const LocalChart c = chart_at(F, p);
    const std::vector<SingularSample> arc = opt.arc ? *opt.arc : detail::local_arc(F, c.point());

    if (c.kind() == SingularKind::first) {
        const auto inv = first_kind_invariants(c);
        const double s_pi = std::abs(inv.kappa_nu) + std::abs(inv.kappa_c);
        const double s_c = std::abs(inv.kappa_c) + std::abs(inv.kappa_s);
        v.witnesses = {{"kappa_pi", inv.kappa_pi}, {"d_kappa_pi", inv.d_kappa_pi},
                       {"kappa_c", inv.kappa_c},   {"d_kappa_c", inv.d_kappa_c},
                       {"kappa_nu", inv.kappa_nu}};
        v.K.rationally_bounded = detail::near_zero(inv.kappa_pi, s_pi, tol);
        v.K.rationally_continuous = v.K.rationally_bounded && detail::near_zero(inv.d_kappa_pi, s_pi, tol);
        v.H.rationally_bounded = detail::near_zero(inv.kappa_c, s_c, tol);
        v.H.rationally_continuous = v.H.rationally_bounded && detail::near_zero(inv.d_kappa_c, s_c, tol);
        bool pi_arc = v.K.rationally_bounded, c_arc = v.H.rationally_bounded;
        for (const auto& s : arc) {
            if (s.kind != SingularKind::first) { pi_arc = c_arc = false; break; }
            const auto row = invariant_sample(F, s);
            pi_arc = pi_arc && detail::near_zero(row.inv.kappa_pi, std::abs(row.inv.kappa_nu) + std::abs(row.inv.kappa_c), tol);
            c_arc = c_arc && detail::near_zero(row.inv.kappa_c, std::abs(row.inv.kappa_c) + std::abs(row.inv.kappa_s), tol);
        }
        v.K.bounded_near = pi_arc;
        v.H.bounded_near = c_arc;
        v.method = VerdictMethod::Theorem;
        return v;
    }

    const bool front = cls == Classification::Swallowtail || cls == Classification::SecondKindFrontNonSwallowtail;
    const auto inv = second_kind_invariants(c, tol);
    const CurveJets j = curve_jets(c);
    const double d_kappa_H = 2.0 * c.direction() * j.hat_H.coeff(1, 0);
    v.witnesses = {{"kappa_nu", inv.kappa_nu}, {"omega_nu", inv.d_kappa_nu_du},
                   {"kappa_H", inv.kappa_H},   {"d_kappa_H", d_kappa_H}};
    if (!front) {
        v.method = VerdictMethod::Empirical;
        v.note = "second kind, not a front: no theorem applies; probe verdict only";
        v.K = detail::empirical_verdict(F, ProbeScalar::K, c.point(), opt.probe);
        v.H = detail::empirical_verdict(F, ProbeScalar::H, c.point(), opt.probe);
        return v;
    }
    const double s = std::max(1.0, c.nu_derivative_scale());
    v.K.rationally_bounded = detail::near_zero(inv.kappa_nu, s, tol);
    v.K.rationally_continuous = v.K.rationally_bounded && detail::near_zero(inv.d_kappa_nu_du, s, tol);
    v.H.rationally_bounded = detail::near_zero(inv.kappa_H, s, tol);
    v.H.rationally_continuous = v.H.rationally_bounded && detail::near_zero(d_kappa_H, s, tol);
    bool nu_arc = v.K.rationally_bounded, c_arc = v.H.rationally_bounded;
    for (const auto& smp : arc) {
        if (!nu_arc && !c_arc) break;
        ChartOptions co;
        co.tangent_hint = smp.tangent;
        co.normal_ref = smp.nu;
        const LocalChart cs = chart_at(F, smp.p, co);
        const CurveJets js = curve_jets(cs);
        nu_arc = nu_arc && detail::near_zero(js.kappa_nu.value(), s, tol);
        if (cs.kind() == SingularKind::first) c_arc = c_arc && detail::near_zero(js.kappa_c.value(), s, tol);
    }
    v.K.bounded_near = nu_arc;
    v.H.bounded_near = c_arc;
    v.method = VerdictMethod::Theorem;
    return v;
}

inline BoundednessVerdict boundedness_report(const FrontalSurface& F, Point2 p, const BoundednessOptions& opt = {}) {
    ClassifyOptions co;
    co.tolerance = opt.tolerance;
    return boundedness_report(F, p, classify_point(F, p, co).label, opt);
}

} // namespace frontlab
