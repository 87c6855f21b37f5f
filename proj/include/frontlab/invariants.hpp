#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "frontlab/errors.hpp"
#include "frontlab/frontal.hpp"

namespace frontlab {

struct FirstKindInvariants {
    double kappa_s = 0, kappa_nu = 0, kappa_c = 0, kappa_pi = 0;
    double d_kappa_s = 0, d_kappa_nu = 0, d_kappa_c = 0, d_kappa_pi = 0;
};

struct SecondKindInvariants {
    double kappa_nu = 0;
    double kappa_H = 0;
    double d_kappa_nu_du = 0;          // derivative of κ_ν along the curve
    std::string parametrization = "u"; // graph variable that derivative refers to
    double hat_H = 0;                  // Ĥ(p) in second-kind normalization
    double hat_K = 0;                  // K̂(p)
    bool swallowtail = false;
    std::optional<double> tau_s;
    std::optional<double> tau_c;
};

/// Quantities along the singular curve through a chart point, as univariate
/// jets in the chart parameter s (restricted to w = 0).
struct CurveJets {
    Jet2 speed;      // |γ̂'|, first kind only
    Jet2 kappa_s;    // first kind only
    Jet2 kappa_nu;   // knp for first kind; the transversal formula otherwise
    Jet2 kappa_c;    // first kind only
    Jet2 psi_ccr;    // det_g(γ̂', ν, ∇_η ν)
    Jet2 hat_H;
    Jet2 hat_K;
    Jet2 wH, wK;     // w·H and w·K on the curve, chart normalization
};

namespace detail {

inline double max_abs(const Vec3J& a) {
    return std::max({a[0].max_abs(), a[1].max_abs(), a[2].max_abs()});
}

struct SecondFundamental {
    Jet2 wH, wK;
};

// w·H and w·K (extrinsic part) on the chart, before normalization.
inline SecondFundamental w_curvatures(const LocalChart& c) {
    const auto& m = c.metric();
    const Vec3J& nu = c.nu();
    const Vec3J Fss = c.cov(Axis::u, c.Fs());
    const Vec3J Fsw = c.cov(Axis::u, c.Fw());
    const Vec3J Fww = c.cov(Axis::v, c.Fw());
    const Jet2 E = inner(m, c.Fs(), c.Fs());
    const Jet2 Fm = inner(m, c.Fs(), c.Fw());
    const Jet2 G = inner(m, c.Fw(), c.Fw());
    const Jet2 L = inner(m, Fss, nu);
    const Jet2 M = inner(m, Fsw, nu);
    const Jet2 N = inner(m, Fww, nu);
    const Jet2 hnum = E * N - 2.0 * Fm * M + G * L;
    const Jet2 knum = L * N - M * M;
    // Cancellation scales: products of the largest first and second
    // fundamental coefficients.
    const double first = E.max_abs() + Fm.max_abs() + G.max_abs();
    const double second = L.max_abs() + M.max_abs() + N.max_abs();
    const double hs = first * second;
    const double ks = second * second;
    const Jet2 lam2 = c.Lambda() * c.Lambda();
    SecondFundamental r;
    r.wH = hnum.deflate(Axis::v, 1e-8, hs) / (2.0 * lam2);
    r.wK = knum.deflate(Axis::v, 1e-8, ks) / lam2;
    return r;
}

} // namespace detail

inline CurveJets curve_jets(const LocalChart& c) {
    const auto& m = c.metric();
    const Vec3J& nu = c.nu();
    const Vec3J& Fs = c.Fs();
    const Vec3J Fss = c.cov(Axis::u, Fs);
    const Vec3J Fww = c.cov(Axis::v, c.Fw());
    const Jet2 E = inner(m, Fs, Fs);
    CurveJets r;

    const auto sf = detail::w_curvatures(c);
    r.wH = sf.wH.along(Axis::u);
    r.wK = sf.wK.along(Axis::u);
    const Vec3J nu_eta = c.cov_eta(nu);
    r.psi_ccr = volume(m, Fs, nu, nu_eta).along(Axis::u);

    if (c.kind() == SingularKind::first) {
        r.speed = sqrt(E).along(Axis::u);
        const double sgn = sign_of(c.Lambda().value() * c.eta_w().value());
        r.kappa_s = (sgn * volume(m, Fs, Fss, nu) / pow_real(E, 1.5)).along(Axis::u);
        r.kappa_nu = (inner(m, Fss, nu) / E).along(Axis::u);
        const Vec3J fe = c.f_eta();
        const Vec3J fee = c.cov_eta(fe);
        const Vec3J feee = c.cov_eta(fee);
        const Vec3J x = cross_metric(m, Fs, fee);
        const Jet2 x2 = inner(m, x, x);
        if (!(x2.value() > 1e-24 * E.value() * std::pow(detail::max_abs(fee), 2)))
            throw DegenerateError("f_ηη is parallel to the singular direction");
        r.kappa_c = (pow_real(E, 0.75) * volume(m, Fs, fee, feee) / pow_real(x2, 1.25)).along(Axis::u);
        // Adapted-coordinate normalization of w·H, w·K.
        const double sigma = sign_of(volume(m, Fs, fee, nu).value());
        const Jet2 perp = sqrt(sqrt(x2 / E));  // sqrt |f_ηη^⊥|
        const Jet2 factor = (sigma * perp / c.eta_w()).along(Axis::u);
        r.hat_H = factor * r.wH;
        r.hat_K = factor * r.wK;
    } else {
        const Jet2 G = inner(m, c.Fw(), c.Fw());
        r.kappa_nu = (inner(m, Fww, nu) / G).along(Axis::u);
        const double fw = std::sqrt(G.value());
        r.hat_H = fw * r.wH;
        r.hat_K = fw * r.wK;
    }
    return r;
}

inline LocalChart chart_at(const FrontalSurface& F, Point2 p, ChartOptions opt = {}) {
    return LocalChart(F, p, LocalChart::internal_order(F.jet_order()), opt);
}

inline FirstKindInvariants first_kind_invariants(const LocalChart& c) {
    if (c.kind() != SingularKind::first) throw DomainError("point is of the second kind");
    const CurveJets j = curve_jets(c);
    const double sp = j.speed.value();
    FirstKindInvariants r;
    r.kappa_s = j.kappa_s.value();
    r.kappa_nu = j.kappa_nu.value();
    r.kappa_c = j.kappa_c.value();
    r.kappa_pi = r.kappa_nu * r.kappa_c;
    r.d_kappa_s = j.kappa_s.coeff(1, 0) / sp;
    r.d_kappa_nu = j.kappa_nu.coeff(1, 0) / sp;
    r.d_kappa_c = j.kappa_c.coeff(1, 0) / sp;
    r.d_kappa_pi = r.d_kappa_nu * r.kappa_c + r.kappa_nu * r.d_kappa_c;
    return r;
}

/// κ_H at a second-kind chart point (chart s-direction is null there).
inline double kappa_H(const LocalChart& c) {
    if (c.kind() != SingularKind::second) throw DomainError("κ_H is defined at second-kind points");
    const Vec3J Fsw = c.cov(Axis::u, c.Fw());
    const Vec3J nus = c.cov(Axis::u, c.nu());
    const Vec3 fw = values(c.Fw());
    const auto mp = metric_at<double>(c.surface().chart(), values(c.F()), c.surface().params(), false);
    const double G = inner(mp, fw, fw);
    const Vec3 x = cross_metric(mp, values(Fsw), fw);
    const double den = inner(mp, x, x);
    if (!(den > 1e-24 * G * std::pow(norm(values(Fsw)), 2)))
        throw DegenerateError("degenerate second-kind frame");
    return -std::pow(G, 1.5) * inner(mp, values(Fsw), values(nus)) / den;
}

/// τ_s at a swallowtail: |det_g(γ̂'', γ̂''', ν)| / |γ̂''|^{5/2}.
inline double tau_s_value(const LocalChart& c) {
    const auto& m = c.metric();
    const Vec3J g2 = c.cov(Axis::u, c.Fs());
    const Vec3J g3 = c.cov(Axis::u, g2);
    const double num = std::abs(volume(m, g2, g3, c.nu()).value());
    const double n2 = inner(m, g2, g2).value();
    if (!(n2 > 0)) throw DomainError("γ̂'' vanishes at the swallowtail");
    return num / std::pow(n2, 1.25);
}

inline bool is_swallowtail_chart(const LocalChart& c, double tol = 1e-8) {
    if (c.kind() != SingularKind::second) return false;
    const double front = norm(values(c.cov_eta(c.nu())));
    if (!(front > tol * std::max(1.0, c.nu_derivative_scale()))) return false;
    return std::abs(c.transversality()) > tol * std::max(1.0, c.eta_scale());
}

inline SecondKindInvariants second_kind_invariants(const LocalChart& c, double tol = 1e-8) {
    if (c.kind() != SingularKind::second) throw DomainError("point is of the first kind");
    const CurveJets j = curve_jets(c);
    SecondKindInvariants r;
    r.kappa_nu = j.kappa_nu.value();
    r.d_kappa_nu_du = c.direction() * j.kappa_nu.coeff(1, 0);
    r.parametrization = c.graph_over_u() ? "u" : "v";
    r.kappa_H = kappa_H(c);
    r.hat_H = j.hat_H.value();
    r.hat_K = j.hat_K.value();
    r.swallowtail = is_swallowtail_chart(c, tol);
    if (r.swallowtail) {
        r.tau_s = tau_s_value(c);
        r.tau_c = std::sqrt(std::abs(*r.tau_s)) * std::abs(r.kappa_H);
    }
    return r;
}

// Spec-level entry points taking a surface and a point.

inline double kappa_nu(const FrontalSurface& F, Point2 p) {
    const LocalChart c = chart_at(F, p);
    return curve_jets(c).kappa_nu.value();
}

inline double kappa_s(const FrontalSurface& F, Point2 p) {
    const LocalChart c = chart_at(F, p);
    if (c.kind() != SingularKind::first) throw DomainError("κ_s is unbounded at second-kind points");
    return curve_jets(c).kappa_s.value();
}

inline double kappa_c(const FrontalSurface& F, Point2 p) {
    const LocalChart c = chart_at(F, p);
    if (c.kind() != SingularKind::first) throw DomainError("κ_c is defined at first-kind points");
    return curve_jets(c).kappa_c.value();
}

inline double kappa_H(const FrontalSurface& F, Point2 p) { return kappa_H(chart_at(F, p)); }

inline double tau_s(const FrontalSurface& F, Point2 p) {
    const LocalChart c = chart_at(F, p);
    if (!is_swallowtail_chart(c)) throw DomainError("not a swallowtail");
    return tau_s_value(c);
}

inline double tau_c(const FrontalSurface& F, Point2 p) {
    const LocalChart c = chart_at(F, p);
    if (!is_swallowtail_chart(c)) throw DomainError("not a swallowtail");
    return std::sqrt(tau_s_value(c)) * std::abs(kappa_H(c));
}

/// Cuspidal curvature of a plane curve at a 3/2-cusp, from the Taylor
/// coefficients x[k], y[k] of σ(t) (k = 0..3 at least).
inline double planar_cusp_curvature(const std::vector<double>& x, const std::vector<double>& y,
                                    double tol = 1e-10) {
    auto c = [](const std::vector<double>& a, std::size_t k) { return k < a.size() ? a[k] : 0.0; };
    const double d1x = c(x, 1), d1y = c(y, 1);
    const double d2x = 2 * c(x, 2), d2y = 2 * c(y, 2);
    const double d3x = 6 * c(x, 3), d3y = 6 * c(y, 3);
    const double s2 = std::hypot(d2x, d2y), s3 = std::hypot(d3x, d3y);
    const double scale = std::max({s2, s3, 1e-300});
    if (std::hypot(d1x, d1y) > tol * scale) throw DomainError("σ'(0) ≠ 0: regular point, not a cusp");
    if (s2 <= tol * scale) throw DomainError("σ''(0) = 0: higher-order cusp");
    const double det = d2x * d3y - d2y * d3x;
    if (std::abs(det) <= tol * s2 * s3 || s3 == 0.0) throw DomainError("det(σ'', σ''') = 0: not a 3/2-cusp");
    return det / std::pow(s2, 2.5);
}

// ---------------------------------------------------------------------------
// Profiles

struct InvariantSample {
    double t = 0;
    Point2 p;
    FirstKindInvariants inv;
    double hat_H = 0, hat_K = 0;
    double psi_ccr = 0, d_psi_ccr = 0;
};

struct InvariantProfile {
    std::vector<InvariantSample> rows;
};

inline InvariantSample invariant_sample(const FrontalSurface& F, const SingularSample& s) {
    ChartOptions opt;
    opt.tangent_hint = s.tangent;
    opt.normal_ref = s.nu;
    const LocalChart c = chart_at(F, s.p, opt);
    if (c.kind() != SingularKind::first) throw DomainError("profile sample is of the second kind");
    const CurveJets j = curve_jets(c);
    const double sp = j.speed.value();
    InvariantSample r;
    r.t = s.t;
    r.p = c.point();
    r.inv.kappa_s = j.kappa_s.value();
    r.inv.kappa_nu = j.kappa_nu.value();
    r.inv.kappa_c = j.kappa_c.value();
    r.inv.kappa_pi = r.inv.kappa_nu * r.inv.kappa_c;
    r.inv.d_kappa_s = j.kappa_s.coeff(1, 0) / sp;
    r.inv.d_kappa_nu = j.kappa_nu.coeff(1, 0) / sp;
    r.inv.d_kappa_c = j.kappa_c.coeff(1, 0) / sp;
    r.inv.d_kappa_pi = r.inv.d_kappa_nu * r.inv.kappa_c + r.inv.kappa_nu * r.inv.d_kappa_c;
    r.hat_H = j.hat_H.value();
    r.hat_K = j.hat_K.value();
    r.psi_ccr = j.psi_ccr.value();
    r.d_psi_ccr = j.psi_ccr.coeff(1, 0) / sp;
    return r;
}

/// Invariants and arclength derivates at every sample; all samples must be
/// of the first kind.
inline InvariantProfile first_kind_profile(const FrontalSurface& F, const std::vector<SingularSample>& samples) {
    InvariantProfile prof;
    for (const auto& s : samples) {
        if (s.kind != SingularKind::first) throw DomainError("first_kind_profile: sample of the second kind");
        prof.rows.push_back(invariant_sample(F, s));
    }
    return prof;
}

// ---------------------------------------------------------------------------
// Limits

/// Polynomial (Neville) extrapolation of y(x) to x = 0.
inline double extrapolate_to_zero(const std::vector<double>& x, std::vector<double> y) {
    const std::size_t n = x.size();
    if (n == 0 || y.size() != n) throw std::invalid_argument("extrapolate_to_zero: size mismatch");
    for (std::size_t m = 1; m < n; ++m)
        for (std::size_t i = 0; i + m < n; ++i)
            y[i] = (x[i + m] * y[i] - x[i] * y[i + 1]) / (x[i + m] - x[i]);
    return y[0];
}

} // namespace frontlab
