#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "frontlab/frontal.hpp"
#include "frontlab/invariants.hpp"

namespace frontlab {

enum class Classification {
    Regular,
    CuspidalEdge,
    Swallowtail,
    CuspidalCrossCap,
    FirstKindNonFrontDegenerate,
    SecondKindFrontNonSwallowtail,
    SecondKindNonFront,
    DegenerateSingular,
};

inline const char* to_string(Classification c) {
    switch (c) {
    case Classification::Regular: return "Regular";
    case Classification::CuspidalEdge: return "CuspidalEdge";
    case Classification::Swallowtail: return "Swallowtail";
    case Classification::CuspidalCrossCap: return "CuspidalCrossCap";
    case Classification::FirstKindNonFrontDegenerate: return "FirstKindNonFrontDegenerate";
    case Classification::SecondKindFrontNonSwallowtail: return "SecondKindFrontNonSwallowtail";
    case Classification::SecondKindNonFront: return "SecondKindNonFront";
    case Classification::DegenerateSingular: return "DegenerateSingular";
    }
    return "?";
}

/// Raw values behind a classification, reported so borderline cases can be
/// audited.
struct Evidence {
    Point2 p;                           // after projection onto λ = 0
    double lambda = 0.0;                // |f_u ×_g f_v| at the input point
    Vec2 lambda_grad{0.0, 0.0};
    std::optional<SingularKind> kind;
    double kind_measure = 0.0;
    bool is_front = false;
    double front_measure = 0.0;         // |∇_η ν|
    std::optional<double> psi_ccr;      // first kind
    std::optional<double> d_psi_ccr;    // first kind, per arclength of f∘γ
    std::optional<double> transversality;  // second kind
    std::string note;
};

struct ClassificationResult {
    Classification label = Classification::Regular;
    Evidence evidence;
};

struct ClassifyOptions {
    double tolerance = 1e-8;
    std::optional<Vec2> tangent_hint;
    std::optional<Vec3> normal_ref;
};

namespace detail {

inline double front_measure(const LocalChart& c) { return norm(values(c.cov_eta(c.nu()))); }

inline bool front_test(const LocalChart& c, double tol) {
    return front_measure(c) > tol * std::max(1.0, c.nu_derivative_scale());
}

inline bool is_singular_value(const FrontalSurface& F, Point2 p, double tol, double* lam) {
    const auto fr = F.frame(p);
    const double c = norm_g(fr.g, fr.C);
    if (lam) *lam = c;
    return c <= tol * FrontalSurface::lambda_scale(fr);
}

} // namespace detail

/// ψ_ccr along the singular curve through a first-kind point, as a jet in
/// the chart parameter s (w = 0).
inline Jet2 psi_ccr_jet(const FrontalSurface& F, Point2 p, int order) {
    const LocalChart c(F, p, LocalChart::internal_order(order));
    if (c.kind() != SingularKind::first) throw DomainError("ψ_ccr needs a point of the first kind");
    return curve_jets(c).psi_ccr.truncated(order);
}

inline bool is_front_at(const FrontalSurface& F, Point2 p, double tol = 1e-8) {
    return detail::front_test(chart_at(F, p), tol);
}

/// Decision tree on an already built chart.
inline ClassificationResult classify_chart(const LocalChart& c, double tol = 1e-8) {
    ClassificationResult r;
    Evidence& e = r.evidence;
    e.p = c.point();
    e.lambda_grad = c.lambda_grad_uv();
    e.kind = c.kind();
    e.kind_measure = c.kind_measure();
    e.front_measure = detail::front_measure(c);
    e.is_front = detail::front_test(c, tol);
    if (c.kind() == SingularKind::first) {
        const CurveJets j = curve_jets(c);
        const double sp = j.speed.value();
        e.psi_ccr = j.psi_ccr.value();
        e.d_psi_ccr = j.psi_ccr.coeff(1, 0) / sp;
        const double scale = std::max(1.0, sp * c.nu_derivative_scale());
        const bool psi_zero = std::abs(*e.psi_ccr) <= tol * scale;
        const bool dpsi_zero = std::abs(*e.d_psi_ccr) <= tol * scale;
        if (!psi_zero) r.label = Classification::CuspidalEdge;
        else if (!dpsi_zero) r.label = Classification::CuspidalCrossCap;
        else r.label = Classification::FirstKindNonFrontDegenerate;
    } else {
        e.transversality = c.transversality();
        if (!e.is_front) r.label = Classification::SecondKindNonFront;
        else if (std::abs(*e.transversality) > tol * std::max(1.0, c.eta_scale())) r.label = Classification::Swallowtail;
        else r.label = Classification::SecondKindFrontNonSwallowtail;
    }
    return r;
}

inline ClassificationResult classify_point(const FrontalSurface& F, Point2 p, const ClassifyOptions& opt = {}) {
    ClassificationResult r;
    r.evidence.p = p;
    if (!detail::is_singular_value(F, p, opt.tolerance, &r.evidence.lambda)) {
        r.label = Classification::Regular;
        r.evidence.is_front = true;
        return r;
    }
    ChartOptions co;
    co.tangent_hint = opt.tangent_hint;
    co.normal_ref = opt.normal_ref;
    co.kind_tolerance = opt.tolerance;
    try {
        const LocalChart c(F, p, LocalChart::internal_order(F.jet_order()), co);
        auto out = classify_chart(c, opt.tolerance);
        out.evidence.lambda = r.evidence.lambda;
        return out;
    } catch (const DegenerateError& ex) {
        r.label = Classification::DegenerateSingular;
        r.evidence.note = ex.what();
        return r;
    }
}

inline ClassificationResult classify_sample(const FrontalSurface& F, const SingularSample& s, double tol = 1e-8) {
    ClassifyOptions opt;
    opt.tolerance = tol;
    opt.tangent_hint = s.tangent;
    opt.normal_ref = s.nu;
    return classify_point(F, s.p, opt);
}

/// Points on a traced first-kind arc where ψ_ccr changes sign, refined by
/// bisection along the curve (cuspidal cross cap candidates).
inline std::vector<SingularSample> locate_psi_zeros(const FrontalSurface& F, const std::vector<SingularSample>& samples,
                                                    double tol = 1e-8) {
    std::vector<SingularSample> found;
    auto psi = [&](const SingularSample& s) {
        ChartOptions co;
        co.tangent_hint = s.tangent;
        co.normal_ref = s.nu;
        const LocalChart c = chart_at(F, s.p, co);
        if (c.kind() != SingularKind::first) throw DomainError("second kind");
        return curve_jets(c).psi_ccr.value();
    };
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const auto& A = samples[i - 1];
        const auto& B = samples[i];
        if (A.kind != SingularKind::first || B.kind != SingularKind::first) continue;
        double fa, fb;
        try {
            fa = psi(A);
            fb = psi(B);
        } catch (const Error&) {
            continue;
        }
        if (fa == 0.0) { found.push_back(A); continue; }
        if (fa * fb >= 0) continue;
        double lo = 0.0, hi = 1.0;
        SingularSample mid = A;
        for (int it = 0; it < 60; ++it) {
            const double x = 0.5 * (lo + hi);
            const Point2 guess{A.p.u + x * (B.p.u - A.p.u), A.p.v + x * (B.p.v - A.p.v)};
            try {
                mid = detail::probe_sample(F, F.correct_to_singular(guess, A.nu), A.tangent, A.nu, tol).s;
                const double fm = psi(mid);
                if (std::abs(fm) <= 1e-15 || hi - lo < 1e-14) break;
                if ((fm < 0) == (fa < 0)) lo = x;
                else hi = x;
            } catch (const Error&) {
                break;
            }
        }
        mid.located = true;
        mid.t = A.t + 0.5 * (lo + hi) * (B.t - A.t);
        found.push_back(mid);
    }
    return found;
}

} // namespace frontlab
